#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "modcurv/report.hpp"

namespace modcurv::cli {

inline constexpr const char* kSchema = "modcurv-report/1";

// Exit codes
inline constexpr int kPass = 0;
inline constexpr int kUsage = 1;
inline constexpr int kFailed = 2;

nlohmann::json to_json(const VerificationReport& r, bool timing);

// argv-style entry point; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modcurv::cli
