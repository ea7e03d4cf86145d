#pragma once
// Outcome of one relation check.

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace modcurv {

enum class Status { ExactZero, WithinTolerance, Failed };
const char* status_name(Status s);

struct TrialLog {
  unsigned long seed = 0;
  int n = 0;
  double residual = 0;
};

struct VerificationReport {
  std::string relation;
  std::string mode;  // symbolic-m | fixed-m | numeric | matrix-model
  Status status = Status::Failed;
  std::string residual = "0";  // exact residual (normal form text) when symbolic
  double max_error = 0;        // numeric residual
  double tolerance = 0;
  std::vector<std::string> trace;
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<TrialLog> trials;
  double seconds = 0;

  bool passed() const { return status != Status::Failed; }
  void note(std::string step) { trace.push_back(std::move(step)); }
  void detail(std::string key, std::string value) { details.emplace_back(std::move(key), std::move(value)); }
  // Fold a numeric residual into max_error; fails the report above tolerance.
  void numeric(double err);
};

// Merge b into a: the combined status is the weaker one.
void merge(VerificationReport& a, const VerificationReport& b);

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace modcurv
