#include "modcurv/report.hpp"

#include <algorithm>

namespace modcurv {

const char* status_name(Status s) {
  switch (s) {
    case Status::ExactZero: return "exact-zero";
    case Status::WithinTolerance: return "within-tolerance";
    case Status::Failed: return "FAILED";
  }
  return "?";
}

void VerificationReport::numeric(double err) {
  max_error = std::max(max_error, err);
  if (max_error > tolerance) status = Status::Failed;
}

void merge(VerificationReport& a, const VerificationReport& b) {
  if (a.status == Status::Failed || b.status == Status::Failed) a.status = Status::Failed;
  else if (a.status == Status::WithinTolerance || b.status == Status::WithinTolerance) a.status = Status::WithinTolerance;
  a.max_error = std::max(a.max_error, b.max_error);
  for (const auto& t : b.trace) a.trace.push_back(b.relation + ": " + t);
  for (const auto& d : b.details) a.details.push_back({b.relation + "." + d.first, d.second});
  a.trials.insert(a.trials.end(), b.trials.begin(), b.trials.end());
  a.seconds += b.seconds;
}

}  // namespace modcurv
