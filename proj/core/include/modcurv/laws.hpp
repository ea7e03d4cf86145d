#pragma once
// Operator-law suite: divided-difference rules, cyclicity of sigma/tau, and the
// internal relations, exact on rational inputs and numeric on closures.

#include "modcurv/report.hpp"

namespace modcurv {

struct LawConfig {
  unsigned long seed = 1;
  int rational_corpus = 50;
  int closure_corpus = 20;
  double tol = 1e-10;
};

VerificationReport verify_divdiff_rules();
VerificationReport verify_cyclicity(const LawConfig& cfg = {});
VerificationReport verify_internal_relations(const LawConfig& cfg = {});
// All of the above merged.
VerificationReport verify_operator_laws(const LawConfig& cfg = {});

}  // namespace modcurv
