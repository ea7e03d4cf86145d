// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "corpus.hpp"
#include "modcurv/divdiff.hpp"
#include "modcurv/geometry.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/laws.hpp"
#include "modcurv/matrixmodel.hpp"
#include "modcurv/numeric.hpp"
#include "oracles.hpp"

using namespace modcurv;

namespace {

struct Outcome {
  bool pass = false;
  std::string info;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::map<std::string, std::string> details(const VerificationReport& r) { return {r.details.begin(), r.details.end()}; }

bool trace_has(const VerificationReport& r, const std::string& s) {
  for (const auto& t : r.trace)
    if (t.find(s) != std::string::npos) return true;
  return false;
}

Outcome t_vs_k() {
  const VerificationReport r = verify_T_vs_K(MMode::symbolic());
  const bool inter = details(r)["intermediate_form_matches"] == "true";
  return {r.status == Status::ExactZero && inter && r.seconds < 10,
          std::string(status_name(r.status)) + ", intermediate (m-4)/12 form " + (inter ? "matched" : "NOT matched") +
              ", " + fmt(r.seconds) + " s"};
}

Outcome cm_k() {
  Stopwatch sw;
  const VerificationReport s = verify_H_vs_K(MMode::symbolic());
  const VerificationReport f = verify_H_vs_K(MMode::fixed(2));
  const bool constant = trace_has(s, "is constant") && trace_has(f, "is constant");
  const bool end = details(s)["endpoint_matches"] == "true" && details(f)["endpoint_matches"] == "true";
  const double t = sw.seconds();
  return {s.status == Status::ExactZero && f.status == Status::ExactZero && constant && end && t < 30,
          std::string("symbolic ") + status_name(s.status) + ", m=2 " + status_name(f.status) + ", inner expression " +
              (constant ? "constant" : "NOT constant") + "; one-sided form read with sigma^{-1} (sigma^{1} form " +
              details(s)["literal_one_sided_sigma_form"] + "), " + fmt(t) + " s"};
}

Outcome ops() {
  const VerificationReport r = verify_OPS();
  const OPSForms f = build_T_OPS();
  const bool eta = (f.eta_K - rq(1, 6)).is_zero();
  const double k1 = evaluate(f.K, 2, NumPoint{});
  const double side = 2 * T_OPS_numeric(1.0);
  const bool boundary = eta && std::abs(k1 - 1.0 / 6) < 1e-14 && std::abs(side - 1.0 / 6) < 1e-12;
  return {r.status == Status::ExactZero && boundary && r.seconds < 10,
          std::string(status_name(r.status)) + ", exact K(1) = 1/6 " + (eta ? "yes" : "no") + ", y=1 values " + fmt(k1) +
              " / " + fmt(side) + ", " + fmt(r.seconds) + " s"};
}

Outcome gauss_bonnet() {
  const VerificationReport r = verify_gauss_bonnet(20);
  return {r.status == Status::ExactZero && r.max_error < 1e-9,
          std::string(status_name(r.status)) + ", max |(1+tau_0)T~| over 20 points " + fmt(r.max_error)};
}

Outcome cm_h() {
  const VerificationReport r = verify_cm_h({2, 3, 4, 6}, 7, 1e-8);
  return {r.passed() && r.max_error < 1e-8 && r.seconds < 60,
          "7x7 grid, m in {2,3,4,6}, max residual " + fmt(r.max_error) + ", " + fmt(r.seconds) + " s"};
}

Outcome backends() {
  int agree = 0, zeros = 0;
  const auto entries = corpus::build(500, 2024);
  for (const auto& en : entries) {
    const ZeroTest zt = zero_test(en.e, en.mode);
    agree += zt.agree();
    zeros += zt.zero();
  }
  return {agree == 500, std::to_string(agree) + "/500 agree (" + std::to_string(zeros) + " zero)"};
}

Outcome numeric_oracle() {
  double worst = 0;
  int exprs = 0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  const std::vector<double> zs{-0.8, -0.3, 0.2, 0.45, 0.7};
  const std::vector<std::pair<double, double>> zz{{0.2, 0.5}, {-0.4, 0.3}, {0.45, -0.45}, {-0.6, -0.2}, {0.1, 0.35}};
  for (double m : {3.0, 5.0}) {
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; a + b <= 6; ++b) {
        const SpectralExpr red = reduce_h1(a, b);
        ++exprs;
        for (double z : zs) {
          const PathValues p = eval_H1_paths(a, b, z, m);
          const double v = evaluate(red, m, {z, 0, 0});
          worst = std::max({worst, rel(v, p.quadrature), rel(v, p.series)});
        }
      }
    for (int a = 1; a <= 4; ++a)
      for (int b = 1; a + b <= 5; ++b)
        for (int c = 1; a + b + c <= 6; ++c) {
          const SpectralExpr red = reduce_h2(a, b, c);
          ++exprs;
          for (auto [z1, z2] : zz) {
            const double v = evaluate(red, m, {0, z1, z2});
            worst = std::max({worst, rel(v, eval_H2_quad(a, b, c, z1, z2, m)),
                              rel(v, eval_H2_divdiff(a, b, c, z1, z2, m))});
          }
        }
  }
  // K(1;m) = Gamma(m/2)(4-m)/12, exactly and numerically
  const RationalExpr k0 = taylor_coefficient_at_zero(build_curvature().K, 0);
  const bool exact = (k0 - RationalExpr::gamma() * (4 - rm()) / 12).is_zero();
  double kerr = 0;
  for (double m : {2.0, 3.0, 4.0, 5.0}) kerr = std::max(kerr, std::abs(CurvatureNumeric(m).K(1.0) - double(oracle::K_at_one(m))));
  const bool k_ok = exact && kerr < 1e-10 && std::abs(CurvatureNumeric(2).K(1.0) - 1.0 / 6) < 1e-12 &&
                    std::abs(CurvatureNumeric(4).K(1.0)) < 1e-12;
  return {worst < 1e-8 && k_ok, std::to_string(exprs) + " reductions x 5 points, max rel " + fmt(worst) +
                                    "; K(1;m) exact " + (exact ? "yes" : "no") + ", numeric err " + fmt(kerr)};
}

Outcome matrix_model() {
  const VerificationReport r = verify_matrix_model();
  return {r.passed() && r.max_error < 1e-9 && r.seconds < 60,
          "N = 2..8, 20 trials, " + std::to_string(r.trials.size()) + " trial logs, max residual " + fmt(r.max_error) +
              ", " + fmt(r.seconds) + " s"};
}

Outcome operator_laws() {
  const VerificationReport r = verify_operator_laws();
  std::string rational = "?";
  for (const auto& [k, v] : r.details)
    if (k.find("rational_passed") != std::string::npos) rational = v;
  return {r.passed() && r.max_error <= 1e-10,
          std::string(status_name(r.status)) + ", " + std::to_string(r.trace.size()) + " trace entries, rational corpus " +
              rational + ", numeric max " + fmt(r.max_error)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"verify-t-k", t_vs_k},           {"verify-cm-k", cm_k},
      {"verify-ops", ops},              {"verify-gauss-bonnet", gauss_bonnet},
      {"verify-cm-h", cm_h},            {"backend-redundancy", backends},
      {"numeric-oracle", numeric_oracle}, {"matrix-model", matrix_model},
      {"operator-laws", operator_laws},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.info.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
