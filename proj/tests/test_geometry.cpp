#include <gtest/gtest.h>

#include <map>

#include "modcurv/geometry.hpp"
#include "modcurv/hfamily.hpp"
#include "oracles.hpp"

using namespace modcurv;

namespace {

std::map<std::string, std::string> details(const VerificationReport& r) {
  return {r.details.begin(), r.details.end()};
}

}  // namespace

TEST(Geometry, TAgainstKSymbolic) {
  const VerificationReport r = verify_T_vs_K();
  EXPECT_EQ(r.status, Status::ExactZero) << r.residual;
  EXPECT_EQ(details(r)["intermediate_form_matches"], "true");
}

TEST(Geometry, TAgainstKFixed) {
  for (int m : {2, 3, 7}) EXPECT_EQ(verify_T_vs_K(MMode::fixed(m)).status, Status::ExactZero) << m;
}

TEST(Geometry, HAgainstK) {
  for (const MMode& mode : {MMode::symbolic(), MMode::fixed(2)}) {
    const VerificationReport r = verify_H_vs_K(mode);
    EXPECT_EQ(r.status, Status::ExactZero) << mode.str() << " " << r.residual;
    auto d = details(r);
    EXPECT_EQ(d["endpoint_matches"], "true");
    // the one-sided sigma form is not an identity
    EXPECT_EQ(d["literal_one_sided_sigma_form"], "nonzero");
  }
}

TEST(Geometry, TAssembledFromCurvature) {
  const SpectralExpr diff = build_T() - assemble_T_from_curvature();
  EXPECT_TRUE(zero_test(diff, MMode::symbolic()).zero());
}

TEST(Geometry, OPS) {
  const VerificationReport r = verify_OPS();
  EXPECT_EQ(r.status, Status::ExactZero) << r.residual;
  const OPSForms f = build_T_OPS();
  EXPECT_TRUE((f.eta_K - rq(1, 6)).is_zero());
  EXPECT_TRUE(zero_test(f.intermediate - f.reduced, MMode::fixed(2)).zero());
  // continuous across the switch to the series at |y - 1| = 0.1
  for (double y : {0.9, 1.1}) EXPECT_NEAR(ops_kernel_L(y - 1e-12), ops_kernel_L(y + 1e-12), 1e-11);
  const double y = 1.0 + 1e-4;
  EXPECT_NEAR(ops_kernel_L(y), 0.5 - 2.0 / 3 * 1e-4 + 0.75 * 1e-8 - 0.8 * 1e-12, 1e-15);
  EXPECT_NEAR(ops_kernel_L(1.0), 0.5, 1e-15);
  EXPECT_NEAR(symmetrized_T_OPS_numeric(1.0), 1.0 / 6, 1e-15);
}

TEST(Geometry, GaussBonnet) {
  const VerificationReport r = verify_gauss_bonnet(20);
  EXPECT_TRUE(r.passed()) << r.residual;
  EXPECT_LT(r.max_error, 1e-9);
}

TEST(Geometry, CmH) {
  const VerificationReport r = verify_cm_h({2, 3, 4, 6}, 7, 1e-8);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.max_error, 1e-8);
}

TEST(Geometry, CurvatureNumericMatchesOracle) {
  const double m = 3.0;
  const CurvatureNumeric c(m);
  for (double yv : {0.3, 0.8, 1.5}) {
    const double z = 1 - yv;
    const double K = 4 / m * oracle::H1(3, 1, z, m) - oracle::H1(2, 1, z, m);
    EXPECT_NEAR(c.K(yv), K, 1e-11);
  }
  EXPECT_NEAR(c.K_tilde(0.0), c.K(1.0), 1e-14);
}

TEST(Geometry, AtModeSubstitutesGamma) {
  // Gamma(1) = 1 at m = 2
  const SpectralExpr e = SpectralExpr(RationalExpr::gamma() * rm());
  const auto r = at_mode(e, MMode::fixed(2)).as_rational();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, RationalExpr(2));
}
