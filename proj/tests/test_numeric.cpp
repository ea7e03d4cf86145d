#include <gtest/gtest.h>

#include <sstream>

#include "modcurv/divdiff.hpp"
#include "modcurv/geometry.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/numeric.hpp"
#include "oracles.hpp"

using namespace modcurv;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST(Numeric, KAtOneExactSymbolic) {
  const SpectralExpr K = build_curvature().K;
  const RationalExpr k0 = taylor_coefficient_at_zero(K, 0);
  EXPECT_TRUE((k0 - RationalExpr::gamma() * (4 - rm()) / 12).is_zero()) << k0.str();
}

TEST(Numeric, KAtOneNumeric) {
  for (double m : {2.0, 3.0, 4.0, 5.0}) {
    const CurvatureNumeric c(m);
    EXPECT_NEAR(c.K(1.0), double(oracle::K_at_one(m)), 1e-12) << m;
  }
  EXPECT_NEAR(CurvatureNumeric(2.0).K(1.0), 1.0 / 6, 1e-13);
  EXPECT_NEAR(CurvatureNumeric(4.0).K(1.0), 0.0, 1e-13);
}

TEST(Numeric, CurvaturePairAgainstSeriesOracle) {
  // K = (4/m)H31 - H21, H = (4/m+2)H211 - 4(1-z1)/m H221 - (8/m)H311
  const CurvaturePair P = build_curvature();
  const SpectralExpr Kr = reduce_full(P.K), Hr = reduce_full(P.H);
  for (double m : {3.0, 5.0}) {
    for (double z : {-0.7, -0.2, 0.15, 0.4, 0.6}) {
      const double want = 4 / m * oracle::H1(3, 1, z, m) - oracle::H1(2, 1, z, m);
      EXPECT_LT(rel(evaluate(P.K, m, {z, 0, 0}), want), 1e-10);
      EXPECT_LT(rel(evaluate(Kr, m, {z, 0, 0}), want), 1e-8);
    }
    for (auto [z1, z2] : std::vector<std::pair<double, double>>{
             {0.2, 0.5}, {-0.4, 0.3}, {0.45, -0.45}, {-0.6, -0.2}, {0.1, 0.35}}) {
      const double want = (4 / m + 2) * oracle::H2(2, 1, 1, z1, z2, m) -
                          4 * (1 - z1) / m * oracle::H2(2, 2, 1, z1, z2, m) - 8 / m * oracle::H2(3, 1, 1, z1, z2, m);
      EXPECT_LT(rel(evaluate(P.H, m, {0, z1, z2}), want), 1e-10);
      EXPECT_LT(rel(evaluate(Hr, m, {0, z1, z2}), want), 1e-8);
    }
  }
}

TEST(Numeric, DualPathsAgree) {
  for (int a = 1; a <= 4; ++a)
    for (double z : {-3.0, -0.9, -0.2, 0.3, 0.8, 0.95}) {
      const PathValues p = eval_H1_paths(a, 2, z, 3.5);
      EXPECT_LT(p.discrepancy, 1e-9) << a << " " << z;
      EXPECT_LT(rel(p.value, oracle::H1(a, 2, z, 3.5)), 1e-10);
    }
}

TEST(Numeric, H0bClosedForms) {
  // H_{0,1} = Gamma(m/2-1) y^{1-m/2}; finite part -log y at m = 2
  EXPECT_NEAR(eval_H1(0, 1, 0.5, 2.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(eval_H1(0, 1, 0.5, 3.0), std::tgamma(0.5) * std::pow(0.5, -0.5), 1e-13);
  EXPECT_NEAR(eval_H1(0, 2, 0.5, 3.0), std::tgamma(1.5) * std::pow(0.5, -1.5), 1e-13);
}

TEST(Numeric, Errors) {
  EXPECT_THROW(eval_H1(1, 1, 1.0, 3.0), BranchPoint);
  EXPECT_THROW(eval_H1(1, 1, 1.5, 3.0), BranchPoint);
  EXPECT_THROW(eval_H1(-1, 1, 0.2, 3.0), std::invalid_argument);
  EXPECT_THROW(eval_H2_quad(0, 1, 1, 0.2, 0.1, 3.0), std::invalid_argument);
  EXPECT_THROW(g_pow1(-1.0, 2.0), std::domain_error);
}

TEST(Numeric, EvalHCommandExample) { EXPECT_NEAR(eval_H1(1, 1, 0.5, 2.0), 1.3862944, 5e-8); }

TEST(Numeric, GClosedForm) {
  for (double m : {2.0, 3.0, 6.0})
    for (double z : {-2.0, -0.5, 0.3, 0.9}) {
      const double want = std::tgamma(m / 2) * (std::pow(1 - z, -m / 2) - 1) / z;
      EXPECT_LT(rel(eval_G(z, m), want), 1e-13);
    }
  EXPECT_NEAR(eval_G(0.0, 3.0), std::tgamma(1.5) * 1.5, 1e-14);
}

TEST(Numeric, ExpDividedDifferences) {
  auto ex = [](long double x) { return std::exp(x); };
  EXPECT_NEAR(exp_divdiff({0.1, 0.7, -0.4}), double(oracle::divdiff(ex, {0.1, 0.7, -0.4})), 1e-14);
  // repeated nodes: e^c / n!
  EXPECT_NEAR(exp_divdiff({0.5, 0.5, 0.5}), std::exp(0.5) / 2, 1e-15);
  EXPECT_NEAR(exp_divdiff({0.0, 1e-12}), 1.0, 1e-12);
  EXPECT_NEAR(g_exp1(0.8, 2.0), std::expm1(1.6) / 0.8, 1e-14);
  EXPECT_NEAR(g_exp1(0.0, 2.0), 2.0, 1e-14);
  auto e2 = [](long double x) { return std::exp(2 * x); };
  EXPECT_NEAR(g_exp11(0.3, -0.9, 2.0), double(oracle::divdiff(e2, {0, 0.3, -0.6})), 1e-13);
}

TEST(Numeric, PowerDividedDifferences) {
  for (double j : {-2.0, -0.5, 1.5, 3.0}) {
    auto p = [j](long double x) { return std::pow(x, (long double)j); };
    EXPECT_NEAR(g_pow1(2.5, j), (std::pow(2.5, j) - 1) / 1.5, 1e-13);
    EXPECT_NEAR(g_pow11(2.0, 0.7, j), double(oracle::divdiff(p, {1, 2.0, 1.4})), 1e-12);
    // close nodes handled by the cluster expansion
    const double c = g_pow11(1.0 + 1e-7, 1.0, j);
    EXPECT_NEAR(c, j * (j - 1) / 2, 1e-6);
  }
}

TEST(Numeric, ClusteredDividedDifference) {
  const double x0 = 0.3, h = 1e-4;
  auto f = [](double x) { return std::exp(x); };
  auto taylor = [](double x, int k) { return std::exp(x) / std::tgamma(k + 1.0); };
  const double want = std::exp(x0) * std::expm1(h) * std::expm1(h) / (2 * h * h);
  EXPECT_LT(rel(numeric_divided_difference(f, taylor, {x0, x0 + h, x0 + 2 * h}, 1e-2), want), 1e-13);
  // confluent
  EXPECT_LT(rel(numeric_divided_difference(f, taylor, {x0, x0, x0}), std::exp(x0) / 2), 1e-15);
}

TEST(Numeric, TwoVariableConfluentNodes) {
  const double m = 3.0;
  for (double eps : {1e-3, 1e-5, 1e-7, 1e-9, 0.0}) {
    const double z1 = 0.25, z2 = 0.25 + eps;
    EXPECT_LT(rel(eval_H2(1, 2, 1, z1, z2, m), oracle::H2(1, 2, 1, z1, z2, m)), 1e-11) << eps;
  }
}

TEST(Numeric, DedekindEta) {
  // eta(i) = Gamma(1/4) / (2 pi^{3/4})
  const std::complex<double> e = dedekind_eta({0.0, 1.0});
  EXPECT_NEAR(e.real(), std::tgamma(0.25) / (2 * std::pow(M_PI, 0.75)), 1e-14);
  EXPECT_NEAR(e.imag(), 0.0, 1e-14);
  EXPECT_NEAR(dedekind_constant({0.0, 1.0}), -std::log(4 * M_PI * M_PI * std::pow(std::abs(e), 4)), 1e-13);
}

TEST(Numeric, CsvLayout) {
  std::ostringstream os;
  write_csv(os, {{"H11", 0.5, 0, 2, 1.3862943611198906, "quadrature", 0}});
  EXPECT_EQ(os.str(), "indices,z1,z2,m,value,path,error\nH11,0.5,0,2,1.3862943611198906,quadrature,0\n");
}
