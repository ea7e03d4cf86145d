#include <gtest/gtest.h>

#include "modcurv/divdiff.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/numeric.hpp"
#include "oracles.hpp"

using namespace modcurv;

namespace {

// complete homogeneous polynomial h_k(z1, z2)
RationalExpr h_k(int k) {
  RationalExpr s;
  for (int i = 0; i <= k; ++i) s += rz1().pow(i) * rz2().pow(k - i);
  return s;
}

RationalExpr rational_of(const SpectralExpr& e) {
  auto r = e.as_rational();
  EXPECT_TRUE(r.has_value()) << e.str();
  return r.value_or(RationalExpr());
}

}  // namespace

TEST(DividedDifference, PowersGiveCompleteHomogeneous) {
  for (int n = 1; n <= 7; ++n) {
    const SpectralExpr body = rz().pow(n);
    EXPECT_TRUE((rational_of(divided_difference(body, {Node::z1, Node::z2})) - h_k(n - 1)).is_zero()) << n;
    if (n >= 2)
      EXPECT_TRUE((rational_of(divided_difference(body, {Node::zero, Node::z1, Node::z2})) - h_k(n - 2)).is_zero());
  }
}

TEST(DividedDifference, ConfluentIsDerivative) {
  const SpectralExpr body = 1 / (1 - rz());
  const RationalExpr d = rational_of(divided_difference(body, {Node::z1, Node::z1}));
  EXPECT_TRUE((d - 1 / ((1 - rz1()) * (1 - rz1()))).is_zero());
  const RationalExpr d2 = rational_of(divided_difference(body, {Node::z2, Node::z2, Node::z2}));
  EXPECT_TRUE((d2 - 1 / (1 - rz2()).pow(3)).is_zero());
}

TEST(DividedDifference, SingleNodeIsValue) {
  const SpectralExpr body = rz() * rz() + 3;
  EXPECT_TRUE((rational_of(divided_difference(body, {Node::z1})) - (rz1() * rz1() + 3)).is_zero());
  EXPECT_THROW(divided_difference(body, {}), std::invalid_argument);
}

TEST(DividedDifference, HBodiesMatchRecursiveQuotients) {
  const double m = 3.0;
  const SpectralExpr body = SpectralExpr(Atom::h1(2, 1)) + rz() * SpectralExpr(Atom::h1(1, 2));
  auto f = [&](long double z) { return oracle::H1(2, 1, z, m) + z * oracle::H1(1, 2, z, m); };
  const SpectralExpr dd2 = divided_difference(body, {Node::z1, Node::z2});
  const SpectralExpr dd3 = divided_difference(body, {Node::zero, Node::z1, Node::z2});
  const SpectralExpr dd4 = divided_difference(body, {Node::z, Node::z1, Node::z2, Node::zero});
  for (auto [z, z1, z2] : std::vector<std::array<double, 3>>{
           {0.1, 0.3, -0.4}, {-0.5, 0.6, 0.2}, {0.7, -0.8, 0.45}, {0.25, 0.05, -0.3}, {-0.2, 0.4, 0.65}}) {
    const NumPoint p{z, z1, z2};
    EXPECT_NEAR(evaluate(dd2, m, p), oracle::divdiff(f, {z1, z2}), 1e-11);
    EXPECT_NEAR(evaluate(dd3, m, p), oracle::divdiff(f, {0, z1, z2}), 1e-10);
    EXPECT_NEAR(evaluate(dd4, m, p), oracle::divdiff(f, {z, z1, z2, 0}), 1e-8);
  }
}

TEST(DividedDifference, OpaqueAtomExpands) {
  const SpectralExpr body = Atom::h1(3, 1);
  const SpectralExpr opaque = Atom::dd(body, {Node::z1, Node::z2});
  EXPECT_TRUE(zero_test(expand_dd(opaque) - divided_difference(body, {Node::z1, Node::z2}), MMode::symbolic()).zero());
}

TEST(DividedDifference, TaylorCoefficientsAtZero) {
  // H_{a,b}: k-th coefficient Gamma(d+k)/Gamma(a+b+k) (b)_k/k!
  const double m = 3.0, gamma = std::tgamma(m / 2);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int k = 0; k <= 3; ++k) {
        const RationalExpr c = taylor_coefficient_at_zero(Atom::h1(a, b), k);
        const double d = a + b + m / 2 - 2;
        double poch = 1;
        for (int i = 0; i < k; ++i) poch *= (b + i) / double(i + 1);
        const double want = std::tgamma(d + k) / std::tgamma(a + b + k) * poch;
        EXPECT_NEAR(c.evaluate(m, {}, gamma), want, 1e-13 * std::max(1.0, want)) << a << b << k;
      }
}

TEST(Partial, ChainRuleAtW) {
  // w = (z2 - z1)/(1 - z1)
  const double m = 3.0, z1 = 0.3, z2 = 0.55, h = 1e-5;
  const SpectralExpr e = Atom::h1(1, 2, Arg::w);
  auto F = [&](double a, double b) { return double(oracle::H1(1, 2, (b - a) / (1 - a), m)); };
  const double d1 = (F(z1 + h, z2) - F(z1 - h, z2)) / (2 * h);
  const double d2 = (F(z1, z2 + h) - F(z1, z2 - h)) / (2 * h);
  EXPECT_NEAR(evaluate(partial(e, Var::z1), m, {0, z1, z2}), d1, 1e-8);
  EXPECT_NEAR(evaluate(partial(e, Var::z2), m, {0, z1, z2}), d2, 1e-8);
  EXPECT_THROW(partial(e, Var::m), std::invalid_argument);
}

TEST(Leibniz, MatchesProductRule) {
  const SpectralExpr f = rz() * rz() + 1, g = Atom::h1(2, 2);
  const SpectralExpr lhs = leibniz_split(f, g, {Node::z1, Node::z2});
  EXPECT_TRUE(zero_test(lhs - divided_difference(f * g, {Node::z1, Node::z2}), MMode::symbolic()).zero());
  EXPECT_THROW(leibniz_split(f, g, {Node::z1, Node::z2, Node::zero}), std::invalid_argument);
}
