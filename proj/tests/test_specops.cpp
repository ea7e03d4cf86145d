#include <gtest/gtest.h>

#include "modcurv/divdiff.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/laws.hpp"
#include "modcurv/numeric.hpp"
#include "modcurv/specops.hpp"

using namespace modcurv;

namespace {

const MMode kSym = MMode::symbolic();

bool is_zero(const SpectralExpr& e, const MMode& mode = MMode::symbolic()) { return zero_test(e, mode).zero(); }

// y-coordinates as rational functions of z
RationalExpr y() { return 1 - rz(); }
RationalExpr y1() { return 1 - rz1(); }
RationalExpr y2() { return (1 - rz2()) / (1 - rz1()); }

Closure1 smooth() {
  return {[](double x) { return std::exp(x / 2) / (1 + x * x); },
          [](double x) { return std::exp(x / 2) * (0.5 * (1 + x * x) - 2 * x) / ((1 + x * x) * (1 + x * x)); }};
}

}  // namespace

TEST(Sigma, OneVariableByDefinition) {
  // sigma_2 (1/(1+y)) = y^2 / (1 + 1/y)
  const SpectralExpr f = 1 / (1 + y());
  const SpectralExpr want = y().pow(3) / (y() + 1);
  EXPECT_TRUE(is_zero(apply_sigma(ModularWeight{2, 0}, f, 1) - want));
}

TEST(Sigma, TwoVariableByDefinition) {
  // sigma_j f(y1, y2) = (y1 y2)^j f(1/(y1 y2), y1)
  EXPECT_TRUE(is_zero(apply_sigma(ModularWeight{0, 0}, SpectralExpr(y2()), 2) - SpectralExpr(y1())));
  EXPECT_TRUE(is_zero(apply_sigma(ModularWeight{1, 0}, SpectralExpr(y1()), 2) - SpectralExpr(1)));
  EXPECT_TRUE(is_zero(apply_sigma(ModularWeight{-1, 0}, SpectralExpr(y1() * y2()), 2) -
                      SpectralExpr(1 / (y1() * y2() * y2()))));
}

TEST(Sigma, Orders) {
  const ModularWeight j = ModularWeight::half_m(-1);
  const SpectralExpr f = Atom::h1(2, 1);
  EXPECT_FALSE(is_zero(apply_sigma(j, f, 1) - f));
  EXPECT_TRUE(is_zero(apply_sigma_power(j, f, 2, 1) - f));
  const SpectralExpr F = Atom::h2(1, 1, 2);
  EXPECT_FALSE(is_zero(apply_sigma_power(j, F, 2, 2) - F));
  EXPECT_TRUE(is_zero(apply_sigma_power(j, F, 3, 2) - F));
}

TEST(Sigma, FixedMMatchesSymbolic) {
  const ModularWeight j = ModularWeight::half_m(-1);
  const SpectralExpr f = Atom::h1(3, 1);
  const SpectralExpr s = apply_sigma(j, f, 1, kSym);
  const MMode m3 = MMode::fixed(3);
  const SpectralExpr s3 = apply_sigma(j, f, 1, m3);
  EXPECT_NEAR(evaluate(s, 3.0, {0.4, 0, 0}), evaluate(s3, 3.0, {0.4, 0, 0}), 1e-12);
}

TEST(Sigma, RejectsIllegalWeights) {
  EXPECT_THROW(apply_sigma(ModularWeight{Q(1, 2), 0}, SpectralExpr(rz()), 1), IllegalWeight);
  EXPECT_THROW(apply_sigma(ModularWeight{2, 0}, SpectralExpr(Atom::h1(1, 1)), 1), IllegalWeight);
}

TEST(Operators, SqPlusEtaAndSqZero) {
  // f[z1,z2] for f = z^2 is z1 + z2
  EXPECT_TRUE(is_zero(sq_plus(SpectralExpr(rz() * rz())) + SpectralExpr(rz1() + rz2())));
  EXPECT_TRUE(is_zero(apply_eta(SpectralExpr(rz1() + rz2() * rz2())) - SpectralExpr(rz())));
  EXPECT_TRUE(is_zero(apply_eta(SpectralExpr(3 + rz())) - SpectralExpr(3)));
  // sq_zero_j(1) = z^j[1, y1] = (y1^j - 1)/(y1 - 1)
  const SpectralExpr s = sq_zero(ModularWeight{3, 0}, SpectralExpr(1));
  EXPECT_TRUE(is_zero(s - SpectralExpr(1 + y1() + y1() * y1())));
}

TEST(Operators, VariationalKIsAntiSymmetrisation) {
  const ModularWeight j{-2, 0};
  const SpectralExpr f = rz() / (3 - rz());
  const SpectralExpr K = variational_K(f, j);
  EXPECT_TRUE(is_zero(apply_sigma(j, K, 1) - K));
}

TEST(Operators, InternalRelationOnAtoms) {
  EXPECT_TRUE(check_internal_relation(Atom::h1(2, 1), ModularWeight::half_m(1)).passed());
  EXPECT_TRUE(check_internal_relation(SpectralExpr(1 / (2 - rz())), ModularWeight{-3, 0}).passed());
  const VerificationReport r = check_internal_relation(Atom::h1(1, 2), ModularWeight::half_m(0), MMode::fixed(3));
  EXPECT_TRUE(r.passed()) << r.residual;
}

TEST(Tau, Definitions) {
  const Fn1 f = [](double x) { return x * x * x + 2; };
  EXPECT_DOUBLE_EQ(apply_tau(0.5, f)(0.7), std::exp(0.35) * f(-0.7));
  const Fn2 F = [](double a, double b) { return a - 2 * b; };
  EXPECT_DOUBLE_EQ(apply_tau(1.0, F)(0.3, 0.4), std::exp(0.7) * F(-0.7, 0.3));
  EXPECT_DOUBLE_EQ(apply_iota(f), 2.0);
  EXPECT_DOUBLE_EQ(apply_iota(F)(0.4), F(0.4, -0.4));
  const Closure1 c = apply_tau(1.3, smooth());
  EXPECT_NEAR(c.df(0.4), (c.f(0.4 + 1e-6) - c.f(0.4 - 1e-6)) / 2e-6, 1e-8);
}

TEST(Tau, CyclicOrders) {
  const Closure1 f = smooth();
  for (double j : {-1.0, 0.0, 2.5}) {
    const Fn1 t2 = apply_tau(j, apply_tau(j, f.f));
    const Fn2 F = tri_plus(f);
    const Fn2 t2F = apply_tau_power(j, F, 2), t3F = apply_tau_power(j, F, 3);
    for (double x : {-1.0, 0.2, 1.7}) EXPECT_NEAR(t2(x), f(x), 1e-13 * std::max(1.0, std::abs(f(x))));
    EXPECT_GT(std::abs(t2F(0.3, 0.5) - F(0.3, 0.5)), 1e-3);
    EXPECT_NEAR(t3F(0.3, 0.5), F(0.3, 0.5), 1e-12);
  }
}

TEST(Tau, DifferenceOperators) {
  const Closure1 f = smooth();
  EXPECT_NEAR(tri_plus(f)(0.3, 0.5), (f(0.8) - f(0.3)) / 0.5, 1e-14);
  EXPECT_NEAR(tri_minus(f)(0.3, 0.5), (f(0.8) - f(0.5)) / 0.3, 1e-14);
  EXPECT_NEAR(tri_zero(2.0, f)(0.3, 0.5), std::expm1(0.6) / 0.3 * f(0.5), 1e-14);
  // confluent: derivative
  EXPECT_NEAR(tri_plus(f)(0.3, 0.0), f.df(0.3), 1e-9);
  EXPECT_NEAR(closure_dd(f, 0.2, 0.2), f.df(0.2), 1e-14);
}

TEST(Tau, InternalRelationNumeric) {
  std::vector<std::pair<double, double>> grid;
  for (double a : {-1.0, 0.1, 0.8})
    for (double b : {-0.5, 0.4, 1.2}) grid.emplace_back(a, b);
  for (double j : {-2.0, 0.0, 1.5}) EXPECT_LT(internal_relation_residual_h(smooth(), j, grid), 1e-10);
}

TEST(Laws, SuitePasses) {
  const VerificationReport r = verify_operator_laws();
  EXPECT_TRUE(r.passed()) << r.residual;
  EXPECT_LE(r.max_error, 1e-10);
  bool found_rational_count = false;
  for (const auto& [k, v] : r.details)
    if (k.find("rational_passed") != std::string::npos) {
      found_rational_count = true;
      EXPECT_EQ(v, "50/50");
    }
  EXPECT_TRUE(found_rational_count);
}
