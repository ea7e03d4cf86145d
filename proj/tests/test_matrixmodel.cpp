#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "modcurv/matrixmodel.hpp"

using namespace modcurv;

namespace {

double rel(const CMat& a, const CMat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

MatrixModelConfig quick() {
  MatrixModelConfig c;
  c.sizes = {2, 5, 8};
  c.trials = 3;
  c.seed = 9;
  return c;
}

}  // namespace

TEST(MatrixModel, StateInvariants) {
  const ModelState s = ModelState::random(6, 3);
  EXPECT_EQ(s.N(), 6);
  EXPECT_LT((s.h() - s.h().adjoint()).norm(), 1e-14);
  EXPECT_LT((s.d(1) + s.d(1).adjoint()).norm(), 1e-14);
  EXPECT_LT((s.d(2) + s.d(2).adjoint()).norm(), 1e-14);
  EXPECT_LE(s.eigenvalues().cwiseAbs().maxCoeff(), 2.0);
  const CMat D = s.eigenvalues().cast<std::complex<double>>().asDiagonal();
  EXPECT_LT(rel(s.from_eigenbasis(D), s.h()), 1e-13);
  EXPECT_LT(rel(s.exp_h(1.0), s.h().exp()), 1e-12);
}

TEST(MatrixModel, SameSeedSameState) {
  EXPECT_EQ((ModelState::random(4, 77).h() - ModelState::random(4, 77).h()).norm(), 0.0);
  EXPECT_GT((ModelState::random(4, 77).h() - ModelState::random(4, 78).h()).norm(), 0.0);
}

TEST(MatrixModel, RejectsNonHermitian) {
  const CMat h = random_matrix(3, 1);
  const CMat d = CMat::Zero(3, 3);
  EXPECT_THROW(ModelState::from(h, d, d), NonHermitian);
  const CMat hh = (h + h.adjoint()) / 2.0;
  EXPECT_NO_THROW(ModelState::from(hh, d, d));
  EXPECT_THROW(ModelState::from(hh, hh, d), NonHermitian);
}

TEST(MatrixModel, ModularActionIsConjugation) {
  const ModelState s = ModelState::random(5, 11);
  const CMat rho = random_matrix(5, 12);
  // x = [., h]
  EXPECT_LT(rel(modular_apply(Fn1([](double x) { return x; }), s, rho), rho * s.h() - s.h() * rho), 1e-13);
  // e^x = k^{-1} (.) k
  EXPECT_LT(rel(modular_apply(Fn1([](double x) { return std::exp(x); }), s, rho), s.exp_h(-1) * rho * s.exp_h(1)),
            1e-13);
  // y = e^x in the y-calculus
  EXPECT_LT(rel(modular_apply_y(Fn1([](double y) { return y * y; }), s, rho), s.exp_h(-2) * rho * s.exp_h(2)), 1e-12);
}

TEST(MatrixModel, TwoVariableKernelActsOnFactors) {
  const ModelState s = ModelState::random(4, 21);
  const CMat r1 = random_matrix(4, 22), r2 = random_matrix(4, 23);
  EXPECT_LT(rel(modular_apply(Fn2([](double, double) { return 1.0; }), s, r1, r2), r1 * r2), 1e-13);
  const CMat want = (s.exp_h(-1) * r1 * s.exp_h(1)) * (s.exp_h(-2) * r2 * s.exp_h(2));
  EXPECT_LT(rel(modular_apply(Fn2([](double a, double b) { return std::exp(a + 2 * b); }), s, r1, r2), want), 1e-12);
}

TEST(MatrixModel, PhiIsWeightedTrace) {
  const ModelState s = ModelState::random(3, 5);
  const CMat a = random_matrix(3, 6);
  EXPECT_LT(std::abs(s.phi(0.7, a) - (s.exp_h(0.7) * a).trace()), 1e-13);
}

TEST(MatrixModel, CyclicIdentities) { EXPECT_TRUE(check_cyclic(quick()).passed()); }
TEST(MatrixModel, DerivativeExpansions) { EXPECT_TRUE(check_derivative_expansions(quick()).passed()); }
TEST(MatrixModel, Contractions) { EXPECT_TRUE(check_contraction(quick()).passed()); }
TEST(MatrixModel, Comparisons) { EXPECT_TRUE(check_comparison(quick()).passed()); }
TEST(MatrixModel, SimplexIntegrals) { EXPECT_TRUE(check_genocchi_hermite(4, 2).passed()); }

TEST(MatrixModel, ReportsTrialsPerSize) {
  const VerificationReport r = check_contraction(quick());
  EXPECT_EQ(r.trials.size(), 9u);
  for (const auto& t : r.trials) EXPECT_LT(t.residual, 1e-9);
}
