#pragma once
// Finite-dimensional model of the operator identities: N x N complex matrices,
// trace as the tracial functional, h a random Hermitian matrix, k = e^h and
// derivations delta = [d, .] with d anti-Hermitian.

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "modcurv/report.hpp"
#include "modcurv/specops.hpp"

namespace modcurv {

using CMat = Eigen::MatrixXcd;

struct NonHermitian : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ModelState {
 public:
  // Eigenvalues are clipped to [-2, 2].
  static ModelState random(int N, unsigned long seed);
  // Throws NonHermitian unless h = h* and d1, d2 are anti-Hermitian.
  static ModelState from(const CMat& h, const CMat& d1, const CMat& d2, unsigned long seed = 0);

  int N() const { return static_cast<int>(lambda_.size()); }
  unsigned long seed() const { return seed_; }
  const CMat& h() const { return h_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  const CMat& eigenvectors() const { return V_; }
  const CMat& d(int which) const { return which == 1 ? d1_ : d2_; }

  CMat exp_h(double j) const;  // e^{jh}
  CMat to_eigenbasis(const CMat& a) const { return V_.adjoint() * a * V_; }
  CMat from_eigenbasis(const CMat& a) const { return V_ * a * V_.adjoint(); }
  CMat delta(int which, const CMat& a) const { return d(which) * a - a * d(which); }
  // phi_j(a) = tr(e^{jh} a)
  std::complex<double> phi(double j, const CMat& a) const;

 private:
  CMat h_, V_, d1_, d2_;
  Eigen::VectorXd lambda_;
  unsigned long seed_ = 0;
};

// f(x)(rho), x = [., h]: entry (i,k) scaled by f(l_k - l_i) in the eigenbasis.
CMat modular_apply(const Fn1& f, const ModelState& s, const CMat& rho);
// f(x1, x2)(rho1 rho2): (i,k) = sum_j f(l_j - l_i, l_k - l_j) rho1_ij rho2_jk.
CMat modular_apply(const Fn2& f, const ModelState& s, const CMat& rho1, const CMat& rho2);
// y-calculus, y = e^x.
CMat modular_apply_y(const Fn1& f, const ModelState& s, const CMat& rho);
CMat modular_apply_y(const Fn2& f, const ModelState& s, const CMat& rho1, const CMat& rho2);

// Random matrix with iid complex Gaussian entries.
CMat random_matrix(int N, unsigned long seed);

struct MatrixModelConfig {
  std::vector<int> sizes{2, 3, 4, 5, 6, 7, 8};
  int trials = 20;
  unsigned long seed = 1;
  double tol = 1e-9;
};

// Integration by parts under phi_j (tau on the x side, sigma on the y side), n = 1, 2.
VerificationReport check_cyclic(const MatrixModelConfig& cfg = {});
// First and second derivatives of e^{jh} and k^j, commutator expansions of
// delta(e^{jh} f(x)) and delta(k^j f(y)), the k <-> h change of variables, and
// the first-order perturbation of f(x_{h+b}).
VerificationReport check_derivative_expansions(const MatrixModelConfig& cfg = {});
// iota and eta contractions.
VerificationReport check_contraction(const MatrixModelConfig& cfg = {});
// Substitution identities and the sq/tri comparison formulas.
VerificationReport check_comparison(const MatrixModelConfig& cfg = {});
// Simplex integrals of e^{(1-s1)a} b e^{(s1-s2)a} ... against exp divided differences.
VerificationReport check_genocchi_hermite(unsigned long seed = 1, int trials = 5);

VerificationReport verify_matrix_model(const MatrixModelConfig& cfg = {});

}  // namespace modcurv
