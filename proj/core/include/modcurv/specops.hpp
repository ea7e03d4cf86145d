#pragma once
// Cyclic, contraction and difference operators on spectral functions.
//
// k-side (y-coordinates, written in z = 1-y, z1 = 1-y1, z2 = 1-y1*y2) acts on
// SpectralExpr exactly. h-side (x = log y) acts on numeric closures.

#include <functional>
#include <string>

#include "modcurv/expr.hpp"
#include "modcurv/report.hpp"

namespace modcurv {

struct PoleAtContraction : std::domain_error {
  using std::domain_error::domain_error;
};

// j = p + q*(m/2)
struct ModularWeight {
  Q p = 0, q = 0;
  static ModularWeight half_m(const Q& p, const Q& q = -1) { return {p, q}; }
  ModularWeight shifted(const Q& dp) const { return {p + dp, q}; }
  double value(double m) const { return p.get_d() + q.get_d() * m / 2; }
  Q value(const Q& m) const { return p + q * m / 2; }
  std::string str() const;
};

// ---- k-side, exact

// sigma_j f(y) = y^j f(1/y);  sigma_j f(y1,y2) = (y1 y2)^j f(1/(y1 y2), y1).
// arity 0 picks 1 for one-variable input and 2 otherwise.
SpectralExpr apply_sigma(const ModularWeight& j, const SpectralExpr& e, int arity = 0,
                         const MMode& mode = MMode::symbolic());
SpectralExpr apply_sigma_power(const ModularWeight& j, const SpectralExpr& e, int n, int arity = 0,
                               const MMode& mode = MMode::symbolic());

// Two variables: f(y, 1/y), i.e. z1 -> z, z2 -> 0. One variable: f(1) (z = 0).
SpectralExpr apply_eta(const SpectralExpr& e);

// f[y1, y1 y2] = -f[z1, z2]
SpectralExpr sq_plus(const SpectralExpr& f);
// y2 f[y2, y1 y2] = -(1-w) f[w, z2]
SpectralExpr sq_minus(const SpectralExpr& f);
// f(y2) z^j[1, y1]
SpectralExpr sq_zero(const ModularWeight& j, const SpectralExpr& f, const MMode& mode = MMode::symbolic());

// -(1 + sigma_j) f
SpectralExpr variational_K(const SpectralExpr& f, const ModularWeight& j, const MMode& mode = MMode::symbolic());
// (1 + sigma_{j-1} - sigma_{j-1}^2) sq_plus(K), j being the weight used for K.
SpectralExpr variational_H(const SpectralExpr& K, const ModularWeight& j, const MMode& mode = MMode::symbolic());

// (sq_zero_j - sq_minus) f - sigma_{j-1} sq_plus sigma_j f, zero-tested by both backends.
VerificationReport check_internal_relation(const SpectralExpr& f, const ModularWeight& j,
                                           const MMode& mode = MMode::symbolic());

// ---- h-side, numeric

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// One-variable closure; df may be empty (Richardson difference is used then).
struct Closure1 {
  Fn1 f, df;
  double operator()(double x) const { return f(x); }
  double derivative(double x) const;
};

// f[a, b], derivative at the midpoint when |a - b| < 1e-6
double closure_dd(const Closure1& f, double a, double b);

Fn1 apply_tau(double j, const Fn1& f);  // e^{jx} f(-x)
Closure1 apply_tau(double j, const Closure1& f);
Fn2 apply_tau(double j, const Fn2& f);  // e^{j(x1+x2)} f(-x1-x2, x1)
Fn2 apply_tau_power(double j, const Fn2& f, int n);
double apply_iota(const Fn1& f);        // f(0)
Fn1 apply_iota(const Fn2& f);           // f(x, -x)

Fn2 tri_plus(const Closure1& f);             // f[x1, x1+x2]
Fn2 tri_minus(const Closure1& f);            // f[x2, x1+x2]
Fn2 tri_zero(double j, const Closure1& f);   // e^{jz}[0,x1] f(x2)

// -(1 + tau_j) f
Fn1 variational_K_h(const Fn1& f, double j);
// (1 + tau_{j} - tau_{j}^2) tri_plus(K)
Fn2 variational_H_h(const Closure1& K, double j);

// max |(tri_zero_j - tri_minus) f - tau_j tri_plus tau_j f| over the grid.
double internal_relation_residual_h(const Closure1& f, double j, const std::vector<std::pair<double, double>>& grid);

}  // namespace modcurv
