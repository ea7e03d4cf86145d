#pragma once
// Curvature and action densities of the conformally perturbed Laplacian, and
// the checks of their functional relations.

#include <vector>

#include "modcurv/expr.hpp"
#include "modcurv/numeric.hpp"
#include "modcurv/report.hpp"
#include "modcurv/specops.hpp"

namespace modcurv {

struct CurvaturePair {
  SpectralExpr K;  // one variable, z = 1-y
  SpectralExpr H;  // two variables, z1 = 1-y1, z2 = 1-y1*y2
  MMode mode;
};

// K = (4/m)H31 - H21,  H = (4/m+2)H211 - 4(1-z1)/m H221 - (8/m)H311
CurvaturePair build_curvature(const MMode& mode = MMode::symbolic());
// T = (4-m)/12 G + (4/m+2)H31 - 4(1-z)/m H32 - (8/m)H41
SpectralExpr build_T(const MMode& mode = MMode::symbolic());
// -eta(K) z^{-m/2}[1,y] + eta(H), assembled from the curvature pair.
SpectralExpr assemble_T_from_curvature(const MMode& mode = MMode::symbolic());

// Coefficients specialized to the mode; Gamma(m/2) substituted at even m.
SpectralExpr at_mode(const SpectralExpr& e, const MMode& mode);

// h-side closures at a numeric dimension.
class CurvatureNumeric {
 public:
  explicit CurvatureNumeric(double m, const QuadratureConfig& cfg = {});
  double m() const { return m_; }
  double K(double y) const;
  double dK(double y) const;  // dK/dy
  double H(double y1, double y2) const;
  // exp[0,x] K(e^x)
  double K_tilde(double x) const;
  // e^{x1} exp[0,x1] exp[0,x2] H(e^{x1}, e^{x2}) + 2 K(e^{x1+x2}) exp[0,x1,x1+x2]
  double H_tilde(double x1, double x2) const;
  // (exp[0,x])^2 K(e^x), with its x-derivative
  Closure1 K_sans() const;
  // exp[0,x1+x2] H_tilde
  double H_sans(double x1, double x2) const;
  // -K(1) e^{(1-m/2)z}[0,x] + H_tilde(x,-x)
  double T_tilde(double x) const;
  // exp[0,x1] exp[x1,x1+x2] exp[0,x1+x2]
  static double f_H(double x1, double x2);
  double Q_I(double x1, double x2) const;
  double Q_II(double x1, double x2) const;

 private:
  double m_;
  QuadratureConfig cfg_;
  SpectralExpr K_, dK_, H_;
};

// m = 2 objects for the zeta-function (OPS) action.
struct OPSForms {
  SpectralExpr K, T;          // at m = 2
  RationalExpr eta_K;         // K(1) = 1/6
  SpectralExpr D;             // T + (1-z)/z (2 + z d/dz)(K - eta(K)/(1-z))
  SpectralExpr intermediate;  // the H_{2,1}, H_{2,2}, H_{3,1}, H_{4,1} form
  SpectralExpr reduced;       // ((z-1)H11 + (z-1)z H12 + 1)/(3z)
};
OPSForms build_T_OPS();
// (-y + y ln y + 1)/((y-1)^2 y)
double ops_kernel_L(double y);
// eta(K) L(y) + 1/2 int_0^1 (z^s[1,y])^2 T(y^s) ln y ds
double T_OPS_numeric(double y, const QuadratureConfig& cfg = {});
// eta(K)/y + (y-1)^{-2} int_1^y (u-1)^2 T(u)/u du
double symmetrized_T_OPS_numeric(double y, const QuadratureConfig& cfg = {});

VerificationReport verify_T_vs_K(const MMode& mode = MMode::symbolic());
VerificationReport verify_H_vs_K(const MMode& mode = MMode::symbolic());
VerificationReport verify_OPS();
VerificationReport verify_gauss_bonnet(int grid_points = 20);
VerificationReport verify_cm_h(const std::vector<double>& ms = {2, 3, 4, 6}, int grid = 7, double tol = 1e-8);

}  // namespace modcurv
