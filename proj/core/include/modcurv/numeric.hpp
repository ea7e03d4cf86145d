#pragma once
// Floating-point evaluation of the H-family, exp divided differences and
// symbolic expressions.

#include <complex>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "modcurv/expr.hpp"

namespace modcurv {

struct BranchPoint : std::domain_error {
  using std::domain_error::domain_error;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidTau : std::domain_error {
  using std::domain_error::domain_error;
};

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  unsigned max_depth = 15;
  double series_threshold = 0.5;  // |z| bound of the plain 2F1 series region
  double agreement_tol = 1e-8;    // relative disagreement allowed between paths
};

struct PathValues {
  double quadrature = 0, series = 0;
  double value = 0;        // the value returned by eval_H1
  std::string path;        // which path supplied `value`
  double discrepancy = 0;  // |quadrature - series| / max(1, |value|)
};

// H_{a,b}(z;m) by the Euler integral.
double eval_H1_quad(int a, int b, double z, double m, const QuadratureConfig& cfg = {});
// H_{a,b}(z;m) = Gamma(d)/Gamma(a+b) 2F1(d, b; a+b; z), Pfaff-transformed for z < -threshold.
double eval_H1_series(int a, int b, double z, double m, const QuadratureConfig& cfg = {});
PathValues eval_H1_paths(int a, int b, double z, double m, const QuadratureConfig& cfg = {});
// Both paths, checked against each other. a = 0 uses the closed forms.
double eval_H1(int a, int b, double z, double m, const QuadratureConfig& cfg = {});
// (H02 - Gamma(m/2))/z, continuous at z = 0.
double eval_G(double z, double m);

double eval_H2_quad(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg = {});
// (z H_{a+1,1})[z1 (b times), z2 (c times)]; confluent when |z1 - z2| < 1e-6.
double eval_H2_divdiff(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg = {});
double eval_H2(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg = {});

// Divided difference of x -> e^{j x} over the nodes.
double exp_divdiff(std::vector<double> nodes, double j = 1.0);
// e^{jz}[0,x]
double g_exp1(double x, double j);
// e^{jz}[0, x1, x1+x2]
double g_exp11(double x1, double x2, double j);
// z^j[1,y] = e^{jz}[0,x] / exp[0,x] with y = e^x
double g_pow1(double y, double j);
// x^j over positive nodes
double pow_divdiff(std::vector<double> nodes, double j);
// z^j[1, y1, y1 y2]
double g_pow11(double y1, double y2, double j);

std::complex<double> dedekind_eta(std::complex<double> tau);
// -log(4 pi^2 |eta(tau)|^4)
double dedekind_constant(std::complex<double> tau);

// Evaluation point of a symbolic expression (unused coordinates ignored).
struct NumPoint {
  double z = 0, z1 = 0, z2 = 0;
};
double evaluate(const SpectralExpr& e, double m, const NumPoint& p, const QuadratureConfig& cfg = {});

// Divided difference of a smooth scalar function, taylor(x, k) = f^{(k)}(x)/k!.
// Nodes closer than 1e-6 use the confluent formula; clusters narrower than
// cluster_spread are expanded about their mean (f must be analytic there).
double numeric_divided_difference(const std::function<double(double)>& f,
                                  const std::function<double(double, int)>& taylor, std::vector<double> nodes,
                                  double cluster_spread = 0);

struct SampleRow {
  std::string indices;
  double z1 = 0, z2 = 0, m = 0, value = 0;
  std::string path;
  double error = 0;
};
void write_csv(std::ostream& os, const std::vector<SampleRow>& rows);

}  // namespace modcurv
