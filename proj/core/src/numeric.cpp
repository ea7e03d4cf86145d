#include "modcurv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modcurv/divdiff.hpp"

namespace modcurv {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kConfluent = 1e-6;

void check_branch(double z) {
  if (!(z < 1.0)) throw BranchPoint("argument must satisfy z < 1, got " + std::to_string(z));
}

// sum_n (d)_n (b)_n / ((c)_n n!) x^n
double hyp2f1_series(double d, double b, double c, double x) {
  double term = 1.0, sum = 1.0;
  int small = 0;
  for (long n = 0; n < 5'000'000; ++n) {
    term *= (d + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small >= 3) return sum;
    } else {
      small = 0;
    }
  }
  throw NonConvergence("2F1 series did not converge at x = " + std::to_string(x));
}

double h0b(int b, double z, double m) {
  const double y = 1.0 - z;
  if (b == 1) {
    // finite part at m = 2
    if (std::abs(m - 2.0) < 1e-15) return -std::log1p(-z);
    return std::tgamma(m / 2 - 1) * std::pow(y, 1 - m / 2);
  }
  return std::tgamma(b + m / 2 - 2) / std::tgamma(b) * std::pow(y, 2 - b - m / 2);
}

}  // namespace

double eval_H1_quad(int a, int b, double z, double m, const QuadratureConfig& cfg) {
  check_branch(z);
  if (a < 1 || b < 1) return h0b(b, z, m);
  const double d = a + b + m / 2 - 2;
  auto f = [&](double t) { return std::pow(t, b - 1) * std::pow(1 - t, a - 1) * std::pow(1 - z * t, -d); };
  double err = 0;
  const double v = gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, cfg.max_depth, cfg.rel_tol, &err);
  const double pref = std::exp(std::lgamma(d) - std::lgamma(a) - std::lgamma(b));
  return pref * v;
}

double eval_H1_series(int a, int b, double z, double m, const QuadratureConfig& cfg) {
  check_branch(z);
  if (a < 1 || b < 1) return h0b(b, z, m);
  const double d = a + b + m / 2 - 2, c = a + b;
  const double pref = std::exp(std::lgamma(d) - std::lgamma(c));
  if (z < -cfg.series_threshold) {
    // Pfaff: 2F1(d,b;c;z) = (1-z)^{-b} 2F1(c-d, b; c; z/(z-1))
    return pref * std::pow(1 - z, -b) * hyp2f1_series(c - d, b, c, z / (z - 1));
  }
  return pref * hyp2f1_series(d, b, c, z);
}

PathValues eval_H1_paths(int a, int b, double z, double m, const QuadratureConfig& cfg) {
  PathValues r;
  r.quadrature = eval_H1_quad(a, b, z, m, cfg);
  r.series = eval_H1_series(a, b, z, m, cfg);
  const bool use_quad = z <= cfg.series_threshold;
  r.value = use_quad ? r.quadrature : r.series;
  r.path = use_quad ? "quadrature" : "series";
  r.discrepancy = std::abs(r.quadrature - r.series) / std::max(1.0, std::abs(r.value));
  return r;
}

double eval_H1(int a, int b, double z, double m, const QuadratureConfig& cfg) {
  if (a < 0 || b < 1) throw std::invalid_argument("eval_H1: indices out of range");
  check_branch(z);
  if (a == 0) return h0b(b, z, m);
  const PathValues p = eval_H1_paths(a, b, z, m, cfg);
  if (p.discrepancy > cfg.agreement_tol)
    throw NonConvergence("H[" + std::to_string(a) + "," + std::to_string(b) + "] paths disagree at z = " +
                         std::to_string(z));
  return p.value;
}

double eval_G(double z, double m) {
  check_branch(z);
  const double g = std::tgamma(m / 2);
  if (z == 0.0) return g * m / 2;
  return g * std::expm1(-(m / 2) * std::log1p(-z)) / z;
}

double eval_H2_quad(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg) {
  check_branch(z1);
  check_branch(z2);
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("eval_H2_quad: indices must be >= 1");
  const double d = a + b + c + m / 2 - 2;
  auto inner = [&](double u) {
    const double top = 1 - u;
    if (top <= 0) return 0.0;
    auto g = [&](double v) {
      return std::pow(u, b - 1) * std::pow(v, c - 1) * std::pow(std::max(0.0, top - v), a - 1) *
             std::pow(1 - z1 * u - z2 * v, -d);
    };
    return gauss_kronrod<double, 21>::integrate(g, 0.0, top, cfg.max_depth, cfg.rel_tol * 0.1);
  };
  const double v = gauss_kronrod<double, 21>::integrate(inner, 0.0, 1.0, cfg.max_depth, cfg.rel_tol);
  const double pref = std::exp(std::lgamma(d) - std::lgamma(a) - std::lgamma(b) - std::lgamma(c));
  return pref * v;
}

namespace {

// f[x_0..x_n] = sum_k f^{(n+k)}(c)/(n+k)! h_k(x - c) about the centre c of a
// tight cluster; taylor(c, k) = f^{(k)}(c)/k!.
double divdiff_taylor(const std::function<double(double, int)>& taylor, const std::vector<double>& x, double c) {
  const int n = static_cast<int>(x.size()) - 1;
  constexpr int K = 60;
  std::vector<double> h(K + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x) {
    const double y = xi - c;
    for (int k = 1; k <= K; ++k) h[k] += y * h[k - 1];
  }
  double sum = 0.0;
  int small = 0;
  for (int k = 0; k <= K; ++k) {
    const double t = taylor(c, n + k) * h[k];
    sum += t;
    if (k > 2 && std::abs(t) <= 1e-17 * std::abs(sum)) {
      if (++small >= 2) return sum;
    } else {
      small = 0;
    }
  }
  return sum;
}

}  // namespace

double numeric_divided_difference(const std::function<double(double)>& f,
                                  const std::function<double(double, int)>& taylor, std::vector<double> nodes,
                                  double cluster_spread) {
  if (nodes.empty()) throw std::invalid_argument("numeric_divided_difference: no nodes");
  std::sort(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  std::map<std::pair<int, int>, double> memo;
  std::function<double(int, int)> dd = [&](int i, int k) -> double {
    if (k == 0) return f(nodes[i]);
    auto it = memo.find({i, k});
    if (it != memo.end()) return it->second;
    double r;
    const double spread = nodes[i + k] - nodes[i];
    if (spread < std::max(cluster_spread, kConfluent)) {
      const std::vector<double> sub(nodes.begin() + i, nodes.begin() + i + k + 1);
      const double c = std::accumulate(sub.begin(), sub.end(), 0.0) / (k + 1);
      r = spread < kConfluent ? taylor(c, k) : divdiff_taylor(taylor, sub, c);
    } else {
      r = (dd(i + 1, k - 1) - dd(i, k - 1)) / spread;
    }
    memo.emplace(std::make_pair(i, k), r);
    return r;
  };
  return dd(0, n - 1);
}

double eval_H2_divdiff(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg) {
  check_branch(z1);
  check_branch(z2);
  // g(x) = x H_{a+1,1}(x),  g^{(k)}(x)/k! = x H_{a+1,k+1}(x) + H_{a+1,k}(x)
  auto f = [&](double x) { return x * eval_H1(a + 1, 1, x, m, cfg); };
  auto taylor = [&](double x, int k) {
    if (k == 0) return f(x);
    return x * eval_H1(a + 1, k + 1, x, m, cfg) + eval_H1(a + 1, k, x, m, cfg);
  };
  std::vector<double> nodes(b, z1);
  nodes.insert(nodes.end(), c, z2);
  const double mid = 0.5 * (z1 + z2);
  // cancellation in the recursion: expand about the midpoint when the nodes
  // sit well inside the disc of convergence around it
  if (z1 != z2 && std::abs(z1 - z2) >= kConfluent && std::abs(z1 - z2) <= 0.25 * (1 - mid)) {
    std::map<int, double> cache;  // H_{a+1,k}(mid)
    auto Hm = [&](int k) {
      auto it = cache.find(k);
      return it != cache.end() ? it->second : cache[k] = eval_H1(a + 1, k, mid, m, cfg);
    };
    auto taylor_mid = [&](double x, int k) { return k == 0 ? x * Hm(1) : x * Hm(k + 1) + Hm(k); };
    return divdiff_taylor(taylor_mid, nodes, mid);
  }
  return numeric_divided_difference(f, taylor, nodes);
}

double eval_H2(int a, int b, int c, double z1, double z2, double m, const QuadratureConfig& cfg) {
  if (b < 1 || c < 1 || a < 0) throw std::invalid_argument("eval_H2: indices out of range");
  return eval_H2_divdiff(a, b, c, z1, z2, m, cfg);
}

namespace {

// e^{j x}[nodes] for a cluster of nodes, by the Taylor expansion about their
// mean: e^{jc} sum_k j^{n+k} h_k(x - c) / (n+k)!
double exp_dd_taylor(const std::vector<double>& x, double j) {
  const int n = static_cast<int>(x.size()) - 1;
  const double c = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const int K = 40;
  std::vector<double> h(K + 1, 0.0);  // complete homogeneous symmetric polynomials
  h[0] = 1.0;
  for (double xi : x) {
    const double y = xi - c;
    for (int k = 1; k <= K; ++k) h[k] += y * h[k - 1];
  }
  double sum = 0.0, fact = std::tgamma(n + 1.0), jp = std::pow(j, n);
  for (int k = 0; k <= K; ++k) {
    const double t = jp * h[k] / fact;
    sum += t;  // odd h_k vanish for symmetric clusters, so no early exit
    jp *= j;
    fact *= (n + k + 1);
  }
  return std::exp(j * c) * sum;
}

}  // namespace

double exp_divdiff(std::vector<double> nodes, double j) {
  if (nodes.empty()) throw std::invalid_argument("exp_divdiff: no nodes");
  std::sort(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  std::map<std::pair<int, int>, double> memo;
  std::function<double(int, int)> dd = [&](int i, int k) -> double {
    if (k == 0) return std::exp(j * nodes[i]);
    auto it = memo.find({i, k});
    if (it != memo.end()) return it->second;
    const double spread = nodes[i + k] - nodes[i];
    double r;
    if (std::abs(j) * spread <= 1.0) {
      r = exp_dd_taylor(std::vector<double>(nodes.begin() + i, nodes.begin() + i + k + 1), j);
    } else {
      r = (dd(i + 1, k - 1) - dd(i, k - 1)) / spread;
    }
    memo.emplace(std::make_pair(i, k), r);
    return r;
  };
  return dd(0, n - 1);
}

double g_exp1(double x, double j) { return exp_divdiff({0.0, x}, j); }
double g_exp11(double x1, double x2, double j) { return exp_divdiff({0.0, x1, x1 + x2}, j); }
double pow_divdiff(std::vector<double> nodes, double j) {
  if (nodes.empty()) throw std::invalid_argument("pow_divdiff: no nodes");
  const double lo = *std::min_element(nodes.begin(), nodes.end());
  if (!(lo > 0)) throw std::domain_error("pow_divdiff: nodes must be positive");
  auto f = [j](double x) { return std::pow(x, j); };
  // binom(j, k) x^{j-k}
  auto taylor = [j](double x, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (j - i) / (i + 1.0);
    return c * std::pow(x, j - k);
  };
  return numeric_divided_difference(f, taylor, nodes, 0.25 * lo);
}

double g_pow11(double y1, double y2, double j) { return pow_divdiff({1.0, y1, y1 * y2}, j); }

double g_pow1(double y, double j) {
  if (!(y > 0)) throw std::domain_error("g_pow1: y must be positive");
  const double x = std::log(y);
  return exp_divdiff({0.0, x}, j) / exp_divdiff({0.0, x}, 1.0);
}

std::complex<double> dedekind_eta(std::complex<double> tau) {
  if (!(tau.imag() > 0)) throw InvalidTau("Im(tau) must be positive");
  const std::complex<double> I(0, 1);
  const double pi = std::acos(-1.0);
  const std::complex<double> q = std::exp(2.0 * pi * I * tau);
  std::complex<double> prod = 1.0, qn = q;
  for (int n = 1; n < 100000; ++n) {
    prod *= 1.0 - qn;
    if (std::abs(qn) < 1e-16) break;
    qn *= q;
  }
  return std::exp(pi * I * tau / 12.0) * prod;
}

double dedekind_constant(std::complex<double> tau) {
  const double pi = std::acos(-1.0);
  const double a = std::abs(dedekind_eta(tau));
  return -std::log(4 * pi * pi * std::pow(a, 4));
}

// ---------------------------------------------------------------- expressions

namespace {

double arg_num(Arg a, const NumPoint& p) {
  switch (a) {
    case Arg::z: return p.z;
    case Arg::z1: return p.z1;
    case Arg::z2: return p.z2;
    case Arg::w: return (p.z2 - p.z1) / (1 - p.z1);
  }
  return 0;
}

double node_num(Node n, const NumPoint& p) {
  switch (n) {
    case Node::zero: return 0;
    case Node::z: return p.z;
    case Node::z1: return p.z1;
    case Node::z2: return p.z2;
    case Node::w: return (p.z2 - p.z1) / (1 - p.z1);
  }
  return 0;
}

double dd_atom(const Atom& a, double m, const NumPoint& p, const QuadratureConfig& cfg) {
  const SpectralExpr& body = *a.body;
  std::vector<SpectralExpr> derivs{body};
  auto f = [&](double x) { return evaluate(body, m, NumPoint{x, 0, 0}, cfg); };
  auto taylor = [&](double x, int k) {
    while (static_cast<int>(derivs.size()) <= k) derivs.push_back(derive(derivs.back()));
    return evaluate(derivs[k], m, NumPoint{x, 0, 0}, cfg) / std::tgamma(k + 1.0);
  };
  std::vector<double> xs;
  for (Node n : a.nodes) xs.push_back(node_num(n, p));
  return numeric_divided_difference(f, taylor, xs);
}

}  // namespace

double evaluate(const SpectralExpr& e, double m, const NumPoint& p, const QuadratureConfig& cfg) {
  const double gamma = std::tgamma(m / 2);
  const std::map<Var, double> point{{Var::z, p.z}, {Var::z1, p.z1}, {Var::z2, p.z2}};
  const double vs[3] = {p.z, p.z1, p.z2};
  double total = 0;
  for (const auto& [k, c] : e.terms()) {
    double v = c.evaluate(m, point, gamma);
    for (int i = 0; i < 3; ++i)
      if (k.power.k[i]) v *= std::pow(1 - vs[i], -k.power.k[i] * m / 2);
    const Atom& a = k.atom;
    switch (a.kind) {
      case Atom::Kind::Unit: break;
      case Atom::Kind::Gamma: v *= gamma; break;
      case Atom::Kind::H1: v *= eval_H1(a.a, a.b, arg_num(a.arg, p), m, cfg); break;
      case Atom::Kind::G: v *= eval_G(arg_num(a.arg, p), m); break;
      case Atom::Kind::H2: v *= eval_H2(a.a, a.b, a.c, p.z1, p.z2, m, cfg); break;
      case Atom::Kind::DD: v *= dd_atom(a, m, p, cfg); break;
    }
    total += v;
  }
  return total;
}

void write_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
  os << "indices,z1,z2,m,value,path,error\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.indices << ',' << r.z1 << ',' << r.z2 << ',' << r.m << ',' << r.value << ',' << r.path << ',' << r.error
       << '\n';
}

}  // namespace modcurv
