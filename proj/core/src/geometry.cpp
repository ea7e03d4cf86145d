#include "modcurv/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "modcurv/divdiff.hpp"
#include "modcurv/hfamily.hpp"

namespace modcurv {

namespace {

SpectralExpr H1(int a, int b) { return SpectralExpr(Atom::h1(a, b)); }
SpectralExpr H2(int a, int b, int c) { return SpectralExpr(Atom::h2(a, b, c)); }
SpectralExpr Gz() { return SpectralExpr(Atom::g()); }

const char* mode_label(const MMode& mode) { return mode.is_symbolic() ? "symbolic-m" : "fixed-m"; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void record_zero_test(VerificationReport& rep, const std::string& what, const ZeroTest& zt) {
  rep.note(what + ": rewrite backend " + (zt.rewrite_zero ? "zero" : "nonzero") + ", closed-form backend " +
           (zt.direct_zero ? "zero" : "nonzero"));
  if (!zt.agree()) rep.note(what + ": backends disagree");
}

// status from a list of exact checks
void settle(VerificationReport& rep, bool exact_ok, const std::string& residual) {
  rep.status = exact_ok ? Status::ExactZero : Status::Failed;
  rep.residual = exact_ok ? "0" : residual;
}

std::optional<Q> even_gamma(const Q& m0) {
  // Gamma(m0/2) for even positive integer m0
  if (m0.get_den() != 1 || m0 <= 0 || m0.get_num().get_si() % 2 != 0) return std::nullopt;
  const long n = m0.get_num().get_si() / 2;
  Q g = 1;
  for (long i = 2; i < n; ++i) g *= i;
  return g;
}

ModularWeight w(int p) { return ModularWeight::half_m(p); }

}  // namespace

SpectralExpr at_mode(const SpectralExpr& e, const MMode& mode) {
  if (mode.is_symbolic()) return e;
  SpectralExpr s = e.specialize_m(*mode.value);
  const auto g = even_gamma(*mode.value);
  if (!g) return s;
  SpectralExpr r;
  for (const auto& [k, c] : s.terms()) {
    if (k.atom.kind == Atom::Kind::Gamma) r.add(c * RationalExpr(*g), Atom::unit(), k.power);
    else r.add(c, k.atom, k.power);
  }
  return fold_powers(r, mode);
}

CurvaturePair build_curvature(const MMode& mode) {
  const RationalExpr m = rm(), z1 = rz1();
  CurvaturePair p;
  p.K = (rq(4) / m) * H1(3, 1) - H1(2, 1);
  p.H = (rq(4) / m + rq(2)) * H2(2, 1, 1) - (rq(4) * (rq(1) - z1) / m) * H2(2, 2, 1) - (rq(8) / m) * H2(3, 1, 1);
  p.K = at_mode(p.K, mode);
  p.H = at_mode(p.H, mode);
  p.mode = mode;
  return p;
}

SpectralExpr build_T(const MMode& mode) {
  const RationalExpr m = rm(), z = rz();
  const SpectralExpr T = ((rq(4) - m) / rq(12)) * Gz() + (rq(4) / m + rq(2)) * H1(3, 1) -
                         (rq(4) * (rq(1) - z) / m) * H1(3, 2) - (rq(8) / m) * H1(4, 1);
  return at_mode(T, mode);
}

SpectralExpr assemble_T_from_curvature(const MMode& mode) {
  const CurvaturePair c = build_curvature(MMode::symbolic());
  const RationalExpr z = rz();
  // z^{-m/2}[1,y] = (T(z) - 1)/(-z)
  SpectralExpr pw = SpectralExpr::term(RationalExpr(-1) / z, Atom::unit(), PowerKey{{1, 0, 0}});
  pw.add(RationalExpr(1) / z, Atom::unit());
  const SpectralExpr etaK = apply_eta(c.K);
  // eta(K) is gamma times a rational in m
  SpectralExpr prod;
  for (const auto& [ek, ec] : etaK.terms())
    for (const auto& [pk, pc] : pw.terms()) prod.add(ec * pc, ek.atom, ek.power + pk.power);
  return at_mode(apply_eta(c.H) - prod, mode);
}

// ---------------------------------------------------------------- numeric closures

CurvatureNumeric::CurvatureNumeric(double m, const QuadratureConfig& cfg) : m_(m), cfg_(cfg) {
  const CurvaturePair c = build_curvature(MMode::symbolic());
  K_ = c.K;
  dK_ = derive(c.K);
  H_ = c.H;
}

double CurvatureNumeric::K(double y) const { return evaluate(K_, m_, NumPoint{1 - y, 0, 0}, cfg_); }
double CurvatureNumeric::dK(double y) const { return -evaluate(dK_, m_, NumPoint{1 - y, 0, 0}, cfg_); }
double CurvatureNumeric::H(double y1, double y2) const {
  return evaluate(H_, m_, NumPoint{0, 1 - y1, 1 - y1 * y2}, cfg_);
}

double CurvatureNumeric::K_tilde(double x) const { return g_exp1(x, 1.0) * K(std::exp(x)); }

double CurvatureNumeric::H_tilde(double x1, double x2) const {
  const double h = std::exp(x1) * g_exp1(x1, 1.0) * g_exp1(x2, 1.0) * H(std::exp(x1), std::exp(x2));
  return h + 2 * K(std::exp(x1 + x2)) * g_exp11(x1, x2, 1.0);
}

Closure1 CurvatureNumeric::K_sans() const {
  Closure1 c;
  c.f = [this](double x) {
    const double e0 = g_exp1(x, 1.0);
    return e0 * e0 * K(std::exp(x));
  };
  c.df = [this](double x) {
    const double e0 = g_exp1(x, 1.0), de0 = exp_divdiff({0.0, x, x});
    const double y = std::exp(x);
    return 2 * e0 * de0 * K(y) + e0 * e0 * dK(y) * y;
  };
  return c;
}

double CurvatureNumeric::H_sans(double x1, double x2) const { return g_exp1(x1 + x2, 1.0) * H_tilde(x1, x2); }

double CurvatureNumeric::T_tilde(double x) const {
  return -K(1.0) * g_exp1(x, 1 - m_ / 2) + H_tilde(x, -x);
}

double CurvatureNumeric::f_H(double x1, double x2) {
  return g_exp1(x1, 1.0) * exp_divdiff({x1, x1 + x2}) * g_exp1(x1 + x2, 1.0);
}

double CurvatureNumeric::Q_I(double x1, double x2) const {
  return g_exp11(x1, x2, 1.0) * g_exp1(x1 + x2, 1.0) * K(std::exp(x1 + x2));
}

double CurvatureNumeric::Q_II(double x1, double x2) const {
  return g_exp1(x1, 1.0) * g_exp11(x1, x2, 1.0) * K(std::exp(x1));
}

// ---------------------------------------------------------------- OPS

OPSForms build_T_OPS() {
  const MMode m2 = MMode::fixed(2);
  const RationalExpr z = rz(), oz = rq(1) - z;
  OPSForms f;
  f.K = build_curvature(m2).K;
  f.T = build_T(m2);
  const auto eta = at_mode(apply_eta(f.K), m2).as_rational();
  f.eta_K = eta ? *eta : RationalExpr(0);
  const SpectralExpr inner = f.K - SpectralExpr(f.eta_K / oz);
  f.D = f.T + (oz / z) * (rq(2) * inner + z * derive(inner));
  const RationalExpr zm1 = z - rq(1);
  f.intermediate = (rq(1) / (rq(3) * z)) * (rq(-6) * zm1 * H1(2, 1) - rq(3) * zm1 * z * H1(2, 2) +
                                            rq(12) * z * H1(4, 1) - rq(12) * H1(3, 1) + SpectralExpr(rq(1)));
  f.reduced = (rq(1) / (rq(3) * z)) * (zm1 * H1(1, 1) + zm1 * z * H1(1, 2) + SpectralExpr(rq(1)));
  return f;
}

double ops_kernel_L(double y) {
  const double t = y - 1;
  if (std::abs(t) < 0.1) {
    // sum (-1)^n (n+1)/(n+2) t^n; the closed form cancels badly near y = 1
    double sum = 0, p = 1;
    for (int n = 0; n < 40 && std::abs(p) > 1e-18; ++n, p *= -t) sum += p * (n + 1) / (n + 2);
    return sum;
  }
  return (-y + y * std::log(y) + 1) / ((y - 1) * (y - 1) * y);
}

namespace {

struct OPSNumeric {
  SpectralExpr T = build_T(MMode::fixed(2));
  double T_at(double u, const QuadratureConfig& cfg) const { return evaluate(T, 2, NumPoint{1 - u, 0, 0}, cfg); }
};

const OPSNumeric& ops_numeric() {
  static const OPSNumeric o;
  return o;
}

constexpr double kEtaK = 1.0 / 6;

}  // namespace

double T_OPS_numeric(double y, const QuadratureConfig& cfg) {
  using boost::math::quadrature::gauss_kronrod;
  const double ly = std::log(y);
  auto integrand = [&](double s) {
    const double zs = std::abs(y - 1) < 1e-12 ? 1.0 : std::expm1(s * ly) / (y - 1);
    return zs * zs * ops_numeric().T_at(std::exp(s * ly), cfg) * ly;
  };
  const double I = gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, cfg.max_depth, cfg.rel_tol);
  return kEtaK * ops_kernel_L(y) + 0.5 * I;
}

double symmetrized_T_OPS_numeric(double y, const QuadratureConfig& cfg) {
  using boost::math::quadrature::gauss_kronrod;
  if (std::abs(y - 1) < 1e-12) return kEtaK;
  auto integrand = [&](double u) { return (u - 1) * (u - 1) * ops_numeric().T_at(u, cfg) / u; };
  const double I = gauss_kronrod<double, 31>::integrate(integrand, 1.0, y, cfg.max_depth, cfg.rel_tol);
  return kEtaK / y + I / ((y - 1) * (y - 1));
}

// ---------------------------------------------------------------- verifications

VerificationReport verify_T_vs_K(const MMode& mode) {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "T-vs-K";
  rep.mode = mode_label(mode);
  rep.detail("m", mode.str());
  const RationalExpr m = rm(), z = rz();
  const SpectralExpr T = build_T(mode);
  const SpectralExpr K = build_curvature(mode).K;
  const SpectralExpr Ts = build_T(MMode::symbolic());
  bool ok = true;

  // constructed T against -eta(K) z^{-m/2}[1,y] + eta(H)
  const ZeroTest tc = zero_test(T - assemble_T_from_curvature(mode), mode);
  record_zero_test(rep, "T equals -eta(K) z^{-m/2}[1,y] + eta(H)", tc);
  ok = ok && tc.zero();

  const SpectralExpr half = at_mode((m - rq(2)) / rq(2) * SpectralExpr(rq(1)), mode);
  const SpectralExpr R = T + apply_sigma(w(-1), T, 1, mode) - half * K;
  rep.note("residual (1 + sigma_{-m/2-1})T - (m-2)/2 K built, " + std::to_string(R.terms().size()) + " terms");
  const bool m2 = mode.is_m2();
  SpectralExpr red = reduce_full(R, m2);
  if (!mode.is_symbolic()) red = at_mode(red, mode);
  rep.note("reduced to " + std::to_string(red.terms().size()) + " basis terms");
  // expected intermediate form
  SpectralExpr target = ((m - rq(4)) / rq(12)) * (m * H1(1, 1) + rq(2) * z * H1(1, 2) - rq(2) * Gz());
  if (m2) target = rq(1, 3) * (Gz() - H1(1, 1) - z * H1(1, 2));
  target = at_mode(target, mode);
  const bool structural = (red - target).is_zero();
  rep.detail("reduced_residual", red.str());
  rep.detail("intermediate_form_matches", structural ? "true" : "false");
  rep.note(std::string("intermediate form ") + (m2 ? "(1/3)(G - H11 - z H12), G = H02 at m = 2" : "(m-4)/12 (m H11 + 2z H12 - 2G)") +
           (structural ? " matched" : " NOT matched"));
  ok = ok && structural;
  const ZeroTest zt = zero_test(R, mode);
  record_zero_test(rep, "residual", zt);
  ok = ok && zt.zero();
  settle(rep, ok, zt.direct.str());

  // numeric spot checks
  rep.tolerance = 1e-9;
  const SpectralExpr Rs = Ts + apply_sigma(w(-1), Ts, 1) - ((m - rq(2)) / rq(2)) * build_curvature().K;
  const double mnum = mode.is_symbolic() ? 7.0 : mode.value->get_d();
  const double znum = 0.4;
  const double e = std::abs(evaluate(Rs, mnum, NumPoint{znum, 0, 0}));
  rep.detail("numeric_residual", "m=" + fmt(mnum) + " z=0.4: " + fmt(e));
  rep.numeric(e);
  // spot value of T against quadrature of its atoms' Euler integrals
  const double tq = evaluate(build_T(), 4, NumPoint{0.5, 0, 0});
  const double tq2 = 3 * eval_H1_quad(3, 1, 0.5, 4) - 0.5 * eval_H1_quad(3, 2, 0.5, 4) - 2 * eval_H1_quad(4, 1, 0.5, 4);
  rep.detail("T(1/2; m=4)", fmt(tq));
  rep.numeric(std::abs(tq - tq2) / std::max(1.0, std::abs(tq)));
  rep.seconds = sw.seconds();
  return rep;
}

VerificationReport verify_H_vs_K(const MMode& mode) {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "CM-k";
  rep.mode = mode_label(mode);
  rep.detail("m", mode.str());
  const RationalExpr m = rm(), z = rz(), z1 = rz1(), z2 = rz2();
  const CurvaturePair c = build_curvature(mode);
  const ModularWeight j = w(-2);
  bool ok = true;

  const SpectralExpr S = sq_plus(c.K);
  rep.note("sq_plus(K) = -K[z1,z2]");
  const SpectralExpr sS = apply_sigma(j, S, 2, mode);
  const SpectralExpr ssS = apply_sigma(j, sS, 2, mode);
  const ZeroTest full = zero_test(c.H - (S + sS - ssS), mode);
  record_zero_test(rep, "H = (1 + sigma - sigma^2) sq_plus(K)", full);
  ok = ok && full.zero();

  // equivalent one-sided form; sigma^2 = sigma^{-1}
  const SpectralExpr sH = apply_sigma(j, c.H, 2, mode);
  const SpectralExpr ssH = apply_sigma(j, sH, 2, mode);
  const SpectralExpr R = rq(1, 2) * (c.H + ssH) - S;
  const bool m2 = mode.is_m2();
  SpectralExpr red = reduce_full(R, m2);
  SpectralExpr E = m * z * H1(1, 1) + rq(2) * z * z * H1(1, 2) - rq(2) * z * H1(1, 2) - rq(2) * H1(1, 1);
  E = at_mode(E, mode);
  SpectralExpr endpoint = (-(z1 + z2) / (rq(2) * z1 * z2)) * divided_difference(E, {Node::z1, Node::z2});
  SpectralExpr red_end = reduce_full(endpoint, m2);
  if (!mode.is_symbolic()) {
    red = at_mode(red, mode);
    red_end = at_mode(red_end, mode);
  }
  const bool structural = (red - red_end).is_zero();
  rep.note(std::string("1/2 (1 + sigma^{-1}) H - sq_plus(K) reduces to -(z1+z2)/(2 z1 z2) E[z1,z2]: ") +
           (structural ? "matched" : "NOT matched"));
  rep.detail("endpoint_matches", structural ? "true" : "false");
  ok = ok && structural;

  // E must be constant in z before the divided difference
  const NormalForm nfE = closed_form(E, mode), nfE2 = rewrite_normal_form(E, mode);
  bool constant = !nfE.coeffs().empty();
  for (const auto& [k, v] : nfE.coeffs()) constant = constant && k.log < 0 && k.t.is_one() && !v.contains(Var::z);
  const bool agree = (nfE - nfE2).is_zero();
  rep.detail("E", E.str());
  rep.detail("E_normal_form", nfE.str());
  rep.note(std::string("E = m z H11 + 2 z^2 H12 - 2 z H12 - 2 H11 is ") + (constant ? "constant" : "NOT constant") +
           " in z (" + nfE.str() + ")");
  ok = ok && constant && agree;

  const ZeroTest zt = zero_test(R, mode);
  record_zero_test(rep, "1/2 (1 + sigma^{-1}) H - sq_plus(K)", zt);
  ok = ok && zt.zero();

  // the one-sided form with sigma itself is not an identity; recorded for reference
  const ZeroTest lit = zero_test(rq(1, 2) * (c.H + sH) - S, mode);
  rep.detail("literal_one_sided_sigma_form", lit.zero() ? "zero" : "nonzero");
  settle(rep, ok, zt.direct.str());

  // numeric
  rep.tolerance = 1e-8;
  const CurvaturePair cs = build_curvature();
  const SpectralExpr Ss = sq_plus(cs.K);
  const SpectralExpr Rs = rq(1, 2) * (cs.H + apply_sigma_power(j, cs.H, 2, 2)) - Ss;
  const double mnum = mode.is_symbolic() ? 3.0 : mode.value->get_d();
  const double e = std::abs(evaluate(Rs, mnum, NumPoint{0, 0.2, 0.5}));
  rep.detail("numeric_residual", "m=" + fmt(mnum) + " (z1,z2)=(0.2,0.5): " + fmt(e));
  rep.numeric(e);
  rep.seconds = sw.seconds();
  return rep;
}

VerificationReport verify_OPS() {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "OPS";
  rep.mode = "fixed-m";
  rep.detail("m", "2");
  const MMode m2 = MMode::fixed(2);
  const OPSForms f = build_T_OPS();
  bool ok = true;

  rep.detail("eta_K", f.eta_K.str());
  const bool eta_ok = (f.eta_K - rq(1, 6)).is_zero();
  rep.note(std::string("eta(K) = K(1) = ") + f.eta_K.str());
  ok = ok && eta_ok;

  const ZeroTest zi = zero_test(f.D - f.intermediate, m2);
  record_zero_test(rep, "D equals the H21/H22/H31/H41 form", zi);
  ok = ok && zi.zero();
  const SpectralExpr red = at_mode(reduce_full(f.intermediate, true), m2);
  const bool structural = (red - f.reduced).is_zero();
  rep.note(std::string("intermediate reduces to ((z-1)H11 + (z-1)z H12 + 1)/(3z): ") +
           (structural ? "matched" : "NOT matched"));
  ok = ok && structural;
  const ZeroTest zt = zero_test(f.D, m2);
  record_zero_test(rep, "differentiated identity", zt);
  ok = ok && zt.zero();
  settle(rep, ok, zt.direct.str());

  rep.tolerance = 1e-10;
  const double d = evaluate(f.D, 2, NumPoint{0.3, 0, 0});
  rep.detail("numeric_D(z=0.3)", fmt(d));
  rep.numeric(std::abs(d));
  // boundary value: both sides at y = 1
  const double K1 = evaluate(f.K, 2, NumPoint{0, 0, 0});
  // raw s-integral form, T(y) + y^{-2} T(1/y) at y = 1
  const double S1 = 2 * T_OPS_numeric(1.0);
  rep.detail("boundary", "K(1) = " + fmt(K1) + ", (1+sigma)(T_OPS)(1) = " + fmt(S1));
  rep.numeric(std::abs(K1 - 1.0 / 6));
  rep.numeric(std::abs(S1 - 1.0 / 6));
  // integral forms at y = 2
  const double y = 2.0;
  const double sym = symmetrized_T_OPS_numeric(y);
  const double raw = T_OPS_numeric(y) + std::pow(y, -2) * T_OPS_numeric(1 / y);
  const double Ky = evaluate(f.K, 2, NumPoint{1 - y, 0, 0});
  rep.detail("y=2", "K = " + fmt(Ky) + ", symmetrized = " + fmt(sym) + ", raw integral = " + fmt(raw));
  rep.tolerance = 1e-8;
  rep.numeric(std::abs(sym - Ky));
  rep.numeric(std::abs(raw - sym));
  rep.seconds = sw.seconds();
  return rep;
}

VerificationReport verify_gauss_bonnet(int grid_points) {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "Gauss-Bonnet";
  rep.mode = "fixed-m";
  rep.detail("m", "2");
  const MMode m2 = MMode::fixed(2);
  const RationalExpr m = rm();
  bool ok = true;

  const SpectralExpr T = build_T(m2);
  const SpectralExpr KEH = variational_K(T, w(-1), m2);
  const ZeroTest zk = zero_test(KEH, m2);
  record_zero_test(rep, "K_EH = -(1 + sigma_{-2}) T at m = 2", zk);
  ok = ok && zk.zero();
  const SpectralExpr HEH = variational_H(KEH, w(-1), m2);
  const ZeroTest zh = zero_test(HEH, m2);
  record_zero_test(rep, "H_EH = (1 + sigma_{-3} - sigma_{-3}^2) sq_plus(K_EH) at m = 2", zh);
  ok = ok && zh.zero();

  // gradient consistency for symbolic m: K_EH = (2-m)/2 K
  const SpectralExpr KEHs = variational_K(build_T(), w(-1));
  const ZeroTest zg = zero_test(KEHs + ((m - rq(2)) / rq(2)) * build_curvature().K, MMode::symbolic());
  record_zero_test(rep, "K_EH = (2-m)/2 K for symbolic m", zg);
  ok = ok && zg.zero();
  settle(rep, ok, zk.direct.str() + " ; " + zh.direct.str());

  rep.tolerance = 1e-9;
  const CurvatureNumeric cn(2.0);
  double worst = 0;
  for (int i = 0; i < grid_points; ++i) {
    // symmetric grid avoiding 0
    const double x = -2.0 + 4.0 * (i + 0.5) / grid_points;
    const double v = cn.T_tilde(x) + cn.T_tilde(-x);
    worst = std::max(worst, std::abs(v));
    rep.trials.push_back({static_cast<unsigned long>(i), 1, std::abs(v)});
  }
  rep.detail("max |(1+tau_0) T~|", fmt(worst));
  rep.numeric(worst);
  rep.seconds = sw.seconds();
  return rep;
}

VerificationReport verify_cm_h(const std::vector<double>& ms, int grid, double tol) {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "CM-h";
  rep.mode = "numeric";
  rep.tolerance = tol;
  rep.status = Status::WithinTolerance;
  std::vector<double> xs;
  for (int i = 0; i < grid; ++i) xs.push_back(grid == 1 ? 0.3 : -1.2 + 2.4 * i / (grid - 1));
  for (double m : ms) {
    const CurvatureNumeric cn(m);
    const double j = -m / 2 + 1;
    const Fn2 rhs = variational_H_h(cn.K_sans(), j);
    const Fn2 QI = [&cn](double a, double b) { return cn.Q_I(a, b); };
    const Fn2 tQI = apply_tau_power(j, QI, 2);
    const Fn2 fh = CurvatureNumeric::f_H;
    const Fn2 tfh = apply_tau_power(3.0, fh, 2);
    double worst = 0, worst_f = 0, worst_q = 0;
    for (double x1 : xs)
      for (double x2 : xs) {
        const double l = cn.H_sans(x1, x2);
        const double r = rhs(x1, x2);
        worst = std::max(worst, std::abs(l - r) / std::max(1.0, std::abs(l)));
        worst_f = std::max(worst_f, std::abs(fh(x1, x2) - tfh(x1, x2)));
        worst_q = std::max(worst_q, std::abs(cn.Q_II(x1, x2) - tQI(x1, x2)));
      }
    rep.detail("m=" + fmt(m), "max rel residual " + fmt(worst) + "; f_H - tau_3^2 f_H: " + fmt(worst_f) +
                                  "; Q_II - tau^2 Q_I: " + fmt(worst_q));
    rep.numeric(worst);
    rep.numeric(worst_f);
    rep.numeric(worst_q);
  }
  rep.seconds = sw.seconds();
  return rep;
}

}  // namespace modcurv
