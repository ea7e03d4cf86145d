#include "modcurv/specops.hpp"

#include <cmath>

#include "modcurv/divdiff.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/numeric.hpp"

namespace modcurv {

std::string ModularWeight::str() const {
  std::string s = p.get_str();
  if (q != 0) s += (q > 0 ? " + " : " - ") + Q(abs(q)).get_str() + "*m/2";
  return s;
}

namespace {

struct IntWeight {
  int p = 0, q = 0;
};

bool is_integer(const Q& x) {
  Q y = x;
  y.canonicalize();
  return y.get_den() == 1 && y.get_num().fits_sint_p();
}

int to_int(const Q& x) {
  Q y = x;
  y.canonicalize();
  return static_cast<int>(y.get_num().get_si());
}

bool h_like(const Atom& a) {
  return a.kind == Atom::Kind::H1 || a.kind == Atom::Kind::H2 || a.kind == Atom::Kind::G;
}

// Integer decomposition j = p + q m/2 usable on a term; H-type atoms need q = -1
// so that the combined power of (1-v) stays m-free.
IntWeight decompose(const ModularWeight& j, bool has_h, const MMode& mode) {
  if (mode.is_symbolic()) {
    if (!is_integer(j.p) || !is_integer(j.q))
      throw IllegalWeight("weight " + j.str() + " has non-integer components");
    if (has_h && j.q != -1)
      throw IllegalWeight("weight " + j.str() + " on an H-atom needs the form p - m/2 in symbolic mode");
    return {to_int(j.p), to_int(j.q)};
  }
  const Q m0 = *mode.value;
  const Q v = j.value(m0);
  if (has_h || !is_integer(v)) {
    const Q p = v + m0 / 2;
    if (!is_integer(p)) throw IllegalWeight("weight " + v.get_str() + " not representable at m = " + m0.get_str());
    return {to_int(p), -1};
  }
  return {to_int(v), 0};
}

RationalExpr one_minus(const RationalExpr& v) { return RationalExpr(1) - v; }

SpectralExpr sigma1_term(const TermKey& k, const RationalExpr& c, const IntWeight& w) {
  const RationalExpr z = rz(), oz = one_minus(z);
  if (k.power.k[1] || k.power.k[2]) throw std::invalid_argument("apply_sigma: two-variable power in one-variable input");
  RationalExpr coef = c.substitute({{Var::z, z / (z - RationalExpr(1))}});
  PowerKey p;
  p.k[0] = -k.power.k[0];
  Atom atom = k.atom;
  switch (atom.kind) {
    case Atom::Kind::Unit:
    case Atom::Kind::Gamma: break;
    case Atom::Kind::H1:
      if (atom.arg != Arg::z) throw std::invalid_argument("apply_sigma: one-variable atom not in z");
      coef *= oz.pow(atom.a + atom.b - 2);
      p.k[0] -= 1;
      atom = Atom::h1(atom.b, atom.a);
      break;
    case Atom::Kind::G:
      if (atom.arg != Arg::z) throw std::invalid_argument("apply_sigma: one-variable atom not in z");
      coef *= oz;
      p.k[0] -= 1;
      break;
    default: throw std::invalid_argument("apply_sigma: unexpected atom " + atom.str());
  }
  coef *= oz.pow(w.p);
  p.k[0] -= w.q;
  return SpectralExpr::term(coef, atom, p);
}

// z1 -> z2/(z2-1), z2 -> (z2-z1)/(z2-1), w -> z1;
// 1-z1 -> 1/(1-z2), 1-z2 -> 1/(1-w), 1-w -> 1-z1.
SpectralExpr sigma2_term(const TermKey& k, const RationalExpr& c, const IntWeight& w) {
  const RationalExpr z1 = rz1(), z2 = rz2();
  const RationalExpr o1 = one_minus(z1), o2 = one_minus(z2), ow = o2 / o1;
  if (k.power.k[0]) throw std::invalid_argument("apply_sigma: T(z) power in two-variable input");
  RationalExpr coef =
      c.substitute({{Var::z1, z2 / (z2 - RationalExpr(1))}, {Var::z2, (z2 - z1) / (z2 - RationalExpr(1))}});
  // T(z1)^a T(z2)^b -> T(z2)^{-a} (T(z1)/T(z2))^b
  PowerKey p;
  p.k[1] = k.power.k[2];
  p.k[2] = -k.power.k[1] - k.power.k[2];
  Atom atom = k.atom;
  // moves a one-variable atom evaluated at v' = v/(v-1) back to v with weight n
  auto flip = [&](int n, Arg to) {
    switch (to) {
      case Arg::z2:
        coef *= o2.pow(n);
        p.k[2] -= 1;
        break;
      case Arg::w:  // T(w) = T(z2)/T(z1)
        coef *= ow.pow(n);
        p.k[2] -= 1;
        p.k[1] += 1;
        break;
      default: break;
    }
  };
  switch (atom.kind) {
    case Atom::Kind::Unit:
    case Atom::Kind::Gamma: break;
    case Atom::Kind::H1:
    case Atom::Kind::G: {
      const bool is_g = atom.kind == Atom::Kind::G;
      const int n = is_g ? 1 : atom.a + atom.b - 2;
      Arg to;
      switch (atom.arg) {
        case Arg::z1: to = Arg::z2; break;
        case Arg::z2: to = Arg::w; break;
        case Arg::w: to = Arg::z1; break;
        default: throw std::invalid_argument("apply_sigma: one-variable atom in z inside two-variable input");
      }
      if (to == Arg::z1) {
        atom.arg = Arg::z1;
      } else {
        flip(n, to);
        atom = is_g ? Atom::g(to) : Atom::h1(atom.b, atom.a, to);
      }
      break;
    }
    case Atom::Kind::H2:
      coef *= o2.pow(atom.a + atom.b + atom.c - 2);
      p.k[2] -= 1;
      atom = Atom::h2(atom.b, atom.c, atom.a);
      break;
    default: throw std::invalid_argument("apply_sigma: unexpected atom " + atom.str());
  }
  coef *= o2.pow(w.p);
  p.k[2] -= w.q;
  return SpectralExpr::term(coef, atom, p);
}

int arity_of(const SpectralExpr& e, int arity) {
  if (arity == 1 || arity == 2) return arity;
  if (arity != 0) throw std::invalid_argument("arity must be 0, 1 or 2");
  return e.is_one_var() ? 1 : 2;
}

}  // namespace

SpectralExpr apply_sigma(const ModularWeight& j, const SpectralExpr& e_in, int arity, const MMode& mode) {
  const SpectralExpr e = expand_dd(e_in);
  const int n = arity_of(e, arity);
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    const IntWeight w = decompose(j, h_like(k.atom), mode);
    r += n == 1 ? sigma1_term(k, c, w) : sigma2_term(k, c, w);
  }
  return fold_powers(r, mode);
}

SpectralExpr apply_sigma_power(const ModularWeight& j, const SpectralExpr& e, int n, int arity, const MMode& mode) {
  const int a = arity_of(e, arity);
  SpectralExpr r = e;
  for (int i = 0; i < n; ++i) r = apply_sigma(j, r, a, mode);
  return r;
}

SpectralExpr apply_eta(const SpectralExpr& e_in) {
  const SpectralExpr e = expand_dd(e_in);
  if (e.is_one_var()) return SpectralExpr(taylor_coefficient_at_zero(e, 0));
  const RationalExpr z = rz(), oz = one_minus(z);
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    if (k.power.k[0]) throw std::invalid_argument("apply_eta: T(z) power in two-variable input");
    RationalExpr coef;
    try {
      coef = c.substitute({{Var::z1, z}, {Var::z2, RationalExpr(0)}});
    } catch (const std::domain_error&) {
      throw PoleAtContraction("apply_eta: coefficient " + c.str() + " has a pole at z2 = 0");
    }
    PowerKey p;
    p.k[0] = k.power.k[1];
    Atom atom = k.atom;
    switch (atom.kind) {
      case Atom::Kind::Unit:
      case Atom::Kind::Gamma: break;
      case Atom::Kind::H1:
      case Atom::Kind::G: {
        const bool is_g = atom.kind == Atom::Kind::G;
        if (atom.arg == Arg::z1) {
          atom.arg = Arg::z;
        } else if (atom.arg == Arg::z2) {
          // value at 0
          coef *= is_g ? rm() / RationalExpr(2) * RationalExpr::gamma() : value_at_zero(atom.a, atom.b);
          atom = Atom::unit();
        } else if (atom.arg == Arg::w) {
          // w -> z/(z-1)
          coef *= oz.pow(is_g ? 1 : atom.a + atom.b - 2);
          p.k[0] -= 1;
          atom = is_g ? Atom::g() : Atom::h1(atom.b, atom.a);
        } else {
          throw std::invalid_argument("apply_eta: one-variable atom in z inside two-variable input");
        }
        break;
      }
      case Atom::Kind::H2: atom = Atom::h1(atom.a + atom.c, atom.b); break;
      default: throw std::invalid_argument("apply_eta: unexpected atom " + atom.str());
    }
    r.add(coef, atom, p);
  }
  return r;
}

SpectralExpr sq_plus(const SpectralExpr& f) { return -divided_difference(f, {Node::z1, Node::z2}); }

SpectralExpr sq_minus(const SpectralExpr& f) {
  const RationalExpr ow = one_minus(rz2()) / one_minus(rz1());
  return (-ow) * divided_difference(f, {Node::w, Node::z2});
}

SpectralExpr sq_zero(const ModularWeight& j, const SpectralExpr& f, const MMode& mode) {
  const IntWeight w = decompose(j, false, mode);
  const RationalExpr z1 = rz1();
  // z^j[1, y1] = (y1^j - 1)/(y1 - 1)
  SpectralExpr g = SpectralExpr::term(one_minus(z1).pow(w.p) / (-z1), Atom::unit(), PowerKey{{0, -w.q, 0}});
  g.add(RationalExpr(1) / z1, Atom::unit());
  const SpectralExpr fw = rebase(expand_dd(f), Arg::w);
  SpectralExpr r;
  for (const auto& [gk, gc] : g.terms())
    for (const auto& [fk, fc] : fw.terms()) r.add(gc * fc, fk.atom, gk.power + fk.power);
  return fold_powers(r, mode);
}

SpectralExpr variational_K(const SpectralExpr& f, const ModularWeight& j, const MMode& mode) {
  return -(f + apply_sigma(j, f, 1, mode));
}

SpectralExpr variational_H(const SpectralExpr& K, const ModularWeight& j, const MMode& mode) {
  const ModularWeight j1 = j.shifted(-1);
  const SpectralExpr s = sq_plus(K);
  const SpectralExpr s1 = apply_sigma(j1, s, 2, mode);
  return s + s1 - apply_sigma(j1, s1, 2, mode);
}

VerificationReport check_internal_relation(const SpectralExpr& f, const ModularWeight& j, const MMode& mode) {
  Stopwatch sw;
  VerificationReport rep;
  rep.relation = "internal-relation-sq";
  rep.mode = mode.is_symbolic() ? "symbolic-m" : "fixed-m";
  rep.detail("f", f.str());
  rep.detail("j", j.str());
  const SpectralExpr lhs = sq_zero(j, f, mode) - sq_minus(f);
  rep.note("lhs = (sq_zero - sq_minus) f");
  const SpectralExpr rhs = apply_sigma(j.shifted(-1), sq_plus(apply_sigma(j, f, 1, mode)), 2, mode);
  rep.note("rhs = sigma_{j-1} sq_plus sigma_j f");
  const ZeroTest zt = zero_test(lhs - rhs, mode);
  rep.note("zero test: rewrite " + std::string(zt.rewrite_zero ? "0" : "nonzero") + ", direct " +
           (zt.direct_zero ? "0" : "nonzero"));
  rep.status = zt.zero() ? Status::ExactZero : Status::Failed;
  rep.residual = zt.zero() ? "0" : zt.direct.str();
  rep.seconds = sw.seconds();
  return rep;
}

// ---------------------------------------------------------------- h-side

double Closure1::derivative(double x) const {
  if (df) return df(x);
  // Richardson-extrapolated central differences
  auto c = [&](double h) { return (f(x + h) - f(x - h)) / (2 * h); };
  const double h = 1e-3;
  return (4 * c(h / 2) - c(h)) / 3;
}

double closure_dd(const Closure1& f, double a, double b) {
  if (std::abs(a - b) < 1e-6) return f.derivative((a + b) / 2);
  return (f(a) - f(b)) / (a - b);
}

Fn1 apply_tau(double j, const Fn1& f) {
  return [j, f](double x) { return std::exp(j * x) * f(-x); };
}

Closure1 apply_tau(double j, const Closure1& f) {
  Closure1 r{apply_tau(j, f.f), {}};
  r.df = [j, f](double x) { return std::exp(j * x) * (j * f(-x) - f.derivative(-x)); };
  return r;
}

Fn2 apply_tau(double j, const Fn2& f) {
  return [j, f](double x1, double x2) { return std::exp(j * (x1 + x2)) * f(-x1 - x2, x1); };
}

Fn2 apply_tau_power(double j, const Fn2& f, int n) {
  Fn2 r = f;
  for (int i = 0; i < n; ++i) r = apply_tau(j, r);
  return r;
}

double apply_iota(const Fn1& f) { return f(0.0); }

Fn1 apply_iota(const Fn2& f) {
  return [f](double x) { return f(x, -x); };
}

Fn2 tri_plus(const Closure1& f) {
  return [f](double x1, double x2) { return closure_dd(f, x1, x1 + x2); };
}

Fn2 tri_minus(const Closure1& f) {
  return [f](double x1, double x2) { return closure_dd(f, x2, x1 + x2); };
}

Fn2 tri_zero(double j, const Closure1& f) {
  return [j, f](double x1, double x2) { return g_exp1(x1, j) * f(x2); };
}

Fn1 variational_K_h(const Fn1& f, double j) {
  const Fn1 tf = apply_tau(j, f);
  return [f, tf](double x) { return -(f(x) + tf(x)); };
}

Fn2 variational_H_h(const Closure1& K, double j) {
  const Fn2 t = tri_plus(K);
  const Fn2 t1 = apply_tau(j, t);
  const Fn2 t2 = apply_tau(j, t1);
  return [t, t1, t2](double x1, double x2) { return t(x1, x2) + t1(x1, x2) - t2(x1, x2); };
}

double internal_relation_residual_h(const Closure1& f, double j, const std::vector<std::pair<double, double>>& grid) {
  Closure1 tf;
  tf.f = apply_tau(j, f.f);
  tf.df = [f, j](double x) { return std::exp(j * x) * (j * f(-x) - f.derivative(-x)); };
  const Fn2 lhs0 = tri_zero(j, f), lhs1 = tri_minus(f);
  const Fn2 rhs = apply_tau(j, tri_plus(tf));
  double worst = 0;
  for (const auto& [x1, x2] : grid) {
    const double l = lhs0(x1, x2) - lhs1(x1, x2);
    const double r = rhs(x1, x2);
    worst = std::max(worst, std::abs(l - r) / std::max(1.0, std::abs(l)));
  }
  return worst;
}

}  // namespace modcurv
