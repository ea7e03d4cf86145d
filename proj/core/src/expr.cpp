#include "modcurv/expr.hpp"

#include <sstream>

namespace modcurv {

const char* arg_name(Arg a) {
  switch (a) {
    case Arg::z: return "z";
    case Arg::z1: return "z1";
    case Arg::z2: return "z2";
    case Arg::w: return "w";
  }
  return "?";
}

RationalExpr arg_value(Arg a) {
  switch (a) {
    case Arg::z: return rz();
    case Arg::z1: return rz1();
    case Arg::z2: return rz2();
    case Arg::w: return (rz2() - rz1()) / (RationalExpr(1) - rz1());
  }
  return {};
}

const char* node_name(Node n) {
  switch (n) {
    case Node::zero: return "0";
    case Node::z: return "z";
    case Node::z1: return "z1";
    case Node::z2: return "z2";
    case Node::w: return "w";
  }
  return "?";
}

RationalExpr node_value(Node n) {
  switch (n) {
    case Node::zero: return RationalExpr(0);
    case Node::z: return rz();
    case Node::z1: return rz1();
    case Node::z2: return rz2();
    case Node::w: return arg_value(Arg::w);
  }
  return {};
}

Atom Atom::h1(int a, int b, Arg arg) {
  if (a < 0 || b < 0) throw std::invalid_argument("H index must be nonnegative");
  Atom x{Kind::H1, a, b, 0, arg};
  return x;
}

Atom Atom::h2(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("H index must be nonnegative");
  Atom x{Kind::H2, a, b, c, Arg::z1};
  return x;
}

Atom Atom::g(Arg arg) {
  Atom x{Kind::G};
  x.arg = arg;
  return x;
}

Atom Atom::dd(const SpectralExpr& body, std::vector<Node> nodes) {
  if (nodes.empty()) throw std::invalid_argument("divided difference needs at least one node");
  Atom x{Kind::DD};
  x.body = std::make_shared<const SpectralExpr>(body);
  x.nodes = std::move(nodes);
  return x;
}

std::string Atom::str() const {
  switch (kind) {
    case Kind::Unit: return "1";
    case Kind::Gamma: return "gamma";
    case Kind::H1: return "H[" + std::to_string(a) + "," + std::to_string(b) + "](" + arg_name(arg) + ")";
    case Kind::H2:
      return "H[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "](z1,z2)";
    case Kind::G: return std::string("G(") + arg_name(arg) + ")";
    case Kind::DD: {
      std::string s = "DD[" + body->str() + "](";
      for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? "," : "") + std::string(node_name(nodes[i]));
      return s + ")";
    }
  }
  return "?";
}

bool operator<(const Atom& x, const Atom& y) {
  auto kx = std::tie(x.kind, x.a, x.b, x.c, x.arg);
  auto ky = std::tie(y.kind, y.a, y.b, y.c, y.arg);
  if (kx != ky) return kx < ky;
  if (x.kind != Atom::Kind::DD) return false;
  if (x.nodes != y.nodes) return x.nodes < y.nodes;
  return x.body->str() < y.body->str();
}

int& PowerKey::at(Var v) {
  switch (v) {
    case Var::z: return k[0];
    case Var::z1: return k[1];
    case Var::z2: return k[2];
    default: throw std::invalid_argument("PowerKey: no T-power for m");
  }
}

int PowerKey::at(Var v) const { return const_cast<PowerKey*>(this)->at(v); }

PowerKey PowerKey::operator+(const PowerKey& o) const {
  PowerKey r;
  for (int i = 0; i < 3; ++i) r.k[i] = k[i] + o.k[i];
  return r;
}

std::string PowerKey::str() const {
  static const char* names[3] = {"z", "z1", "z2"};
  std::string s;
  for (int i = 0; i < 3; ++i) {
    if (!k[i]) continue;
    if (!s.empty()) s += "*";
    s += std::string("T(") + names[i] + ")";
    if (k[i] != 1) s += "^" + std::to_string(k[i]);
  }
  return s;
}

RationalExpr gamma_ratio(int n) {
  if (n <= 0) return RationalExpr(0);
  if (n == 1) return RationalExpr::gamma() * RationalExpr(2) / (rm() - RationalExpr(2));
  RationalExpr r = RationalExpr::gamma();
  for (int i = 0; i <= n - 3; ++i) r = r * (rm() / RationalExpr(2) + RationalExpr(i));
  Q fact = 1;
  for (int i = 2; i <= n - 1; ++i) fact *= i;
  return r / RationalExpr(fact);
}

SpectralExpr::SpectralExpr(const RationalExpr& c) { add(c, Atom::unit()); }

SpectralExpr::SpectralExpr(const Atom& a) { add(RationalExpr(1), a); }

SpectralExpr SpectralExpr::term(const RationalExpr& c, const Atom& a, const PowerKey& p) {
  SpectralExpr e;
  e.add(c, a, p);
  return e;
}

void SpectralExpr::add(const RationalExpr& c, const Atom& atom, const PowerKey& p) {
  if (c.is_zero()) return;
  if (c.has_gamma()) {
    if (atom.kind != Atom::Kind::Unit) throw GammaSquared();
    add(c.rational_part(), atom, p);
    add(c.gamma_part(), Atom::gamma(), p);
    return;
  }
  // Degenerate indices collapse to lower-arity atoms.
  if (atom.kind == Atom::Kind::H1 && atom.b == 0) {
    add(c * gamma_ratio(atom.a), Atom::unit(), p);
    return;
  }
  if (atom.kind == Atom::Kind::H2 && atom.c == 0) {
    add(c, Atom::h1(atom.a, atom.b, Arg::z1), p);
    return;
  }
  if (atom.kind == Atom::Kind::H2 && atom.b == 0) {
    add(c, Atom::h1(atom.a, atom.c, Arg::z2), p);
    return;
  }
  TermKey key{p, atom};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool SpectralExpr::is_one_var() const {
  const std::uint8_t two = (1u << static_cast<int>(Var::z1)) | (1u << static_cast<int>(Var::z2));
  for (const auto& [k, c] : terms_) {
    if (c.var_mask() & two) return false;
    if (k.power.k[1] || k.power.k[2]) return false;
    switch (k.atom.kind) {
      case Atom::Kind::H2: return false;
      case Atom::Kind::H1:
      case Atom::Kind::G:
        if (k.atom.arg != Arg::z) return false;
        break;
      case Atom::Kind::DD:
        for (Node n : k.atom.nodes)
          if (n != Node::zero && n != Node::z) return false;
        break;
      default: break;
    }
  }
  return true;
}

bool SpectralExpr::has_atoms_other_than_unit() const {
  for (const auto& [k, c] : terms_)
    if (k.atom.kind != Atom::Kind::Unit || !k.power.is_one()) return true;
  return false;
}

SpectralExpr SpectralExpr::operator-() const {
  SpectralExpr r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

SpectralExpr& SpectralExpr::operator+=(const SpectralExpr& o) {
  for (const auto& [k, c] : o.terms_) add(c, k.atom, k.power);
  return *this;
}

SpectralExpr& SpectralExpr::operator-=(const SpectralExpr& o) {
  for (const auto& [k, c] : o.terms_) add(-c, k.atom, k.power);
  return *this;
}

SpectralExpr operator*(const RationalExpr& c, const SpectralExpr& e) {
  SpectralExpr r;
  if (c.has_gamma()) {
    // Only a gamma-free expression of unit terms can absorb a gamma factor.
    for (const auto& [k, v] : e.terms_) r.add(c * v, k.atom, k.power);
    return r;
  }
  for (const auto& [k, v] : e.terms_) r.add(c * v, k.atom, k.power);
  return r;
}

SpectralExpr operator*(const SpectralExpr& x, const SpectralExpr& y) {
  auto rx = x.as_rational();
  if (rx) return *rx * y;
  auto ry = y.as_rational();
  if (ry) return *ry * x;
  // Gamma * (rational unit terms with T-powers) is still representable.
  SpectralExpr r;
  for (const auto& [kx, cx] : x.terms_)
    for (const auto& [ky, cy] : y.terms_) {
      const bool ux = kx.atom.kind == Atom::Kind::Unit, uy = ky.atom.kind == Atom::Kind::Unit;
      if (!ux && !uy) throw std::invalid_argument("product of two transcendental atoms is not representable");
      r.add(cx * cy, ux ? ky.atom : kx.atom, kx.power + ky.power);
    }
  return r;
}

SpectralExpr SpectralExpr::times_power(const PowerKey& p) const {
  SpectralExpr r;
  for (const auto& [k, c] : terms_) r.add(c, k.atom, k.power + p);
  return r;
}

bool operator==(const SpectralExpr& x, const SpectralExpr& y) {
  if (x.terms_.size() != y.terms_.size()) return false;
  auto i = x.terms_.begin();
  auto j = y.terms_.begin();
  for (; i != x.terms_.end(); ++i, ++j) {
    if (i->first < j->first || j->first < i->first) return false;
    if (i->second != j->second) return false;
  }
  return true;
}

std::optional<RationalExpr> SpectralExpr::as_rational() const {
  RationalExpr r;
  for (const auto& [k, c] : terms_) {
    if (k.atom.kind != Atom::Kind::Unit || !k.power.is_one()) return std::nullopt;
    r += c;
  }
  return r;
}

SpectralExpr SpectralExpr::specialize_m(const Q& m) const {
  SpectralExpr r;
  for (const auto& [k, c] : terms_) {
    Atom a = k.atom;
    if (a.kind == Atom::Kind::DD) a = Atom::dd(a.body->specialize_m(m), a.nodes);
    r.add(c.specialize(Var::m, m), a, k.power);
  }
  return r;
}

std::string SpectralExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (!k.power.is_one()) os << "*" << k.power.str();
    if (k.atom.kind != Atom::Kind::Unit) os << "*" << k.atom.str();
  }
  return os.str();
}

SpectralExpr substitute_coefficients(const SpectralExpr& e, const std::map<Var, RationalExpr>& bindings) {
  return e.map_coefficients([&](const RationalExpr& c) { return c.substitute(bindings); });
}

SpectralExpr rebase(const SpectralExpr& e, Arg arg) {
  if (arg == Arg::z) return e;
  const RationalExpr v = arg_value(arg);
  const std::map<Var, RationalExpr> bind{{Var::z, v}};
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    RationalExpr coef = c.substitute(bind);
    PowerKey p = k.power;
    const int tz = p.k[0];
    p.k[0] = 0;
    switch (arg) {
      case Arg::z1: p.k[1] += tz; break;
      case Arg::z2: p.k[2] += tz; break;
      case Arg::w:  // T(w) = T(z2)/T(z1)
        p.k[2] += tz;
        p.k[1] -= tz;
        break;
      default: break;
    }
    Atom a = k.atom;
    switch (a.kind) {
      case Atom::Kind::H1:
      case Atom::Kind::G:
        if (a.arg != Arg::z) throw std::invalid_argument("rebase: expression is not one-variable");
        a.arg = arg;
        break;
      case Atom::Kind::H2:
      case Atom::Kind::DD: throw std::invalid_argument("rebase: expression is not one-variable");
      default: break;
    }
    r.add(coef, a, p);
  }
  return r;
}

SpectralExpr fold_powers(const SpectralExpr& e, const MMode& mode) {
  if (mode.is_symbolic()) return e;
  const Q half = *mode.value / 2;
  static const Var vars[3] = {Var::z, Var::z1, Var::z2};
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    PowerKey p = k.power;
    RationalExpr coef = c;
    for (int i = 0; i < 3; ++i) {
      if (!p.k[i]) continue;
      Q ex = half * p.k[i];
      ex.canonicalize();
      if (ex.get_den() != 1) continue;
      // T^k = (1-v)^(-k m/2)
      coef = coef * (RationalExpr(1) - RationalExpr::var(vars[i])).pow(-static_cast<int>(ex.get_num().get_si()));
      p.k[i] = 0;
    }
    r.add(coef, k.atom, p);
  }
  return r;
}

}  // namespace modcurv
