#include "modcurv/hfamily.hpp"

#include <mutex>
#include <sstream>
#include <tuple>

namespace modcurv {

namespace {

RationalExpr half_m() { return rm() / RationalExpr(2); }
RationalExpr one() { return RationalExpr(1); }

Q factorial(int n) {
  Q f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Q binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Memo table guarded by a mutex; values are computed outside the lock so
// recursive lookups are allowed.
template <class Key, class Value>
class Memo {
 public:
  template <class F>
  Value get(const Key& k, F&& compute) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = table_.find(k);
      if (it != table_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return table_.emplace(k, std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<Key, Value> table_;
};

SpectralExpr h1(int a, int b, const RationalExpr& c = one()) { return SpectralExpr::term(c, Atom::h1(a, b)); }
SpectralExpr h2(int a, int b, int c, const RationalExpr& k = one()) {
  return SpectralExpr::term(k, Atom::h2(a, b, c));
}

bool is_h1_basis(const Atom& a) {
  return a.kind == Atom::Kind::H1 && ((a.a == 1 && (a.b == 1 || a.b == 2)) || (a.a == 0 && a.b == 2));
}

bool is_h2_basis(int a, int b, int c) { return a == 1 && ((b == 1 && c == 1) || (b == 2 && c == 1) || (b == 1 && c == 2)); }

}  // namespace

RationalExpr value_at_zero(int a, int b) {
  if (a < 0 || b < 0) throw NonReducibleAtom("value_at_zero: negative index");
  return gamma_ratio(a + b);
}

// ---------------------------------------------------------------- reductions

SpectralExpr reduce_h1(int a, int b) {
  if (a < 0 || b < 0) throw NonReducibleAtom("H[" + std::to_string(a) + "," + std::to_string(b) + "]");
  static Memo<std::pair<int, int>, SpectralExpr> memo;
  return memo.get({a, b}, [&]() -> SpectralExpr {
    if (b == 0) return SpectralExpr(gamma_ratio(a));
    const RationalExpr z = rz();
    if (a == 0) {
      if (b == 1) return h1(1, 1, z) + SpectralExpr(gamma_ratio(1));
      if (b == 2) return h1(0, 2);
      // H_{0,b} = (b + m/2 - 3)/((b-1)(1-z)) H_{0,b-1}
      return ((half_m() + RationalExpr(b - 3)) / (RationalExpr(b - 1) * (one() - z))) * reduce_h1(0, b - 1);
    }
    if (a == 1) {
      if (b <= 2) return h1(1, b);
      // ODE at (1, b') with b' = b - 2: B2 H_{1,b'+2} + B1 H_{1,b'+1} + B0 H_{1,b'} = 0
      const int bp = b - 2;
      const RationalExpr B2 = RationalExpr(bp * (bp + 1)) * (one() - z) * z;
      const RationalExpr B1 = RationalExpr(bp) * (RationalExpr(1 + bp) - z * (RationalExpr(2 * bp) + half_m()));
      const RationalExpr B0 = -RationalExpr(bp) * (RationalExpr(bp - 1) + half_m());
      return (-one() / B2) * (B1 * reduce_h1(1, b - 1) + B0 * reduce_h1(1, b - 2));
    }
    // (a-1) H_{a,b} = (a+b+m/2-3) H_{a-1,b} - b(1-z) H_{a-1,b+1}
    const RationalExpr inv = one() / RationalExpr(a - 1);
    return inv * ((RationalExpr(a + b - 3) + half_m()) * reduce_h1(a - 1, b) -
                  RationalExpr(b) * (one() - z) * reduce_h1(a - 1, b + 1));
  });
}

SpectralExpr swap_z1_z2(const SpectralExpr& e) {
  const std::map<Var, RationalExpr> bind{{Var::z1, rz2()}, {Var::z2, rz1()}};
  auto swap_arg = [](Arg a) {
    if (a == Arg::z1) return Arg::z2;
    if (a == Arg::z2) return Arg::z1;
    if (a == Arg::w) throw std::invalid_argument("swap_z1_z2: atoms at w are not closed under the swap");
    return a;
  };
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    Atom a = k.atom;
    switch (a.kind) {
      case Atom::Kind::H1:
      case Atom::Kind::G: a.arg = swap_arg(a.arg); break;
      case Atom::Kind::H2: std::swap(a.b, a.c); break;
      case Atom::Kind::DD: {
        NodeList nn = a.nodes;
        for (Node& n : nn) {
          if (n == Node::z1) n = Node::z2;
          else if (n == Node::z2) n = Node::z1;
          else if (n == Node::w) throw std::invalid_argument("swap_z1_z2: node w");
        }
        a = Atom::dd(*a.body, nn);
        break;
      }
      default: break;
    }
    PowerKey p = k.power;
    std::swap(p.k[1], p.k[2]);
    r.add(c.substitute(bind), a, p);
  }
  return r;
}

SpectralExpr reduce_h2(int a, int b, int c) {
  if (a < 1 || b < 0 || c < 0)
    throw NonReducibleAtom("H[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]");
  if (b == 0 || c == 0) return SpectralExpr(Atom::h2(a, b, c));  // collapses to a one-variable atom
  static Memo<std::tuple<int, int, int>, SpectralExpr> memo;
  return memo.get({a, b, c}, [&]() -> SpectralExpr {
    const RationalExpr z1 = rz1(), z2 = rz2();
    if (a >= 2) {
      // (a-1) H_{a,b,c} = (a+b+c+m/2-3) H_{a-1,b,c} - b(1-z1) H_{a-1,b+1,c} - c(1-z2) H_{a-1,b,c+1}
      return (one() / RationalExpr(a - 1)) *
             ((RationalExpr(a + b + c - 3) + half_m()) * reduce_h2(a - 1, b, c) -
              RationalExpr(b) * (one() - z1) * reduce_h2(a - 1, b + 1, c) -
              RationalExpr(c) * (one() - z2) * reduce_h2(a - 1, b, c + 1));
    }
    if (is_h2_basis(a, b, c)) return h2(a, b, c);
    if (b == 2 && c == 2) return (one() / (z1 - z2)) * (h2(1, 2, 1) - h2(1, 1, 2));
    if (b == 3 && c == 1) {
      // Appell system at a=b=c=1, solved for H_{1,3,1}:
      // 2 z1(1-z1) H131 + z2(1-z1) H122 + (3 - (3+m/2) z1) H121 - z2 H112 - (1+m/2) H111 = 0
      SpectralExpr rest = (z2 * (one() - z1)) * reduce_h2(1, 2, 2) +
                          (RationalExpr(3) - (RationalExpr(3) + half_m()) * z1) * h2(1, 2, 1) - z2 * h2(1, 1, 2) -
                          (one() + half_m()) * h2(1, 1, 1);
      return (-one() / (RationalExpr(2) * z1 * (one() - z1))) * rest;
    }
    if (c > b) return swap_z1_z2(reduce_h2(1, c, b));
    if (b > c) return (one() / RationalExpr(b - 1)) * reduce_two_var(partial(reduce_h2(1, b - 1, c), Var::z1));
    return (one() / RationalExpr(c - 1)) * reduce_two_var(partial(reduce_h2(1, b, c - 1), Var::z2));
  });
}

SpectralExpr reduce_one_var(const SpectralExpr& e) { return reduce_one_var(e, false); }

SpectralExpr reduce_one_var(const SpectralExpr& e, bool keep_h01) {
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    const Atom& a = k.atom;
    if (a.kind != Atom::Kind::H1 || is_h1_basis(a) || (keep_h01 && a.a == 0 && a.b == 1)) {
      r.add(c, a, k.power);
      continue;
    }
    r += (c * rebase(reduce_h1(a.a, a.b), a.arg)).times_power(k.power);
  }
  return r;
}

SpectralExpr reduce_two_var(const SpectralExpr& e) {
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    const Atom& a = k.atom;
    if (a.kind != Atom::Kind::H2 || is_h2_basis(a.a, a.b, a.c)) {
      r.add(c, a, k.power);
      continue;
    }
    r += (c * reduce_h2(a.a, a.b, a.c)).times_power(k.power);
  }
  return r;
}

SpectralExpr expand_to_divdiff(const SpectralExpr& e) {
  SpectralExpr r;
  for (const auto& [k, c] : e.terms()) {
    const Atom& a = k.atom;
    if (a.kind != Atom::Kind::H2) {
      r.add(c, a, k.power);
      continue;
    }
    if (a.a < 1) throw NonReducibleAtom(a.str());
    const SpectralExpr body = reduce_one_var(rz() * h1(a.a + 1, 1));
    NodeList nodes(a.b, Node::z1);
    nodes.insert(nodes.end(), a.c, Node::z2);
    r += (c * divided_difference(body, nodes)).times_power(k.power);
  }
  return r;
}

SpectralExpr reduce_full(const SpectralExpr& e) { return reduce_full(e, false); }

SpectralExpr reduce_full(const SpectralExpr& e, bool keep_h01) {
  return reduce_one_var(expand_to_divdiff(reduce_two_var(expand_dd(e))), keep_h01);
}

SpectralExpr dimension_shift(const Atom& atom) {
  switch (atom.kind) {
    case Atom::Kind::H1:
      return SpectralExpr::term(RationalExpr(atom.a), Atom::h1(atom.a + 1, atom.b, atom.arg)) +
             SpectralExpr::term(RationalExpr(atom.b), Atom::h1(atom.a, atom.b + 1, atom.arg));
    case Atom::Kind::H2:
      return h2(atom.a + 1, atom.b, atom.c, RationalExpr(atom.a)) + h2(atom.a, atom.b + 1, atom.c, RationalExpr(atom.b)) +
             h2(atom.a, atom.b, atom.c + 1, RationalExpr(atom.c));
    default: throw std::invalid_argument("dimension_shift: H atom expected, got " + atom.str());
  }
}

// ---------------------------------------------------------------- normal forms

std::string NFKey::str() const {
  static const char* names[3] = {"z", "z1", "z2"};
  std::string s = t.str();
  if (log >= 0) s += std::string(s.empty() ? "" : "*") + "L(" + names[log] + ")";
  return s.empty() ? "1" : s;
}

NormalForm NormalForm::constant(const RationalExpr& c, bool m2) {
  NormalForm f(m2);
  f.add(NFKey{}, c);
  return f;
}

void NormalForm::add(const NFKey& k, const RationalExpr& c) {
  if (c.is_zero()) return;
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) {
    coeffs_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) coeffs_.erase(it);
}

NormalForm& NormalForm::operator+=(const NormalForm& o) {
  for (const auto& [k, c] : o.coeffs_) add(k, c);
  return *this;
}

NormalForm& NormalForm::operator-=(const NormalForm& o) {
  for (const auto& [k, c] : o.coeffs_) add(k, -c);
  return *this;
}

NormalForm operator*(const RationalExpr& c, const NormalForm& f) {
  NormalForm r(f.m2_);
  for (const auto& [k, v] : f.coeffs_) r.add(k, c * v);
  return r;
}

NormalForm NormalForm::times_power(const PowerKey& p) const {
  if (p.is_one()) return *this;
  NormalForm r(m2_);
  if (m2_) {
    // T(v) = (1-v)^(-1) at m = 2
    static const Var vars[3] = {Var::z, Var::z1, Var::z2};
    RationalExpr f(1);
    for (int i = 0; i < 3; ++i)
      if (p.k[i]) f *= (one() - RationalExpr::var(vars[i])).pow(-p.k[i]);
    return f * *this;
  }
  for (const auto& [k, v] : coeffs_) r.add(NFKey{k.t + p, k.log}, v);
  return r;
}

NormalForm NormalForm::partial(Var v) const {
  static const Var vars[3] = {Var::z, Var::z1, Var::z2};
  NormalForm r(m2_);
  for (const auto& [k, c] : coeffs_) {
    r.add(k, c.derivative(v));
    for (int i = 0; i < 3; ++i) {
      if (!k.t.k[i]) continue;
      const RationalExpr u = RationalExpr::var(vars[i]);
      const RationalExpr du = u.derivative(v);
      if (du.is_zero()) continue;
      r.add(k, c * RationalExpr(k.t.k[i]) * half_m() * du / (one() - u));
    }
    if (k.log >= 0) {
      const RationalExpr u = RationalExpr::var(vars[k.log]);
      const RationalExpr du = u.derivative(v);
      if (!du.is_zero()) r.add(NFKey{k.t, -1}, -c * du / (one() - u));
    }
  }
  return r;
}

NormalForm NormalForm::rebase(Arg arg) const {
  if (arg == Arg::z) return *this;
  const std::map<Var, RationalExpr> bind{{Var::z, arg_value(arg)}};
  NormalForm r(m2_);
  for (const auto& [k, c] : coeffs_) {
    if (k.t.k[1] || k.t.k[2] || k.log > 0) throw std::invalid_argument("NormalForm::rebase: form is not one-variable");
    const RationalExpr cc = c.substitute(bind);
    const int n = k.t.k[0];
    PowerKey p;
    switch (arg) {
      case Arg::z1: p.k[1] = n; break;
      case Arg::z2: p.k[2] = n; break;
      case Arg::w:
        p.k[2] = n;
        p.k[1] = -n;
        break;
      default: break;
    }
    if (k.log < 0) {
      r.add(NFKey{p, -1}, cc);
    } else if (arg == Arg::w) {
      // L(w) = L(z2) - L(z1)
      r.add(NFKey{p, 2}, cc);
      r.add(NFKey{p, 1}, -cc);
    } else {
      r.add(NFKey{p, arg == Arg::z1 ? 1 : 2}, cc);
    }
  }
  return r;
}

NormalForm NormalForm::finalize(const MMode& mode) const {
  if (mode.is_symbolic()) return *this;
  const Q m0 = *mode.value;
  // Gamma(m/2) is rational for even positive m.
  std::optional<Q> gamma_value;
  Q half = m0 / 2;
  half.canonicalize();
  if (half.get_den() == 1 && half > 0) gamma_value = factorial(static_cast<int>(half.get_num().get_si()) - 1);
  auto subst_gamma = [&](const RationalExpr& c) {
    if (!gamma_value || !c.has_gamma()) return c;
    return c.rational_part() + RationalExpr(*gamma_value) * c.gamma_part();
  };
  if (m2_) {
    NormalForm r(true);
    for (const auto& [k, c] : coeffs_) r.add(k, subst_gamma(c));
    return r;
  }
  static const Var vars[3] = {Var::z, Var::z1, Var::z2};
  const long u = half.get_num().get_si(), v = half.get_den().get_si();
  NormalForm r(false);
  for (const auto& [k, c] : coeffs_) {
    RationalExpr cc;
    try {
      cc = c.specialize(Var::m, m0);
    } catch (const PoleAtPoint&) {
      if (m0 == 2) throw MTwoSingularity("normal form has a pole at m = 2; use fixed m = 2");
      throw;
    }
    NFKey key = k;
    for (int i = 0; i < 3; ++i) {
      const long n = key.t.k[i];
      if (!n) continue;
      long rep = ((n % v) + v) % v;
      // T^n = T^rep * (1-x)^(-(n-rep) u / v), exponent integral by construction
      const long ex = -(n - rep) * u / v;
      cc *= (one() - RationalExpr::var(vars[i])).pow(static_cast<int>(ex));
      key.t.k[i] = static_cast<int>(rep);
    }
    r.add(key, subst_gamma(cc));
  }
  return r;
}

std::string NormalForm::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << k.str() << "] " << c.str();
  }
  return os.str();
}

// ---------------------------------------------------------------- closed forms

namespace {

NormalForm nf_const(const RationalExpr& c, bool m2) { return NormalForm::constant(c, m2); }

NormalForm nf_T(const RationalExpr& c, bool m2) {
  if (m2) return nf_const(c / (one() - rz()), true);
  NormalForm f(false);
  PowerKey p;
  p.k[0] = 1;
  f.add(NFKey{p, -1}, c);
  return f;
}

NormalForm nf_L(const RationalExpr& c) {
  NormalForm f(true);
  f.add(NFKey{{}, 0}, c);
  return f;
}

RationalExpr at_mode(const RationalExpr& c, bool m2) {
  if (!m2) return c;
  try {
    return c.specialize(Var::m, 2);
  } catch (const PoleAtPoint&) {
    throw MTwoSingularity("coefficient has a pole at m = 2");
  }
}

// H_{0,b} from its defining closed form.
NormalForm cf_h0(int b, bool m2) {
  if (b == 1) {
    if (m2) return nf_L(-RationalExpr::gamma());
    return nf_T(gamma_ratio(1) * (one() - rz()), false);
  }
  return nf_T(at_mode(gamma_ratio(b), m2) * (one() - rz()).pow(2 - b), m2);
}

// H_{a,1} from the Euler integral, a >= 1:
// Gamma(d)/Gamma(a) z^{1-a} sum_k C(a-1,k) (-(1-z))^{a-1-k} int_0^1 (1-zt)^{k-d} dt, d = a-1+m/2.
NormalForm cf_ha1(int a, bool m2) {
  static Memo<std::pair<int, bool>, NormalForm> memo;
  return memo.get({a, m2}, [&]() -> NormalForm {
    const RationalExpr z = rz(), y = one() - z;
    const RationalExpr pref = at_mode(RationalExpr(a) * gamma_ratio(a + 1), m2) / z.pow(a - 1);
    NormalForm sum(m2);
    for (int k = 0; k <= a - 1; ++k) {
      const RationalExpr w = RationalExpr(binomial(a - 1, k)) * RationalExpr((a - 1 - k) % 2 ? -1 : 1) * y.pow(a - 1 - k);
      NormalForm integral(m2);
      if (m2) {
        const int e = k - a + 1;
        if (e == 0) integral = nf_L(-one() / z);
        else integral = nf_const((one() - y.pow(e)) / (z * RationalExpr(e)), true);
      } else {
        const RationalExpr e = RationalExpr(k - a + 2) - half_m();
        integral = nf_const(one() / (z * e), false) - nf_T(y.pow(k - a + 2) / (z * e), false);
      }
      sum += w * integral;
    }
    return pref * sum;
  });
}

NormalForm cf_hab(int a, int b, bool m2) {
  static Memo<std::tuple<int, int, bool>, NormalForm> memo;
  return memo.get({a, b, m2}, [&]() -> NormalForm {
    if (a == 0) return cf_h0(b, m2);
    if (b == 1) return cf_ha1(a, m2);
    // H_{a,b} = H_{a,b-1}' / (b-1)
    return (one() / RationalExpr(b - 1)) * cf_hab(a, b - 1, m2).partial(Var::z);
  });
}

NormalForm cf_g(bool m2) { return (one() / rz()) * (cf_h0(2, m2) - nf_const(RationalExpr::gamma(), m2)); }

NormalForm cf_habc(int a, int b, int c, bool m2) {
  if (a < 1) throw NonReducibleAtom("closed form needs a >= 1 for H[a,b,c]");
  static Memo<std::tuple<int, int, int, bool>, NormalForm> memo;
  return memo.get({a, b, c, m2}, [&]() -> NormalForm {
    if (b > 1) return (one() / RationalExpr(b - 1)) * cf_habc(a, b - 1, c, m2).partial(Var::z1);
    if (c > 1) return (one() / RationalExpr(c - 1)) * cf_habc(a, b, c - 1, m2).partial(Var::z2);
    // H_{a,1,1} = (z H_{a+1,1})[z1, z2]
    const NormalForm f = rz() * cf_ha1(a + 1, m2);
    return (one() / (rz1() - rz2())) * (f.rebase(Arg::z1) - f.rebase(Arg::z2));
  });
}

NormalForm atom_closed_form(const Atom& a, bool m2) {
  switch (a.kind) {
    case Atom::Kind::Unit: return nf_const(one(), m2);
    case Atom::Kind::Gamma: return nf_const(RationalExpr::gamma(), m2);
    case Atom::Kind::H1: return cf_hab(a.a, a.b, m2).rebase(a.arg);
    case Atom::Kind::G: return cf_g(m2).rebase(a.arg);
    case Atom::Kind::H2: return cf_habc(a.a, a.b, a.c, m2);
    case Atom::Kind::DD: break;
  }
  throw std::invalid_argument("closed form: unexpanded divided-difference atom");
}

NormalForm basis_atom_form(const Atom& a, bool m2) {
  const RationalExpr z = rz();
  auto h02 = [&] { return m2 ? nf_const(RationalExpr::gamma() / (one() - z), true) : nf_T(RationalExpr::gamma(), false); };
  auto h11 = [&] {
    if (m2) return nf_L(-RationalExpr::gamma() / z);
    const RationalExpr c = RationalExpr(2) * RationalExpr::gamma() / ((rm() - RationalExpr(2)) * z);
    return nf_T(c * (one() - z), false) - nf_const(c, false);
  };
  switch (a.kind) {
    case Atom::Kind::Unit: return nf_const(one(), m2);
    case Atom::Kind::Gamma: return nf_const(RationalExpr::gamma(), m2);
    case Atom::Kind::G: return ((one() / z) * (h02() - nf_const(RationalExpr::gamma(), m2))).rebase(a.arg);
    case Atom::Kind::H1:
      if (a.a == 0 && a.b == 1) return cf_h0(1, m2).rebase(a.arg);
      if (a.a == 0 && a.b == 2) return h02().rebase(a.arg);
      if (a.a == 1 && a.b == 1) return h11().rebase(a.arg);
      if (a.a == 1 && a.b == 2) return ((one() / z) * (h02() - h11())).rebase(a.arg);
      break;
    default: break;
  }
  throw NonReducibleAtom("not a basis atom: " + a.str());
}

template <class AtomForm>
NormalForm assemble(const SpectralExpr& e, const MMode& mode, AtomForm&& form) {
  const bool m2 = mode.is_m2();
  NormalForm r(m2);
  for (const auto& [k, c] : e.terms()) {
    const RationalExpr cc = at_mode(c, m2);
    r += cc * form(k.atom, m2).times_power(k.power);
  }
  return r.finalize(mode);
}

}  // namespace

NormalForm closed_form(const SpectralExpr& e, const MMode& mode) {
  return assemble(expand_dd(e), mode, atom_closed_form);
}

NormalForm basis_closed_form(const SpectralExpr& reduced, const MMode& mode) {
  return assemble(reduced, mode, basis_atom_form);
}

NormalForm rewrite_normal_form(const SpectralExpr& e, const MMode& mode) {
  // H01 = z H11 + 2 gamma/(m-2): at m = 2 only the finite part z H11 survives,
  // so it stays an atom and takes its own closed form.
  return basis_closed_form(reduce_full(e, mode.is_m2()), mode);
}

ZeroTest zero_test(const SpectralExpr& e, const MMode& mode) {
  ZeroTest t;
  t.rewrite = rewrite_normal_form(e, mode);
  t.direct = closed_form(e, mode);
  t.rewrite_zero = t.rewrite.is_zero();
  t.direct_zero = t.direct.is_zero();
  return t;
}

}  // namespace modcurv
