#include <cmath>

#include "modcurv/exactalg.hpp"

namespace modcurv {

RationalExpr::RationalExpr(Poly num, Poly den) : num0_(std::move(num)), den_(std::move(den)) { normalize(); }

RationalExpr::RationalExpr(Poly num0, Poly num1, Poly den)
    : num0_(std::move(num0)), num1_(std::move(num1)), den_(std::move(den)) {
  normalize();
}

void RationalExpr::normalize() {
  if (den_.is_zero()) throw ZeroDenominator();
  if (num0_.is_zero() && num1_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(den_, num0_.is_zero() ? num1_ : num0_);
    if (!g.is_constant() && !num0_.is_zero() && !num1_.is_zero()) g = gcd(g, num1_);
    if (!g.is_one()) {
      num0_ = divide_exact(num0_, g);
      num1_ = divide_exact(num1_, g);
      den_ = divide_exact(den_, g);
    }
  }
  // Integer content normalization: clear denominators, remove the common
  // integer content, and make the leading coefficient of den positive.
  mpz_class l = 1, g = 0;
  for (const Poly* p : {&num0_, &num1_, &den_})
    for (const auto& t : p->terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.get_den_mpz_t());
  for (const Poly* p : {&num0_, &num1_, &den_})
    for (const auto& t : p->terms()) {
      mpz_class v = t.second.get_num() * (l / t.second.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
  Q scale(l, g);
  scale.canonicalize();
  if (den_.leading().second < 0) scale = -scale;
  if (scale != 1) {
    num0_ *= scale;
    num1_ *= scale;
    den_ *= scale;
  }
}

bool RationalExpr::is_constant() const {
  return num0_.is_constant() && num1_.is_constant() && den_.is_constant();
}

std::optional<Q> RationalExpr::rational_value() const {
  if (has_gamma() || !is_constant()) return std::nullopt;
  return *num0_.constant_value() / *den_.constant_value();
}

bool RationalExpr::contains(Var v) const { return num0_.contains(v) || num1_.contains(v) || den_.contains(v); }

std::uint8_t RationalExpr::var_mask() const {
  return static_cast<std::uint8_t>(num0_.var_mask() | num1_.var_mask() | den_.var_mask());
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r = *this;
  r.num0_ = -r.num0_;
  r.num1_ = -r.num1_;
  return r;
}

namespace {

RationalExpr raw(Poly n0, Poly n1, Poly d) { return RationalExpr(std::move(n0), std::move(n1), std::move(d)); }

}  // namespace

RationalExpr operator+(const RationalExpr& a, const RationalExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return raw(a.num0_ + b.num0_, a.num1_ + b.num1_, a.den_);
  if (a.den_.is_constant() || b.den_.is_constant())
    return raw(a.num0_ * b.den_ + b.num0_ * a.den_, a.num1_ * b.den_ + b.num1_ * a.den_, a.den_ * b.den_);
  Poly g = gcd(a.den_, b.den_);
  Poly ca = divide_exact(b.den_, g);  // multiplier for a
  Poly cb = divide_exact(a.den_, g);  // multiplier for b
  return raw(a.num0_ * ca + b.num0_ * cb, a.num1_ * ca + b.num1_ * cb, a.den_ * ca);
}

RationalExpr operator-(const RationalExpr& a, const RationalExpr& b) { return a + (-b); }

RationalExpr operator*(const RationalExpr& a, const RationalExpr& b) {
  if (a.is_zero() || b.is_zero()) return RationalExpr();
  if (a.has_gamma() && b.has_gamma()) throw GammaSquared();
  // (a0 + g a1)(b0 + g b1) with at most one of a1, b1 nonzero.
  if (a.den_.is_one() && b.den_.is_one())
    return raw(a.num0_ * b.num0_, a.num0_ * b.num1_ + a.num1_ * b.num0_, Poly(1));
  // Cross-cancel so the gcds stay small: a = an/ad, b = bn/bd.
  Poly an0 = a.num0_, an1 = a.num1_, ad = a.den_, bn0 = b.num0_, bn1 = b.num1_, bd = b.den_;
  auto cancel = [](Poly& n0, Poly& n1, Poly& d) {
    if (d.is_constant()) return;
    Poly g = gcd(d, n0.is_zero() ? n1 : n0);
    if (!g.is_constant() && !n0.is_zero() && !n1.is_zero()) g = gcd(g, n1);
    if (g.is_constant()) return;
    n0 = divide_exact(n0, g);
    n1 = divide_exact(n1, g);
    d = divide_exact(d, g);
  };
  cancel(an0, an1, bd);
  cancel(bn0, bn1, ad);
  return raw(an0 * bn0, an0 * bn1 + an1 * bn0, ad * bd);
}

RationalExpr operator/(const RationalExpr& a, const RationalExpr& b) {
  if (b.is_zero()) throw ZeroDenominator();
  if (b.has_gamma()) {
    // Only (gamma*c)/(gamma*d) style quotients are representable.
    if (!b.num0_.is_zero() || !a.num0_.is_zero()) throw GammaSquared();
    return raw(a.num1_ * b.den_, Poly(), a.den_ * b.num1_);
  }
  return raw(a.num0_ * b.den_, a.num1_ * b.den_, a.den_ * b.num0_);
}

RationalExpr RationalExpr::pow(int k) const {
  if (k == 0) return RationalExpr(1);
  if (has_gamma() && k != 1) throw GammaSquared();
  if (k == 1) return *this;
  if (k < 0) return RationalExpr(1) / pow(-k);
  return raw(num0_.pow(static_cast<unsigned>(k)), Poly(), den_.pow(static_cast<unsigned>(k)));
}

RationalExpr RationalExpr::derivative(Var v) const {
  // (n/d)' = (n' d - n d') / d^2
  Poly dd = den_.derivative(v);
  return raw(num0_.derivative(v) * den_ - num0_ * dd, num1_.derivative(v) * den_ - num1_ * dd, den_ * den_);
}

namespace {

RationalExpr subst_poly(const Poly& p, const std::map<Var, RationalExpr>& bindings,
                        std::array<std::vector<RationalExpr>, kNumVars>& powers) {
  RationalExpr sum;
  // Group by bound-variable exponents so that each distinct power product is formed once.
  std::map<Exponents, Poly> groups;
  for (const auto& [e, c] : p.terms()) {
    Exponents bound{}, rest = e;
    for (const auto& [v, _] : bindings) {
      const int i = static_cast<int>(v);
      bound[i] = e[i];
      rest[i] = 0;
    }
    groups[bound] += Poly::monomial(rest, c);
  }
  for (const auto& [bound, rest] : groups) {
    RationalExpr term(rest);
    for (const auto& [v, val] : bindings) {
      const int i = static_cast<int>(v);
      const unsigned k = bound[i];
      if (!k) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(RationalExpr(1));
      while (pw.size() <= k) pw.push_back(pw.back() * val);
      term = term * pw[k];
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace

RationalExpr RationalExpr::substitute(const std::map<Var, RationalExpr>& bindings) const {
  for (const auto& [v, val] : bindings)
    if (val.has_gamma()) throw std::invalid_argument("substitute: bindings must be gamma-free");
  std::array<std::vector<RationalExpr>, kNumVars> powers;
  RationalExpr n0 = subst_poly(num0_, bindings, powers);
  RationalExpr n1 = subst_poly(num1_, bindings, powers);
  RationalExpr d = subst_poly(den_, bindings, powers);
  if (d.is_zero()) throw ZeroDenominator();
  return (n0 + RationalExpr::gamma() * n1) / d;
}

RationalExpr RationalExpr::specialize(Var v, const Q& value) const {
  Poly d = den_.specialize(v, value);
  if (d.is_zero()) throw PoleAtPoint();
  return raw(num0_.specialize(v, value), num1_.specialize(v, value), d);
}

Q RationalExpr::evaluate(const Q& m_value, const std::map<Var, Q>& point, const std::optional<Q>& gamma_value) const {
  std::array<Q, kNumVars> pt;
  for (auto& x : pt) x = 0;
  pt[static_cast<int>(Var::m)] = m_value;
  for (const auto& [v, x] : point) pt[static_cast<int>(v)] = x;
  const Q d = den_.eval(pt);
  if (d == 0) throw PoleAtPoint();
  Q n = num0_.eval(pt);
  if (has_gamma()) {
    if (!gamma_value) throw std::invalid_argument("evaluate: gamma value required");
    n += *gamma_value * num1_.eval(pt);
  }
  return n / d;
}

double RationalExpr::evaluate(double m_value, const std::map<Var, double>& point, double gamma_value) const {
  std::array<double, kNumVars> pt{};
  pt[static_cast<int>(Var::m)] = m_value;
  for (const auto& [v, x] : point) pt[static_cast<int>(v)] = x;
  const double d = den_.eval(pt);
  if (d == 0.0) throw PoleAtPoint();
  double n = num0_.eval(pt);
  if (has_gamma()) n += gamma_value * num1_.eval(pt);
  return n / d;
}

std::string RationalExpr::str() const {
  std::string s = "((" + num0_.str() + ")";
  if (has_gamma()) s += "+gamma*(" + num1_.str() + ")";
  s += ")/(" + den_.str() + ")";
  return s;
}

namespace {

// Returns the text between the '(' at pos and its matching ')', advancing pos past it.
std::string take_group(const std::string& s, std::size_t& pos) {
  if (pos >= s.size() || s[pos] != '(') throw ParseError("expected '(' in '" + s + "'");
  int depth = 0;
  const std::size_t start = pos;
  for (; pos < s.size(); ++pos) {
    if (s[pos] == '(') ++depth;
    if (s[pos] == ')' && --depth == 0) {
      ++pos;
      return s.substr(start + 1, pos - start - 2);
    }
  }
  throw ParseError("unbalanced parentheses in '" + s + "'");
}

}  // namespace

RationalExpr RationalExpr::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::size_t pos = 0;
  std::string numer = take_group(s, pos);
  if (s.compare(pos, 2, "/(") != 0) throw ParseError("expected '/(' in '" + text + "'");
  ++pos;
  std::string denom = take_group(s, pos);
  if (pos != s.size()) throw ParseError("trailing characters in '" + text + "'");
  std::size_t npos = 0;
  Poly n0 = Poly::parse(take_group(numer, npos));
  Poly n1;
  if (npos < numer.size()) {
    if (numer.compare(npos, 7, "+gamma*") != 0) throw ParseError("expected '+gamma*' in '" + text + "'");
    npos += 7;
    n1 = Poly::parse(take_group(numer, npos));
  }
  if (npos != numer.size()) throw ParseError("malformed numerator in '" + text + "'");
  return RationalExpr(n0, n1, Poly::parse(denom));
}

bool is_exact_scalar(const RationalExpr& e) { return (e.var_mask() & ~(1u << static_cast<int>(Var::m))) == 0; }

RationalExpr normalize(const RationalExpr& e) {
  if (e.den().is_zero()) throw ZeroDenominator();
  return RationalExpr(e.num(), e.num_gamma(), e.den());
}

RationalExpr substitute(const RationalExpr& e, const std::map<Var, RationalExpr>& bindings) {
  return e.substitute(bindings);
}

}  // namespace modcurv
