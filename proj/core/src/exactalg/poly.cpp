#include "modcurv/exactalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

namespace modcurv {

namespace {

bool desc(const Poly::Term& a, const Poly::Term& b) { return a.first > b.first; }

Exponents add_exp(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (int i = 0; i < kNumVars; ++i) r[i] = static_cast<std::uint16_t>(a[i] + b[i]);
  return r;
}

bool divides(const Exponents& a, const Exponents& b) {  // a | b
  for (int i = 0; i < kNumVars; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

const char* var_name(Var v) {
  switch (v) {
    case Var::z1: return "z1";
    case Var::z2: return "z2";
    case Var::z: return "z";
    case Var::m: return "m";
  }
  return "?";
}

Poly::Poly(long c) {
  if (c != 0) terms_.emplace_back(Exponents{}, Q(c));
}

Poly::Poly(const Q& c) {
  if (c != 0) terms_.emplace_back(Exponents{}, c);
}

Poly Poly::var(Var v, unsigned power) {
  Exponents e{};
  e[static_cast<int>(v)] = static_cast<std::uint16_t>(power);
  return monomial(e, Q(1));
}

Poly Poly::monomial(const Exponents& e, const Q& c) {
  Poly p;
  if (c != 0) p.terms_.emplace_back(e, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == Exponents{});
}

bool Poly::is_one() const {
  return terms_.size() == 1 && terms_[0].first == Exponents{} && terms_[0].second == 1;
}

std::optional<Q> Poly::constant_value() const {
  if (terms_.empty()) return Q(0);
  if (is_constant()) return terms_[0].second;
  return std::nullopt;
}

unsigned Poly::degree(Var v) const {
  unsigned d = 0;
  const int i = static_cast<int>(v);
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.first[i]);
  return d;
}

std::uint8_t Poly::var_mask() const {
  std::uint8_t mask = 0;
  for (const auto& t : terms_)
    for (int i = 0; i < kNumVars; ++i)
      if (t.first[i]) mask |= static_cast<std::uint8_t>(1u << i);
  return mask;
}

void Poly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), desc);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  terms_ = std::move(out);
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->first > j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->first > i->first) {
      out.push_back(*j++);
    } else {
      Q c = i->second + j->second;
      if (c != 0) out.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Q& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= c;
  }
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.is_constant()) return b * a.terms_[0].second;
  if (b.is_constant()) return a * b.terms_[0].second;
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) r.terms_.emplace_back(add_exp(s.first, t.first), s.second * t.second);
  r.canonicalize();
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

bool operator<(const Poly& a, const Poly& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.terms_[i].first != b.terms_[i].first) return a.terms_[i].first < b.terms_[i].first;
    if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second;
  }
  return a.terms_.size() < b.terms_.size();
}

Poly Poly::pow(unsigned k) const {
  Poly result(1), base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return result;
}

Poly Poly::derivative(Var v) const {
  const int i = static_cast<int>(v);
  Poly r;
  for (const auto& t : terms_) {
    if (t.first[i] == 0) continue;
    Exponents e = t.first;
    Q c = t.second * e[i];
    --e[i];
    r.terms_.emplace_back(e, c);
  }
  r.canonicalize();
  return r;
}

std::vector<Poly> Poly::coefficients_in(Var v) const {
  const int i = static_cast<int>(v);
  std::vector<Poly> cs(degree(v) + 1);
  for (const auto& t : terms_) {
    Exponents e = t.first;
    const unsigned d = e[i];
    e[i] = 0;
    cs[d].terms_.emplace_back(e, t.second);
  }
  for (auto& c : cs) c.canonicalize();
  return cs;
}

Poly Poly::from_coefficients(Var v, const std::vector<Poly>& cs) {
  Poly r;
  const int i = static_cast<int>(v);
  for (std::size_t d = 0; d < cs.size(); ++d)
    for (const auto& t : cs[d].terms_) {
      Exponents e = t.first;
      e[i] = static_cast<std::uint16_t>(e[i] + d);
      r.terms_.emplace_back(e, t.second);
    }
  r.canonicalize();
  return r;
}

Q Poly::eval(const std::array<Q, kNumVars>& point) const {
  Q sum = 0;
  for (const auto& t : terms_) {
    Q term = t.second;
    for (int i = 0; i < kNumVars; ++i)
      for (unsigned k = 0; k < t.first[i]; ++k) term *= point[i];
    sum += term;
  }
  return sum;
}

double Poly::eval(const std::array<double, kNumVars>& point) const {
  double sum = 0;
  for (const auto& t : terms_) {
    double term = t.second.get_d();
    for (int i = 0; i < kNumVars; ++i)
      if (t.first[i]) term *= std::pow(point[i], static_cast<int>(t.first[i]));
    sum += term;
  }
  return sum;
}

Poly Poly::specialize(Var v, const Q& value) const {
  const int i = static_cast<int>(v);
  Poly r;
  for (const auto& t : terms_) {
    Exponents e = t.first;
    Q c = t.second;
    for (unsigned k = 0; k < e[i]; ++k) c *= value;
    e[i] = 0;
    if (c != 0) r.terms_.emplace_back(e, c);
  }
  r.canonicalize();
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool is_const = (e == Exponents{});
    Q a = abs(c);
    if (c < 0) {
      os << "-";
    } else if (!first) {
      os << "+";
    }
    first = false;
    bool wrote = false;
    if (is_const || a != 1) {
      os << a.get_str();
      wrote = true;
    }
    for (int i = 0; i < kNumVars; ++i) {
      if (!e[i]) continue;
      if (wrote) os << "*";
      os << var_name(static_cast<Var>(i));
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

namespace {

struct PolyLexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  std::string digits() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw ParseError("expected digits at position " + std::to_string(start) + " in '" + s + "'");
    return s.substr(start, pos - start);
  }
};

}  // namespace

Poly Poly::parse(const std::string& text) {
  PolyLexer lx{text};
  Poly r;
  if (lx.peek() == '0' && text.find_first_not_of("0 ") == std::string::npos) return r;
  bool first = true;
  while (!lx.done()) {
    int sign = 1;
    char c = lx.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++lx.pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-' in '" + text + "'");
    }
    first = false;
    Q coef = 1;
    Exponents e{};
    bool need_factor = true;
    while (need_factor) {
      c = lx.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num = lx.digits();
        if (lx.peek() == '/') {
          ++lx.pos;
          num += "/" + lx.digits();
        }
        Q v(num);
        v.canonicalize();
        coef *= v;
      } else if (c == 'z' || c == 'm') {
        Var v;
        if (c == 'm') {
          v = Var::m;
          ++lx.pos;
        } else {
          ++lx.pos;
          if (lx.pos < text.size() && text[lx.pos] == '1') {
            v = Var::z1;
            ++lx.pos;
          } else if (lx.pos < text.size() && text[lx.pos] == '2') {
            v = Var::z2;
            ++lx.pos;
          } else {
            v = Var::z;
          }
        }
        unsigned k = 1;
        if (lx.peek() == '^') {
          ++lx.pos;
          k = static_cast<unsigned>(std::stoul(lx.digits()));
        }
        e[static_cast<int>(v)] = static_cast<std::uint16_t>(e[static_cast<int>(v)] + k);
      } else {
        throw ParseError("unexpected character in polynomial '" + text + "'");
      }
      if (lx.peek() == '*') {
        ++lx.pos;
      } else {
        need_factor = false;
      }
    }
    r.terms_.emplace_back(e, coef * sign);
  }
  r.canonicalize();
  return r;
}

Poly make_monic(const Poly& p) {
  if (p.is_zero()) return p;
  const Q& lc = p.leading().second;
  if (lc == 1) return p;
  Q inv = 1 / lc;
  return p * inv;
}

Poly divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ZeroDenominator();
  if (auto c = b.constant_value()) return a * (1 / *c);
  Poly q, r = a;
  const auto& [lb, lcb] = b.leading();
  while (!r.is_zero()) {
    const auto& [lr, lcr] = r.leading();
    if (!divides(lb, lr)) throw std::logic_error("divide_exact: not divisible");
    Exponents e;
    for (int i = 0; i < kNumVars; ++i) e[i] = static_cast<std::uint16_t>(lr[i] - lb[i]);
    Poly t = Poly::monomial(e, lcr / lcb);
    q += t;
    r -= t * b;
  }
  return q;
}

namespace {

int top_var(std::uint8_t mask) {
  for (int i = 0; i < kNumVars; ++i)
    if (mask & (1u << i)) return i;
  return -1;
}

Poly content_in(const Poly& p, Var v);

// Pseudo-remainder of a by b in variable v (deg_v(b) >= 1).
Poly prem(Poly a, const Poly& b, Var v) {
  const unsigned db = b.degree(v);
  auto bc = b.coefficients_in(v);
  const Poly& lcb = bc.back();
  while (!a.is_zero() && a.degree(v) >= db) {
    const unsigned da = a.degree(v);
    Poly lca = a.coefficients_in(v).back();
    a = a * lcb - lca * Poly::var(v, da - db) * b;
  }
  return a;
}

Poly primitive_part(const Poly& p, Var v) {
  Poly c = content_in(p, v);
  return divide_exact(p, c);
}

Poly content_in(const Poly& p, Var v) {
  auto cs = p.coefficients_in(v);
  Poly g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g.is_zero() ? Poly(1) : g;
}

}  // namespace

namespace {

using UPoly = std::vector<Q>;  // dense, index = degree

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

unsigned univariate_gcd_degree(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size()) {
      const Q f = a.back() / b.back();
      const size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
      a.pop_back();
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : static_cast<unsigned>(a.size() - 1);
}

// Image of p in Q[v] with the other variables set to point values.
UPoly image(const Poly& p, int v, const std::array<Q, kNumVars>& point) {
  UPoly r(p.degree(static_cast<Var>(v)) + 1);
  for (const auto& [e, c] : p.terms()) {
    Q t = c;
    for (int i = 0; i < kNumVars; ++i) {
      if (i == v || e[i] == 0) continue;
      Q x = 1;
      for (unsigned k = 0; k < e[i]; ++k) x *= point[i];
      t *= x;
    }
    r[e[v]] += t;
  }
  return r;
}

// True when gcd(a, b) is certainly free of v: an evaluation image that keeps
// both degrees in v and has coprime images bounds the gcd degree by zero.
bool gcd_free_of(const Poly& a, const Poly& b, int v) {
  static const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::array<Q, kNumVars> point;
    for (int i = 0; i < kNumVars; ++i) point[i] = Q(primes[(i + 3 * attempt) % 14], primes[(2 * i + attempt + 5) % 14]);
    UPoly ia = image(a, v, point), ib = image(b, v, point);
    if (ia.back() == 0 || ib.back() == 0) continue;
    return univariate_gcd_degree(std::move(ia), std::move(ib)) == 0;
  }
  return false;
}

std::optional<Poly> try_divide(const Poly& a, const Poly& b) {
  Poly q, r = a;
  const auto& [lb, lcb] = b.leading();
  while (!r.is_zero()) {
    const auto& [lr, lcr] = r.leading();
    if (!divides(lb, lr)) return std::nullopt;
    Exponents e;
    for (int i = 0; i < kNumVars; ++i) e[i] = static_cast<std::uint16_t>(lr[i] - lb[i]);
    Poly t = Poly::monomial(e, lcr / lcb);
    q += t;
    r -= t * b;
  }
  return q;
}

// Integer primitive part with positive leading coefficient.
Poly integer_primitive(const Poly& p) {
  mpz_class l = 1, g = 0;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.get_den_mpz_t());
  for (const auto& t : p.terms()) {
    mpz_class v = t.second.get_num() * (l / t.second.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Q scale(l, g);
  scale.canonicalize();
  if (p.leading().second < 0) scale = -scale;
  return p * scale;
}

mpz_class max_norm(const Poly& p) {
  mpz_class n = 0;
  for (const auto& t : p.terms()) n = std::max<mpz_class>(n, abs(t.second.get_num()));
  return n;
}

// Symmetric residue of every coefficient modulo xi.
Poly symmetric_mod(const Poly& p, const mpz_class& xi) {
  Poly r;
  const mpz_class half = xi / 2;
  for (const auto& [e, c] : p.terms()) {
    mpz_class v = c.get_num() % xi;
    if (v < 0) v += xi;
    if (v > half) v -= xi;
    if (v != 0) r += Poly::monomial(e, Q(v));
  }
  return r;
}

// Heuristic gcd of integer polynomials (evaluation at a large integer, gcd of
// the images, xi-adic reconstruction). Returns nullopt when it gives up.
std::optional<Poly> heu_gcd(const Poly& f_in, const Poly& g_in, int depth = 0) {
  if (f_in.is_constant() && g_in.is_constant()) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), f_in.constant_value()->get_num_mpz_t(), g_in.constant_value()->get_num_mpz_t());
    return Poly(Q(r));
  }
  if (depth > 8) return std::nullopt;
  // Split off integer contents; the gcd of the primitive parts is primitive,
  // so divisibility over Q below is divisibility over Z.
  const Poly f = integer_primitive(f_in), g = integer_primitive(g_in);
  mpz_class content;
  {
    const mpz_class cf = abs(Q(f_in.leading().second / f.leading().second).get_num());
    const mpz_class cg = abs(Q(g_in.leading().second / g.leading().second).get_num());
    mpz_gcd(content.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  }
  const int v = top_var(static_cast<std::uint8_t>(f.var_mask() | g.var_mask()));
  const mpz_class fn = max_norm(f), gn = max_norm(g);
  const mpz_class b = 2 * std::min(fn, gn) + 29;
  mpz_class xi = std::max<mpz_class>(
      std::min<mpz_class>(b, 99 * sqrt(b)),
      2 * std::min<mpz_class>(fn / abs(f.leading().second.get_num()), gn / abs(g.leading().second.get_num())) + 2);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const Poly fe = f.specialize(static_cast<Var>(v), Q(xi)), ge = g.specialize(static_cast<Var>(v), Q(xi));
    if (!fe.is_zero() && !ge.is_zero()) {
      if (auto he = heu_gcd(fe, ge, depth + 1)) {
        // xi-adic reconstruction in v
        Poly h, rest = *he;
        for (unsigned i = 0; !rest.is_zero() && i <= 64; ++i) {
          Poly digit = symmetric_mod(rest, xi);
          h += digit * Poly::var(static_cast<Var>(v), i);
          rest = (rest - digit) * Q(mpz_class(1), xi);
        }
        if (!h.is_zero() && rest.is_zero()) {
          h = integer_primitive(h);
          if (try_divide(f, h) && try_divide(g, h)) return h * Q(content);
        }
      }
    }
    xi = xi * 73794 * mpz_class(sqrt(sqrt(xi))) / 27011;
  }
  return std::nullopt;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return make_monic(a);
  const std::uint8_t ma = a.var_mask(), mb = b.var_mask();
  {
    const std::uint8_t common = ma & mb;
    bool coprime = true;
    for (int i = 0; i < kNumVars && coprime; ++i)
      if ((common & (1u << i)) && !gcd_free_of(a, b, i)) coprime = false;
    if (coprime) return Poly(1);
  }
  if (auto h = heu_gcd(a, b)) {
    // Accept only when the cofactors are certifiably coprime.
    const Poly ca = *try_divide(a, *h), cb = *try_divide(b, *h);
    bool certified = true;
    const std::uint8_t common = ca.var_mask() & cb.var_mask();
    if (!ca.is_constant() && !cb.is_constant())
      for (int i = 0; i < kNumVars && certified; ++i)
        if ((common & (1u << i)) && !gcd_free_of(ca, cb, i)) certified = false;
    if (certified) return make_monic(*h);
  }
  const int vi = top_var(static_cast<std::uint8_t>(ma | mb));
  const Var v = static_cast<Var>(vi);
  const bool in_a = ma & (1u << vi), in_b = mb & (1u << vi);
  if (!in_a) return gcd(a, content_in(b, v));
  if (!in_b) return gcd(content_in(a, v), b);
  Poly ca = content_in(a, v), cb = content_in(b, v);
  Poly g_content = gcd(ca, cb);
  Poly p = divide_exact(a, ca), q = divide_exact(b, cb);
  if (p.degree(v) < q.degree(v)) std::swap(p, q);
  while (true) {
    Poly r = prem(p, q, v);
    if (r.is_zero()) break;
    if (r.degree(v) == 0) {
      q = Poly(1);
      break;
    }
    p = std::move(q);
    q = primitive_part(r, v);
  }
  return make_monic(g_content * q);
}

}  // namespace modcurv
