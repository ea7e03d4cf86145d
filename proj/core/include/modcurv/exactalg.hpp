#pragma once
// Exact polynomial and rational-function arithmetic over Q in the symbols
// z1, z2, z, m, with an optional formal factor gamma = Gamma(m/2) of degree <= 1.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modcurv {

using Q = mpq_class;

// Lexicographic order follows the enumerator order: z1 > z2 > z > m.
enum class Var : std::uint8_t { z1 = 0, z2 = 1, z = 2, m = 3 };
inline constexpr int kNumVars = 4;
const char* var_name(Var v);

using Exponents = std::array<std::uint16_t, kNumVars>;

struct ZeroDenominator : std::domain_error {
  ZeroDenominator() : std::domain_error("ZeroDenominator: denominator is identically zero") {}
};
struct PoleAtPoint : std::domain_error {
  PoleAtPoint() : std::domain_error("PoleAtPoint: denominator vanishes at the evaluation point") {}
};
struct GammaSquared : std::domain_error {
  GammaSquared() : std::domain_error("GammaSquared: product would contain gamma^2") {}
};
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Poly {
 public:
  using Term = std::pair<Exponents, Q>;

  Poly() = default;
  Poly(long c);  // NOLINT(google-explicit-constructor)
  Poly(const Q& c);  // NOLINT(google-explicit-constructor)
  static Poly var(Var v, unsigned power = 1);
  static Poly monomial(const Exponents& e, const Q& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  std::optional<Q> constant_value() const;
  // Terms are kept sorted in descending lex order with nonzero coefficients.
  const std::vector<Term>& terms() const { return terms_; }

  const Term& leading() const { return terms_.front(); }
  unsigned degree(Var v) const;
  bool contains(Var v) const { return degree(v) > 0; }
  std::uint8_t var_mask() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Q& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Q& c) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  // Total order used for canonical map keys; not an algebraic order.
  friend bool operator<(const Poly& a, const Poly& b);

  Poly pow(unsigned k) const;
  Poly derivative(Var v) const;
  // Coefficients with respect to v: index i holds the coefficient of v^i.
  std::vector<Poly> coefficients_in(Var v) const;
  static Poly from_coefficients(Var v, const std::vector<Poly>& cs);

  Q eval(const std::array<Q, kNumVars>& point) const;
  double eval(const std::array<double, kNumVars>& point) const;
  // Substitute a constant for one variable.
  Poly specialize(Var v, const Q& value) const;

  std::string str() const;
  static Poly parse(const std::string& text);

 private:
  std::vector<Term> terms_;
  void canonicalize();
  friend class PolyBuilder;
};

// Exact quotient a/b; throws std::logic_error when b does not divide a.
Poly divide_exact(const Poly& a, const Poly& b);
// Monic (leading coefficient 1) greatest common divisor; gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);
// Scale so that the leading coefficient is 1.
Poly make_monic(const Poly& p);

// (num0 + gamma*num1) / den, canonical after construction.
class RationalExpr {
 public:
  RationalExpr() : den_(1) {}
  RationalExpr(long c) : num0_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalExpr(const Q& c) : num0_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalExpr(const Poly& p) : num0_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalExpr(Poly num, Poly den);
  RationalExpr(Poly num0, Poly num1, Poly den);

  static RationalExpr var(Var v) { return RationalExpr(Poly::var(v)); }
  static RationalExpr gamma() { return RationalExpr(Poly(), Poly(1), Poly(1)); }

  const Poly& num() const { return num0_; }
  const Poly& num_gamma() const { return num1_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num0_.is_zero() && num1_.is_zero(); }
  bool has_gamma() const { return !num1_.is_zero(); }
  bool is_constant() const;  // no variables at all (gamma allowed)
  std::optional<Q> rational_value() const;  // constant and gamma-free
  bool contains(Var v) const;
  std::uint8_t var_mask() const;

  // Gamma-free parts: this == rational_part() + gamma * gamma_part().
  RationalExpr rational_part() const { return RationalExpr(num0_, den_); }
  RationalExpr gamma_part() const { return RationalExpr(num1_, den_); }

  RationalExpr operator-() const;
  friend RationalExpr operator+(const RationalExpr& a, const RationalExpr& b);
  friend RationalExpr operator-(const RationalExpr& a, const RationalExpr& b);
  friend RationalExpr operator*(const RationalExpr& a, const RationalExpr& b);
  friend RationalExpr operator/(const RationalExpr& a, const RationalExpr& b);
  RationalExpr& operator+=(const RationalExpr& o) { return *this = *this + o; }
  RationalExpr& operator-=(const RationalExpr& o) { return *this = *this - o; }
  RationalExpr& operator*=(const RationalExpr& o) { return *this = *this * o; }
  RationalExpr& operator/=(const RationalExpr& o) { return *this = *this / o; }
  friend bool operator==(const RationalExpr& a, const RationalExpr& b) {
    return a.num0_ == b.num0_ && a.num1_ == b.num1_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalExpr& a, const RationalExpr& b) { return !(a == b); }

  RationalExpr pow(int k) const;
  RationalExpr derivative(Var v) const;
  RationalExpr substitute(const std::map<Var, RationalExpr>& bindings) const;
  RationalExpr specialize(Var v, const Q& value) const;

  // Exact evaluation; gamma must be given when has_gamma().
  Q evaluate(const Q& m_value, const std::map<Var, Q>& point,
             const std::optional<Q>& gamma_value = std::nullopt) const;
  double evaluate(double m_value, const std::map<Var, double>& point,
                  double gamma_value = 0.0) const;

  std::string str() const;
  static RationalExpr parse(const std::string& text);

 private:
  Poly num0_, num1_, den_;
  void normalize();
};

// Coefficient field element r0(m) + r1(m)*gamma; a RationalExpr free of z-variables.
using ExactScalar = RationalExpr;
bool is_exact_scalar(const RationalExpr& e);

RationalExpr normalize(const RationalExpr& e);
RationalExpr substitute(const RationalExpr& e, const std::map<Var, RationalExpr>& bindings);

inline RationalExpr rz() { return RationalExpr::var(Var::z); }
inline RationalExpr rz1() { return RationalExpr::var(Var::z1); }
inline RationalExpr rz2() { return RationalExpr::var(Var::z2); }
inline RationalExpr rm() { return RationalExpr::var(Var::m); }
inline RationalExpr rq(long p, long q = 1) {
  Q x(p, q);
  x.canonicalize();
  return RationalExpr(x);
}

}  // namespace modcurv
