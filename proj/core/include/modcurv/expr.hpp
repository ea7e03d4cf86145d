#pragma once
// Formal sums of coefficient x atom used by the symbolic modules.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modcurv/exactalg.hpp"

namespace modcurv {

// Dimension mode: symbolic m, or m fixed to an exact rational.
struct MMode {
  std::optional<Q> value;
  static MMode symbolic() { return {}; }
  static MMode fixed(const Q& m) { return {m}; }
  bool is_symbolic() const { return !value.has_value(); }
  bool is_m2() const { return value && *value == 2; }
  std::string str() const { return value ? value->get_str() : std::string("symbolic"); }
};

// Argument of a one-variable atom. In y-coordinates z = 1-y, z1 = 1-y1,
// z2 = 1-y1*y2 and w = 1-y2 = (z2-z1)/(1-z1).
enum class Arg : std::uint8_t { z = 0, z1 = 1, z2 = 2, w = 3 };
const char* arg_name(Arg a);
RationalExpr arg_value(Arg a);
inline bool is_two_var_arg(Arg a) { return a != Arg::z; }

// Node symbols for divided differences.
enum class Node : std::uint8_t { zero, z, z1, z2, w };
const char* node_name(Node n);
RationalExpr node_value(Node n);

class SpectralExpr;

struct Atom {
  enum class Kind : std::uint8_t { Unit, Gamma, H1, H2, G, DD };
  Kind kind = Kind::Unit;
  int a = 0, b = 0, c = 0;
  Arg arg = Arg::z;
  // DD only: opaque divided difference of a one-variable body.
  std::shared_ptr<const SpectralExpr> body;
  std::vector<Node> nodes;

  static Atom unit() { return {}; }
  static Atom gamma() { return Atom{Kind::Gamma}; }
  static Atom h1(int a, int b, Arg arg = Arg::z);
  static Atom h2(int a, int b, int c);
  static Atom g(Arg arg = Arg::z);
  static Atom dd(const SpectralExpr& body, std::vector<Node> nodes);

  bool is_h() const { return kind == Kind::H1 || kind == Kind::H2; }
  std::string str() const;
  friend bool operator<(const Atom& x, const Atom& y);
  friend bool operator==(const Atom& x, const Atom& y) { return !(x < y) && !(y < x); }
};

// Product of powers T(v)^k with T(v) = (1-v)^(-m/2), v in {z, z1, z2}.
struct PowerKey {
  std::array<int, 3> k{0, 0, 0};  // exponents for z, z1, z2
  bool is_one() const { return k[0] == 0 && k[1] == 0 && k[2] == 0; }
  int& at(Var v);
  int at(Var v) const;
  std::string str() const;
  friend bool operator<(const PowerKey& x, const PowerKey& y) { return x.k < y.k; }
  friend bool operator==(const PowerKey& x, const PowerKey& y) { return x.k == y.k; }
  PowerKey operator+(const PowerKey& o) const;
};

struct TermKey {
  PowerKey power;
  Atom atom;
  friend bool operator<(const TermKey& x, const TermKey& y) {
    if (x.atom < y.atom) return true;
    if (y.atom < x.atom) return false;
    return x.power < y.power;
  }
};

struct UnknownAtomDerivative : std::logic_error {
  using std::logic_error::logic_error;
};
struct NonReducibleAtom : std::logic_error {
  using std::logic_error::logic_error;
};
struct IllegalWeight : std::domain_error {
  using std::domain_error::domain_error;
};
struct MTwoSingularity : std::domain_error {
  using std::domain_error::domain_error;
};

// Sum of coefficient * T-powers * atom. Coefficients are gamma-free; a gamma
// factor on a unit term is carried by the Gamma atom.
class SpectralExpr {
 public:
  using Terms = std::map<TermKey, RationalExpr>;

  SpectralExpr() = default;
  SpectralExpr(const RationalExpr& c);  // NOLINT(google-explicit-constructor)
  SpectralExpr(long c) : SpectralExpr(RationalExpr(c)) {}  // NOLINT(google-explicit-constructor)
  SpectralExpr(const Atom& a);  // NOLINT(google-explicit-constructor)
  static SpectralExpr term(const RationalExpr& c, const Atom& a, const PowerKey& p = {});

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // True when no atom is two-variable and no coefficient uses z1, z2.
  bool is_one_var() const;
  bool has_atoms_other_than_unit() const;

  void add(const RationalExpr& c, const Atom& a, const PowerKey& p = {});
  SpectralExpr operator-() const;
  SpectralExpr& operator+=(const SpectralExpr& o);
  SpectralExpr& operator-=(const SpectralExpr& o);
  friend SpectralExpr operator+(SpectralExpr a, const SpectralExpr& b) { return a += b; }
  friend SpectralExpr operator-(SpectralExpr a, const SpectralExpr& b) { return a -= b; }
  friend SpectralExpr operator*(const RationalExpr& c, const SpectralExpr& e);
  friend SpectralExpr operator*(const SpectralExpr& e, const RationalExpr& c) { return c * e; }
  // Product where at least one factor is atom-free (unit atoms, no T-powers).
  friend SpectralExpr operator*(const SpectralExpr& x, const SpectralExpr& y);
  SpectralExpr times_power(const PowerKey& p) const;
  friend bool operator==(const SpectralExpr& x, const SpectralExpr& y);

  // Pure rational value when the expression is c * unit.
  std::optional<RationalExpr> as_rational() const;

  // Apply f to every coefficient.
  template <class F>
  SpectralExpr map_coefficients(F&& f) const {
    SpectralExpr r;
    for (const auto& [k, c] : terms_) r.add(f(c), k.atom, k.power);
    return r;
  }

  SpectralExpr specialize_m(const Q& m) const;
  std::string str() const;

 private:
  Terms terms_;
};

// Substitute variables in coefficients only (atoms untouched).
SpectralExpr substitute_coefficients(const SpectralExpr& e, const std::map<Var, RationalExpr>& bindings);

// Rewrite a one-variable expression in z as a function of argument `arg`
// (coefficients z -> value of arg, atoms moved to arg, T(z) -> T(arg)).
SpectralExpr rebase(const SpectralExpr& e, Arg arg);

// Fold T-powers whose exponent k*m/2 is an integer at fixed m.
SpectralExpr fold_powers(const SpectralExpr& e, const MMode& mode);

// Gamma(d)/Gamma(n) with d = n + m/2 - 2 (n >= 1), expressed as gamma * rational(m).
RationalExpr gamma_ratio(int n);

}  // namespace modcurv
