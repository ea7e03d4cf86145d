#pragma once
// Hypergeometric atoms H_{a,b}(z;m), H_{a,b,c}(z1,z2;m): recurrence reduction,
// closed-form normal forms and the two zero tests.

#include <map>
#include <string>

#include "modcurv/divdiff.hpp"
#include "modcurv/expr.hpp"

namespace modcurv {

// H_{a,b}(0;m) = Gamma(a+b+m/2-2)/Gamma(a+b).
RationalExpr value_at_zero(int a, int b);

// Reduced forms of single atoms (in z for H_{a,b}).
SpectralExpr reduce_h1(int a, int b);
SpectralExpr reduce_h2(int a, int b, int c);

// One-variable atoms at any argument -> {H11, H12, H02, G}.
SpectralExpr reduce_one_var(const SpectralExpr& e);
// keep_h01 leaves H01 unreduced (its reduction has a pole at m = 2).
SpectralExpr reduce_one_var(const SpectralExpr& e, bool keep_h01);
// H_{a,b,c} atoms -> {H111, H121, H112}.
SpectralExpr reduce_two_var(const SpectralExpr& e);
// H_{a,b,c} = (z H_{a+1,1})[z1 (b times), z2 (c times)], bodies reduced first.
SpectralExpr expand_to_divdiff(const SpectralExpr& e);
// Full pipeline: expand DD atoms, reduce two-variable atoms, expand to divided
// differences, reduce one-variable atoms.
SpectralExpr reduce_full(const SpectralExpr& e);
SpectralExpr reduce_full(const SpectralExpr& e, bool keep_h01);

// Atom at dimension m+2 written with dimension-m atoms.
SpectralExpr dimension_shift(const Atom& atom);

// Exchange z1 <-> z2 (uses H_{a,b,c}(z1,z2) = H_{a,c,b}(z2,z1)).
SpectralExpr swap_z1_z2(const SpectralExpr& e);

// Basis element of a normal form: T(z)^i T(z1)^j T(z2)^k times optionally L(v) = log(1-v).
struct NFKey {
  PowerKey t;
  int log = -1;  // -1 none, 0 z, 1 z1, 2 z2
  friend bool operator<(const NFKey& x, const NFKey& y) {
    if (x.log != y.log) return x.log < y.log;
    return x.t < y.t;
  }
  std::string str() const;
};

// Coefficients over {T-monomials} (symbolic m) or {1, L(v)} (m = 2). At fixed
// m != 2 fractional T-powers are reduced to one representative per class.
class NormalForm {
 public:
  using Coeffs = std::map<NFKey, RationalExpr>;

  NormalForm() = default;
  explicit NormalForm(bool m2) : m2_(m2) {}
  static NormalForm constant(const RationalExpr& c, bool m2);

  bool m2() const { return m2_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  void add(const NFKey& k, const RationalExpr& c);
  NormalForm& operator+=(const NormalForm& o);
  NormalForm& operator-=(const NormalForm& o);
  friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
  friend NormalForm operator-(NormalForm a, const NormalForm& b) { return a -= b; }
  friend NormalForm operator*(const RationalExpr& c, const NormalForm& f);
  NormalForm times_power(const PowerKey& p) const;

  NormalForm partial(Var v) const;
  // One-variable form in z rewritten at argument arg.
  NormalForm rebase(Arg arg) const;
  // Specialize m (symbolic forms only); fold T-powers; substitute gamma when
  // Gamma(m/2) is rational.
  NormalForm finalize(const MMode& mode) const;

  std::string str() const;

 private:
  bool m2_ = false;
  Coeffs coeffs_;
};

// Direct backend: every atom through its Euler-integral closed form.
NormalForm closed_form(const SpectralExpr& e, const MMode& mode);
// Rewrite backend: reduce_full, then the closed forms of the basis atoms
// (H02, H11, H12 = (H02 - H11)/z, G = (H02 - gamma)/z).
NormalForm rewrite_normal_form(const SpectralExpr& e, const MMode& mode);
// Closed forms of the reduced basis only; e must already be reduced.
NormalForm basis_closed_form(const SpectralExpr& reduced, const MMode& mode);

struct ZeroTest {
  NormalForm rewrite, direct;
  bool rewrite_zero = false, direct_zero = false;
  bool agree() const { return rewrite_zero == direct_zero; }
  bool zero() const { return rewrite_zero && direct_zero; }
};
ZeroTest zero_test(const SpectralExpr& e, const MMode& mode);

}  // namespace modcurv
