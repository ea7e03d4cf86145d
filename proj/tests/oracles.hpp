#pragma once
// Reference implementations written independently of the library: plain power
// series and textbook formulas in long double.

#include <cmath>
#include <vector>

namespace oracle {

using ld = long double;

// Gauss 2F1(a, b; c; x), |x| < 1, direct series.
inline ld hyp2f1(ld a, ld b, ld c, ld x) {
  ld term = 1, sum = 1;
  for (int n = 0; n < 5000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x;
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

// H_{a,b}(z;m) = Gamma(d)/Gamma(a+b) 2F1(d, b; a+b; z), d = a+b+m/2-2, a, b >= 1.
// Pfaff's transformation for z < 0.
inline ld H1(int a, int b, ld z, ld m) {
  const ld d = a + b + m / 2 - 2, c = a + b;
  const ld pref = std::exp(std::lgamma(d) - std::lgamma(c));
  if (z < 0) return pref * std::pow(1 - z, -(ld)b) * hyp2f1(c - d, b, c, z / (z - 1));
  return pref * hyp2f1(d, b, c, z);
}

// Appell-type double series for H_{a,b,c}(z1,z2;m), |z1|, |z2| < 1.
inline ld H2(int a, int b, int c, ld z1, ld z2, ld m) {
  const ld d = a + b + c + m / 2 - 2, s = a + b + c;
  ld sum = 0;
  ld row = 1;  // (d)_i (b)_i / ((s)_i i!) z1^i
  for (int i = 0; i < 400; ++i) {
    ld t = row, rowsum = 0;
    for (int j = 0; j < 400; ++j) {
      rowsum += t;
      t *= (d + i + j) * (c + j) / ((s + i + j) * (j + 1)) * z2;
      if (std::fabs(t) < 1e-22L * std::fabs(rowsum) && j > 3) break;
    }
    sum += rowsum;
    if (std::fabs(rowsum) < 1e-22L * std::fabs(sum) && i > 3) break;
    row *= (d + i) * (b + i) / ((s + i) * (i + 1)) * z1;
  }
  return std::exp(std::lgamma(d) - std::lgamma(s)) * sum;
}

// Divided difference by the recursive definition, distinct nodes.
template <class F>
ld divdiff(F f, std::vector<ld> x) {
  const size_t n = x.size();
  std::vector<ld> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = f(x[i]);
  for (size_t k = 1; k < n; ++k)
    for (size_t i = n - 1; i >= k; --i) v[i] = (v[i] - v[i - 1]) / (x[i] - x[i - k]);
  return v[n - 1];
}

// Value at y = 1 of the one-variable curvature function: Gamma(m/2)(4-m)/12.
inline ld K_at_one(ld m) { return std::tgamma(m / 2) * (4 - m) / 12; }

}  // namespace oracle
