#pragma once
// Seeded random expressions over the H-family (a+b <= 6, a+b+c <= 6). Half of
// them hide an atom-minus-its-reduction term; a quarter are identically zero.

#include <random>
#include <vector>

#include "modcurv/hfamily.hpp"

namespace corpus {

using namespace modcurv;

struct Entry {
  SpectralExpr e;
  MMode mode;
  bool built_zero = false;
};

inline std::vector<Entry> build(int n, unsigned long seed) {
  std::mt19937_64 rng(seed);
  auto U = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto atom = [&]() -> Atom {
    const int k = U(0, 9);
    if (k < 4) {
      const int a = U(1, 5);
      return Atom::h1(a, U(1, 6 - a), static_cast<Arg>(U(0, 2)));
    }
    if (k < 5) return Atom::h1(0, U(2, 6));
    if (k < 9) {
      const int a = U(1, 4), b = U(1, 5 - a);
      return Atom::h2(a, b, U(1, 6 - a - b));
    }
    return Atom::g();
  };
  auto coef = [&]() -> RationalExpr {
    RationalExpr c = rq(U(-5, 5) | 1, U(1, 4));
    switch (U(0, 3)) {
      case 1: return c * rz();
      case 2: return c * (1 - rz1());
      case 3: return c * rm();
      default: return c;
    }
  };
  std::vector<Entry> out;
  for (int i = 0; i < n; ++i) {
    Entry en;
    en.mode = i % 5 == 4 ? MMode::fixed(3) : MMode::symbolic();
    const int terms = U(1, 3);
    for (int t = 0; t < terms; ++t) en.e += coef() * SpectralExpr(atom());
    if (i % 2 == 0) {
      const Atom A = atom();
      const SpectralExpr red =
          A.kind == Atom::Kind::H2 ? reduce_two_var(SpectralExpr(A)) : reduce_one_var(SpectralExpr(A));
      const SpectralExpr hidden = coef() * (SpectralExpr(A) - red);
      if (i % 4 == 0) {
        en.e = hidden;
        en.built_zero = true;
      } else {
        en.e += hidden;
      }
    }
    out.push_back(std::move(en));
  }
  return out;
}

}  // namespace corpus
