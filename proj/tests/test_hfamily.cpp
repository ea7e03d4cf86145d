#include <gtest/gtest.h>

#include "corpus.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/numeric.hpp"
#include "oracles.hpp"

using namespace modcurv;

namespace {

// Frozen from the series oracle: H_{a,b}(0.3; 3) and H_{a,b}(-0.5; 5).
struct Gold1 {
  int a, b;
  double at_03_m3, at_m05_m5;
};
const Gold1 kGold1[] = {
    {1, 1, 1.1534456680722486, 0.80765217816115915},  {1, 2, 1.1991990857762918, 0.65050268357796142},
    {1, 3, 1.4069746919545135, 0.4970039732022921},   {1, 4, 1.7437807623843435, 0.36867352888509363},
    {1, 5, 2.2295179615097571, 0.26834624463056934},  {2, 1, 0.89072914206496861, 1.0433764200359557},
    {2, 2, 1.0282331457044107, 0.78574747291598866},  {2, 3, 1.2624718208336758, 0.57748699942739311},
    {2, 4, 1.6043631385022257, 0.41762694108459895},  {3, 1, 0.75352982658466701, 1.2365981303759311},
    {3, 2, 0.91567773039914573, 0.90170131491988481}, {3, 3, 1.1559803014484335, 0.64842863098498341},
    {4, 1, 0.66545999392231084, 1.4040465381039542},  {4, 2, 0.83405912158944963, 1.0046904463681387},
    {5, 1, 0.60268214688444601, 1.553805072504885},
};

// H_{a,b,c}(0.2, 0.5; 3) from the double-series oracle.
struct Gold2 {
  int a, b, c;
  double v;
};
const Gold2 kGold2[] = {
    {1, 1, 1, 1.4076661932117385}, {1, 1, 2, 2.2296422038277486}, {1, 1, 3, 3.7904163711504222},
    {1, 1, 4, 6.6973025721960991}, {1, 2, 1, 1.484040793798611},  {1, 2, 2, 2.485338033430459},
    {1, 2, 3, 4.3502611257332108}, {1, 3, 1, 1.6355178268561063}, {1, 3, 2, 2.8327340219145089},
    {1, 4, 1, 1.8496251119439111}, {2, 1, 1, 1.2171117460765832}, {2, 1, 2, 2.0250609155023309},
    {2, 1, 3, 3.5307109112961825}, {2, 2, 1, 1.3346452386101388}, {2, 2, 2, 2.3013855896406402},
    {2, 3, 1, 1.5043629412298372}, {3, 1, 1, 1.0898222313143823}, {3, 1, 2, 1.8704773683758972},
    {3, 2, 1, 1.2241150364787826}, {4, 1, 1, 0.99655644251458194},
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST(HFamily, GoldenOneVariable) {
  for (const auto& g : kGold1) {
    EXPECT_LT(rel(eval_H1(g.a, g.b, 0.3, 3.0), g.at_03_m3), 1e-12) << g.a << g.b;
    EXPECT_LT(rel(eval_H1(g.a, g.b, -0.5, 5.0), g.at_m05_m5), 1e-12) << g.a << g.b;
    // reduced symbolic form evaluated in floating point
    const SpectralExpr red = reduce_h1(g.a, g.b);
    EXPECT_LT(rel(evaluate(red, 3.0, {0.3, 0, 0}), g.at_03_m3), 1e-10) << red.str();
    EXPECT_LT(rel(evaluate(red, 5.0, {-0.5, 0, 0}), g.at_m05_m5), 1e-10) << red.str();
  }
}

TEST(HFamily, GoldenTwoVariable) {
  for (const auto& g : kGold2) {
    EXPECT_LT(rel(eval_H2(g.a, g.b, g.c, 0.2, 0.5, 3.0), g.v), 1e-12) << g.a << g.b << g.c;
    EXPECT_LT(rel(eval_H2_quad(g.a, g.b, g.c, 0.2, 0.5, 3.0), g.v), 1e-9);
    const SpectralExpr red = reduce_h2(g.a, g.b, g.c);
    EXPECT_LT(rel(evaluate(red, 3.0, {0, 0.2, 0.5}), g.v), 1e-10) << red.str();
  }
}

TEST(HFamily, ValueAtZero) {
  for (int a = 0; a <= 4; ++a)
    for (int b = 1; a + b <= 6; ++b) {
      if (a + b < 2) continue;
      for (double m : {3.0, 5.0, 7.0}) {
        const double want = std::tgamma(a + b + m / 2 - 2) / std::tgamma(a + b);
        EXPECT_NEAR(value_at_zero(a, b).evaluate(m, {}, std::tgamma(m / 2)), want, 1e-13 * want);
      }
    }
}

TEST(HFamily, DimensionShift) {
  const double m = 3.0;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 3}}) {
    const SpectralExpr s = dimension_shift(Atom::h1(a, b));
    for (double z : {-0.6, 0.1, 0.5}) EXPECT_LT(rel(evaluate(s, m, {z, 0, 0}), oracle::H1(a, b, z, m + 2)), 1e-12);
  }
  const SpectralExpr s2 = dimension_shift(Atom::h2(1, 2, 1));
  EXPECT_LT(rel(evaluate(s2, m, {0, 0.2, -0.4}), oracle::H2(1, 2, 1, 0.2, -0.4, m + 2)), 1e-11);
  EXPECT_THROW(dimension_shift(Atom::g()), std::invalid_argument);
}

TEST(HFamily, SwapArguments) {
  const SpectralExpr e = SpectralExpr(Atom::h2(1, 2, 1)) * rz1();
  const SpectralExpr s = swap_z1_z2(e);
  EXPECT_NEAR(evaluate(s, 3.0, {0, 0.5, 0.2}), evaluate(e, 3.0, {0, 0.2, 0.5}), 1e-12);
}

TEST(HFamily, ReductionsMatchQuadratureOnBothPaths) {
  // every H_{a,b} with a+b <= 6 at five points, against both numeric paths
  const std::vector<double> zs{-0.8, -0.3, 0.2, 0.45, 0.7};
  for (double m : {3.0, 5.0})
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; a + b <= 6; ++b) {
        const SpectralExpr red = reduce_h1(a, b);
        for (double z : zs) {
          const PathValues p = eval_H1_paths(a, b, z, m);
          const double v = evaluate(red, m, {z, 0, 0});
          EXPECT_LT(rel(v, p.quadrature), 1e-8) << a << b << " z=" << z;
          EXPECT_LT(rel(v, p.series), 1e-8) << a << b << " z=" << z;
        }
      }
}

TEST(ZeroTest, FlagsNonzeroExpressions) {
  const MMode sym = MMode::symbolic();
  EXPECT_TRUE(zero_test(SpectralExpr(Atom::h1(1, 1)) - reduce_h1(1, 1), sym).zero());
  const ZeroTest nz = zero_test(SpectralExpr(Atom::h1(2, 1)) - reduce_h1(1, 2), sym);
  EXPECT_FALSE(nz.rewrite_zero);
  EXPECT_FALSE(nz.direct_zero);
  // off by a rational multiple of gamma
  const ZeroTest g = zero_test(SpectralExpr(Atom::g()) - reduce_one_var(SpectralExpr(Atom::g())) +
                                   SpectralExpr(RationalExpr::gamma() * rq(1, 1000)),
                               sym);
  EXPECT_FALSE(g.zero());
  EXPECT_TRUE(g.agree());
  // vanishes at m = 4 only
  const SpectralExpr at4 = (rm() - 4) * SpectralExpr(Atom::h2(1, 1, 1));
  EXPECT_FALSE(zero_test(at4, sym).zero());
  EXPECT_TRUE(zero_test(at4, MMode::fixed(4)).zero());
}

TEST(ZeroTest, BackendsAgreeOnCorpus) {
  int agree = 0, zeros = 0, built = 0;
  const auto entries = corpus::build(500, 2024);
  for (const auto& en : entries) {
    const ZeroTest zt = zero_test(en.e, en.mode);
    agree += zt.agree();
    zeros += zt.zero();
    built += en.built_zero;
    if (en.built_zero) EXPECT_TRUE(zt.zero()) << en.e.str();
  }
  EXPECT_EQ(agree, 500);
  EXPECT_GE(zeros, built);
  EXPECT_GT(500 - zeros, 200);
}
