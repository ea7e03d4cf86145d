#include <benchmark/benchmark.h>

#include "modcurv/geometry.hpp"
#include "modcurv/hfamily.hpp"
#include "modcurv/matrixmodel.hpp"
#include "modcurv/numeric.hpp"

using namespace modcurv;

static void BM_EvalH1(benchmark::State& st) {
  double z = -0.7;
  for (auto _ : st) {
    benchmark::DoNotOptimize(eval_H1(3, 2, z, 3.0));
    z = z > 0.8 ? -0.7 : z + 0.05;
  }
}
BENCHMARK(BM_EvalH1);

static void BM_EvalH2Divdiff(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(eval_H2(2, 2, 1, 0.2, 0.5, 3.0));
}
BENCHMARK(BM_EvalH2Divdiff);

static void BM_EvalH2Quadrature(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(eval_H2_quad(2, 2, 1, 0.2, 0.5, 3.0));
}
BENCHMARK(BM_EvalH2Quadrature)->Unit(benchmark::kMillisecond);

static void BM_ExpDivdiff(benchmark::State& st) {
  const std::vector<double> nodes{0.1, 0.1 + 1e-7, 0.8, -0.4};
  for (auto _ : st) benchmark::DoNotOptimize(exp_divdiff(nodes, 1.5));
}
BENCHMARK(BM_ExpDivdiff);

static void BM_ReduceH2(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reduce_h2(2, 2, 2));
}
BENCHMARK(BM_ReduceH2)->Unit(benchmark::kMicrosecond);

static void BM_ZeroTestCurvatureH(benchmark::State& st) {
  const CurvaturePair c = build_curvature();
  for (auto _ : st) benchmark::DoNotOptimize(zero_test(c.H, MMode::symbolic()).zero());
}
BENCHMARK(BM_ZeroTestCurvatureH)->Unit(benchmark::kMillisecond);

static void BM_VerifyTvsK(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(verify_T_vs_K().status);
}
BENCHMARK(BM_VerifyTvsK)->Unit(benchmark::kMillisecond);

static void BM_VerifyCmK(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(verify_H_vs_K().status);
}
BENCHMARK(BM_VerifyCmK)->Unit(benchmark::kMillisecond);

static void BM_ModularApply2(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const ModelState s = ModelState::random(N, 1);
  const CMat a = random_matrix(N, 2), b = random_matrix(N, 3);
  const Fn2 f = [](double x1, double x2) { return std::exp(x1 / 2) / (1 + x2 * x2); };
  for (auto _ : st) benchmark::DoNotOptimize(modular_apply(f, s, a, b));
}
BENCHMARK(BM_ModularApply2)->Arg(2)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
