#include <benchmark/benchmark.h>

#include <random>

#include "ltrgen/losses.hpp"
#include "ltrgen/verification.hpp"

namespace {

using namespace ltrgen;

std::pair<Vector, Vector> draw(std::size_t m) {
  std::mt19937_64 rng(m);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> g(0, 4);
  Vector s(m), y(m);
  for (std::size_t j = 0; j < m; ++j) {
    s[j] = u(rng);
    y[j] = g(rng);
  }
  return {s, y};
}

void gradient_bench(benchmark::State& state, const SurrogateLoss& loss) {
  const auto [s, y] = draw(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loss.gradient(s, y));
  state.SetComplexityN(state.range(0));
}

void BM_ListNetGradient(benchmark::State& state) { gradient_bench(state, SurrogateLoss::listnet()); }
void BM_SmoothDcgGradient(benchmark::State& state) { gradient_bench(state, SurrogateLoss::smooth_dcg1(1.0, 4)); }
void BM_RankSvmGradient(benchmark::State& state) { gradient_bench(state, SurrogateLoss::ranksvm()); }

void BM_ListNetHessianOpNorm(benchmark::State& state) {
  const auto [s, y] = draw(static_cast<std::size_t>(state.range(0)));
  const Matrix h = SurrogateLoss::listnet().hessian(s, y);
  for (auto _ : state) benchmark::DoNotOptimize(op_norm_inf_to_1(h));
}

}  // namespace

BENCHMARK(BM_ListNetGradient)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
BENCHMARK(BM_SmoothDcgGradient)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
BENCHMARK(BM_RankSvmGradient)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
BENCHMARK(BM_ListNetHessianOpNorm)->DenseRange(4, 12, 4);
