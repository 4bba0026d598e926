#include <benchmark/benchmark.h>

#include "ltrgen/synth.hpp"
#include "ltrgen/trainers.hpp"

namespace {

using namespace ltrgen;

Dataset data(std::size_t n, std::size_t m) {
  SynthConfig sc;
  sc.n = n;
  sc.m = m;
  sc.d = 10;
  sc.seed = 1;
  return generate(sc);
}

void BM_OgdListNet(benchmark::State& state) {
  const Dataset d = data(static_cast<std::size_t>(state.range(0)), 25);
  TrainConfig tc;
  for (auto _ : state) benchmark::DoNotOptimize(ogd_train(d, tc));
  state.SetComplexityN(state.range(0));
}

void BM_RermListNet(benchmark::State& state) {
  const Dataset d = data(200, static_cast<std::size_t>(state.range(0)));
  TrainConfig tc;
  for (auto _ : state) benchmark::DoNotOptimize(rerm_train(d, tc));
}

void BM_RermRankSvm(benchmark::State& state) {
  const Dataset d = data(200, static_cast<std::size_t>(state.range(0)));
  TrainConfig tc;
  tc.loss = SurrogateLoss::ranksvm();
  tc.max_iterations = 200;
  for (auto _ : state) benchmark::DoNotOptimize(rerm_train(d, tc));
}

}  // namespace

BENCHMARK(BM_OgdListNet)->RangeMultiplier(4)->Range(100, 6400)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RermListNet)->Arg(5)->Arg(25)->Arg(125)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RermRankSvm)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);
