#include <benchmark/benchmark.h>

#include "heatctl/error_lab.hpp"

using namespace heatctl;

namespace {

struct Bench {
  DomainSpec d = build_domain(1.0, 0.25, 0.75, 64);
  Vec y0;
  BallTarget target{1.0};
  double t_exit;
  double M;

  Bench() {
    y0 = Vec::Zero(64);
    y0[0] = 2.0;
    y0[1] = 0.5;
    t_exit = exit_time(d, y0, target);
    M = solve_jp_continuous(d, y0, target, 0.6 * t_exit).norm;
  }
};

const Bench& fixture() {
  static Bench b;
  return b;
}

void BM_ContinuousGramian(benchmark::State& state) {
  const Bench& b = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(continuous_gramian(b.d, 0.5 * b.t_exit));
}
BENCHMARK(BM_ContinuousGramian);

void BM_SampledGramian(benchmark::State& state) {
  const Bench& b = fixture();
  const int k = static_cast<int>(state.range(0));
  const SamplingGrid grid(0.5 * b.t_exit / k, k);
  for (auto _ : state)
    benchmark::DoNotOptimize(sampled_gramian(b.d, grid));
}
BENCHMARK(BM_SampledGramian)->Arg(8)->Arg(64)->Arg(512);

void BM_SecularSolve(benchmark::State& state) {
  const Bench& b = fixture();
  const Mat W = continuous_gramian(b.d, 0.5 * b.t_exit).matrix;
  const Vec q = semigroup_apply(b.d, 0.5 * b.t_exit, b.y0);
  for (auto _ : state)
    benchmark::DoNotOptimize(secular_solve(W, q, b.target.radius));
}
BENCHMARK(BM_SecularSolve);

void BM_SolveSampled(benchmark::State& state) {
  const Bench& b = fixture();
  const int k = static_cast<int>(state.range(0));
  const SamplingGrid grid(0.5 * b.t_exit / k, k);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_jp_sampled(b.d, b.y0, b.target, grid));
}
BENCHMARK(BM_SolveSampled)->Arg(8)->Arg(64)->Arg(512);

void BM_OptimalTimeDistributed(benchmark::State& state) {
  const Bench& b = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        optimal_time_distributed(b.d, b.y0, b.target, b.M));
}
BENCHMARK(BM_OptimalTimeDistributed);

void BM_OptimalTimeSampled(benchmark::State& state) {
  const Bench& b = fixture();
  const double delta = b.t_exit / state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        optimal_time_sampled(b.d, b.y0, b.target, b.M, delta));
}
BENCHMARK(BM_OptimalTimeSampled)->Arg(16)->Arg(128)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
