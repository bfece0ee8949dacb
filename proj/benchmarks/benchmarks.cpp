#include <benchmark/benchmark.h>

#include "rssloc/bench.hpp"
#include "rssloc/rounding.hpp"

using namespace rssloc;

namespace {

const PathLossModel kChannel{0.025, 8.0, 3.0, 0.0};

Trial fixture_trial(int num_anchors, double zeta, double sigma) {
  const SweepPoint point{PlacementKind::Random, num_anchors, zeta, sigma, 0.15};
  return make_trial(point, kChannel, 1, 0);
}

void BM_RobustSdpSolve(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const Trial trial = fixture_trial(M, 0.1, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_robust_sdp(trial.reported_anchors, trial.rss.betas, trial.zeta));
  }
}
BENCHMARK(BM_RobustSdpSolve)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ComputeK(benchmark::State& state) {
  const Trial trial = fixture_trial(5, 0.1, 2.0);
  const Point2 cand(0.4, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_k(cand, trial.reported_anchors, trial.rss.betas, trial.zeta));
  }
}
BENCHMARK(BM_ComputeK);

void BM_RefineGrid(benchmark::State& state) {
  const Trial trial = fixture_trial(3, 0.1, 2.0);
  const RobustSolution sol =
      estimate_robust_sdp(trial.reported_anchors, trial.rss.betas, trial.zeta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        refine_grid(sol, trial.reported_anchors, trial.rss.betas, trial.zeta));
  }
}
BENCHMARK(BM_RefineGrid)->Unit(benchmark::kMillisecond);

void BM_RefineAnchorAware(benchmark::State& state) {
  const Trial trial = fixture_trial(3, 0.1, 2.0);
  const RobustSolution sol =
      estimate_robust_sdp(trial.reported_anchors, trial.rss.betas, trial.zeta);
  const RoundingBudget budget;
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(refine_anchor_aware(sol, trial.reported_anchors,
                                                 trial.rss.losses, kChannel,
                                                 trial.zeta, budget, rng));
  }
}
BENCHMARK(BM_RefineAnchorAware)->Unit(benchmark::kMillisecond);

void BM_MlEstimate(benchmark::State& state) {
  const Trial trial = fixture_trial(3, 0.0, 2.0);
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(estimate_ml(trial.reported_anchors, trial.rss.betas,
                                         kChannel.gamma, 20, rng));
  }
}
BENCHMARK(BM_MlEstimate)->Unit(benchmark::kMillisecond);

void BM_SocpDistance(benchmark::State& state) {
  const Trial trial = fixture_trial(4, 0.1, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_socp_distance(trial.reported_anchors, trial.ranges.s));
  }
}
BENCHMARK(BM_SocpDistance)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
