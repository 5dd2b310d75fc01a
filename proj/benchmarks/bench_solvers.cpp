#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "rnl/bench.hpp"
#include "rnl/config.hpp"
#include "rnl/filter.hpp"
#include "rnl/simulate.hpp"
#include "rnl/solver.hpp"

namespace {

using namespace rnl;

Layout hexagon() { return presets::paper_hexagon().layout; }

DiffMatrix noisy_hexagon_diffs(double sigma, std::uint64_t seed) {
  const auto layout = hexagon();
  const auto ranges = true_ranges(layout, Point(3, 4));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  DiffMatrix m(layout.station_count(), DiffKind::kFiltered);
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i + 1; j < m.size(); ++j) {
      m.set_pair(i, j, ranges[static_cast<std::size_t>(i)] -
                           ranges[static_cast<std::size_t>(j)] + gauss(rng));
    }
  }
  return m;
}

void BM_BuildSymSystem(benchmark::State& state) {
  const auto layout = hexagon();
  const auto diffs = noisy_hexagon_diffs(0.25, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sym_system(layout, diffs));
  }
}
BENCHMARK(BM_BuildSymSystem);

void BM_SolveSym(benchmark::State& state) {
  const auto layout = hexagon();
  const auto diffs = noisy_hexagon_diffs(0.25, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sym(layout, diffs));
  }
}
BENCHMARK(BM_SolveSym);

void BM_SolveNonsym(benchmark::State& state) {
  const auto layout = hexagon();
  const auto diffs = noisy_hexagon_diffs(0.25, 3);
  const auto ranges = true_ranges(layout, Point(3, 4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_nonsym(layout, ranges[0], diffs, 0));
  }
}
BENCHMARK(BM_SolveNonsym);

void BM_SelectBestReference(benchmark::State& state) {
  const auto layout = hexagon();
  const auto diffs = noisy_hexagon_diffs(0.25, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_best_reference(layout, diffs));
  }
}
BENCHMARK(BM_SelectBestReference);

void BM_GridCell(benchmark::State& state) {
  // One full grid cell: 25 realizations, both solvers.
  const auto layout = hexagon();
  const bench::GridSpec cell{3.0, 3.5, 4.0, 4.5, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bench::grid_eval(layout, cell, std::sqrt(0.064), 25, bench::RefMode::fixed(0), ++seed, 1));
  }
}
BENCHMARK(BM_GridCell);

void BM_FilterMovingAverage(benchmark::State& state) {
  const auto layout = hexagon();
  const std::vector<Point> trajectory(100, Point(2, -1));
  Rng rng(5);
  const auto series = gen_epoch_series(layout, trajectory, OffsetProcess::rapidly_varying(),
                                       NoiseSpec::per_range(0.1), rng);
  std::vector<DiffMatrix> raw;
  raw.reserve(series.size());
  for (const auto& epoch : series) raw.push_back(diff_matrix(epoch));
  for (auto _ : state) {
    Rng filter_rng(0);
    benchmark::DoNotOptimize(filter_series(raw, FilterKind::moving_average(8), filter_rng));
  }
}
BENCHMARK(BM_FilterMovingAverage);

}  // namespace

BENCHMARK_MAIN();
