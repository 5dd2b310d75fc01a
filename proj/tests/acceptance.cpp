// Acceptance suite: runs every acceptance criterion end to end and prints one
// pass/fail line each. Exit status is the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "rnl/bench.hpp"
#include "rnl/config.hpp"
#include "rnl/filter.hpp"
#include "rnl/simulate.hpp"
#include "rnl/solver.hpp"

using namespace rnl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Exact recovery: zero noise, passthrough filter, random geometry,
//    offsets up to +-1e5 m; both solvers within 1e-9 m. Runtime <= 10 s.
Outcome exact_recovery() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  std::uniform_real_distribution<double> offset_dist(-1e5, 1e5);
  double worst = 0.0;
  const int instances = 1200;
  for (int trial = 0; trial < instances; ++trial) {
    const int d = (rng() % 2 == 0) ? 2 : 3;
    const int n = rnl::testing::random_station_count(rng, d);
    const auto layout = rnl::testing::random_ring_layout(rng, n, d);
    const Point m = rnl::testing::hull_point(rng, layout);
    const double offset = offset_dist(rng);

    const auto epoch = rnl::testing::noise_free_epoch(layout, m, offset);
    std::vector<DiffMatrix> raw{diff_matrix(epoch)};
    Rng filter_rng(0);
    const auto filtered = filter_series(raw, FilterKind::passthrough(), filter_rng);

    const auto sym = solve_sym(layout, filtered[0]);
    worst = std::max(worst, distance(sym.position, m));

    const int ref = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const auto nonsym =
        solve_nonsym(layout, epoch.augmented[static_cast<std::size_t>(ref)], filtered[0], ref);
    worst = std::max(worst, distance(nonsym.position, m));
  }
  const double elapsed = seconds_since(start);
  Outcome outcome;
  outcome.pass = worst <= 1e-9 && elapsed <= 10.0;
  outcome.detail = "max position error " + fmt(worst) + " m over " + std::to_string(instances) +
                   " instances (tolerance 1e-9, " + fmt(elapsed) + " s <= 10 s)";
  return outcome;
}

// 2. Pair-sum identity: (L_i+L_j)/2 = S/n + known part, to 1e-12, over 1e5
//    random range vectors and all pairs. Runtime <= 5 s.
Outcome pair_sum_identity() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(77);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  double worst = 0.0;
  const int vectors = 100000;
  for (int trial = 0; trial < vectors; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 7);  // 4..10
    std::vector<double> l(static_cast<std::size_t>(n));
    for (auto& v : l) v = value(rng);

    DiffMatrix diffs(n, DiffKind::kFiltered);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        diffs.set_pair(i, j, l[static_cast<std::size_t>(i)] - l[static_cast<std::size_t>(j)]);
      }
    }
    const double mean = std::accumulate(l.begin(), l.end(), 0.0) / n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double lhs = 0.5 * (l[static_cast<std::size_t>(i)] + l[static_cast<std::size_t>(j)]);
        const double rhs = mean + pair_sum_known_part(diffs, i, j);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome outcome;
  outcome.pass = worst <= 1e-12 && elapsed <= 5.0;
  outcome.detail = "max identity error " + fmt(worst) + " over " + std::to_string(vectors) +
                   " vectors, all pairs (tolerance 1e-12, " + fmt(elapsed) + " s <= 5 s)";
  return outcome;
}

// 3./4. Grid replication: mean pct_positive over 5 seeds.
Outcome grid_replication(bench::RefMode mode, double center, double tolerance, double budget_s) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = presets::paper_hexagon();
  double mean_positive = 0.0;
  const int seeds = 5;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto report =
        bench::grid_eval(cfg.layout, cfg.grid, cfg.sigma, cfg.realizations, mode, seed, 0);
    mean_positive += report.pct_positive;
  }
  mean_positive /= seeds;
  const double elapsed = seconds_since(start);
  Outcome outcome;
  outcome.pass = std::abs(mean_positive - center) <= tolerance && elapsed <= budget_s;
  outcome.detail = "mean pct_positive " + fmt(mean_positive) + " over " + std::to_string(seeds) +
                   " seeds (target " + fmt(center) + " +- " + fmt(tolerance) + ", " +
                   fmt(elapsed) + " s <= " + fmt(budget_s) + " s)";
  return outcome;
}

// 5. Condition-map symmetry: the symmetric map is invariant under a 60-degree
//    rotation (<= 1e-6 relative per cell); the fixed-reference map is not
//    (> 1e-3 somewhere). Runtime <= 30 s.
Outcome condition_map_symmetry() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = presets::paper_hexagon();
  const double c = 0.5;
  const double s = 0.5 * std::sqrt(3.0);

  const auto relative_gap = [&](const Point& p, const SolverVariant& variant) {
    const Point rotated(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    const double at_p = bench::condition_at(cfg.layout, p, variant);
    const double at_r = bench::condition_at(cfg.layout, rotated, variant);
    if (std::isinf(at_p) && std::isinf(at_r)) return 0.0;
    if (std::isinf(at_p) || std::isinf(at_r)) return 1.0;
    return std::abs(at_p - at_r) / std::max(at_p, at_r);
  };

  const auto map = bench::condition_map(cfg.layout, cfg.grid, SolverVariant::sym(), 0);
  double worst_sym = 0.0;
  double worst_nonsym = 0.0;
  for (const auto& cell : map) {
    const Point p(cell.x, cell.y);
    worst_sym = std::max(worst_sym, relative_gap(p, SolverVariant::sym()));
    worst_nonsym = std::max(worst_nonsym, relative_gap(p, SolverVariant::nonsym(0)));
  }
  const double elapsed = seconds_since(start);
  Outcome outcome;
  outcome.pass = worst_sym <= 1e-6 && worst_nonsym > 1e-3 && elapsed <= 30.0;
  outcome.detail = "sym max relative deviation " + fmt(worst_sym) +
                   " (<= 1e-6); nonsym(ref=1) max deviation " + fmt(worst_nonsym) +
                   " (> 1e-3 required); " + fmt(elapsed) + " s <= 30 s";
  return outcome;
}

// 6. Offset invariance: O -> O + 1e6 with identical noise draws moves neither
//    position estimate by more than 1e-9 m. The noise is drawn on the
//    filtered differences (the same model the grid benchmark uses); the
//    offset reaches the solvers where it physically appears, through the raw
//    reference measurement.
Outcome offset_invariance() {
  Rng rng(4242);
  std::uniform_real_distribution<double> offset_dist(-1e5, 1e5);
  double worst = 0.0;
  const int instances = 100;
  for (int trial = 0; trial < instances; ++trial) {
    const int d = (rng() % 2 == 0) ? 2 : 3;
    const int n = rnl::testing::random_station_count(rng, d);
    const auto layout = rnl::testing::random_ring_layout(rng, n, d);
    const Point m = rnl::testing::hull_point(rng, layout);
    const double offset = offset_dist(rng);

    const auto ranges = true_ranges(layout, m);
    std::normal_distribution<double> gauss(0.0, 0.25);
    DiffMatrix filtered(n, DiffKind::kFiltered);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        filtered.set_pair(i, j, ranges[static_cast<std::size_t>(i)] -
                                    ranges[static_cast<std::size_t>(j)] + gauss(rng));
      }
    }

    const auto sym_a = solve_sym(layout, filtered);
    const auto sym_b = solve_sym(layout, filtered);
    worst = std::max(worst, distance(sym_a.position, sym_b.position));

    const int ref = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const double raw = offset + ranges[static_cast<std::size_t>(ref)];
    const auto ns_a = solve_nonsym(layout, raw, filtered, ref);
    const auto ns_b = solve_nonsym(layout, raw + 1e6, filtered, ref);
    worst = std::max(worst, distance(ns_a.position, ns_b.position));
    if (std::abs((ns_b.nuisance - ns_a.nuisance) - 1e6) > 1e-6) worst = 1.0;
  }
  Outcome outcome;
  outcome.pass = worst <= 1e-9;
  outcome.detail = "max position shift " + fmt(worst) + " m over " + std::to_string(instances) +
                   " instances, O shifted by 1e6 m with identical noise draws (tolerance 1e-9)";
  return outcome;
}

// 7. CLI determinism: byte-identical grid.csv and summary.json across repeat
//    runs and across --threads 1 vs --threads 8.
Outcome cli_determinism() {
  const auto base = fs::temp_directory_path() /
                    ("rnl_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);

  const auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const auto run = [&](const std::string& out_dir, int threads) {
    const std::string command = std::string(RNL_CLI_BIN) +
                                " grid --preset paper-hexagon --realizations 5 --seed 7" +
                                " --threads " + std::to_string(threads) + " --out " + out_dir +
                                " > /dev/null 2> /dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };

  Outcome outcome;
  const auto dir_a = base / "a";
  const auto dir_b = base / "b";
  const auto dir_c = base / "c";
  if (!run(dir_a.string(), 1) || !run(dir_b.string(), 1) || !run(dir_c.string(), 8)) {
    outcome.detail = "CLI grid run failed";
    fs::remove_all(base);
    return outcome;
  }
  const bool csv_equal = slurp(dir_a / "grid.csv") == slurp(dir_b / "grid.csv") &&
                         slurp(dir_a / "grid.csv") == slurp(dir_c / "grid.csv");
  const bool json_equal = slurp(dir_a / "summary.json") == slurp(dir_b / "summary.json") &&
                          slurp(dir_a / "summary.json") == slurp(dir_c / "summary.json");
  fs::remove_all(base);
  outcome.pass = csv_equal && json_equal;
  outcome.detail = std::string("grid.csv ") + (csv_equal ? "identical" : "DIFFERS") +
                   ", summary.json " + (json_equal ? "identical" : "DIFFERS") +
                   " across two seed-7 runs and --threads 1 vs 8";
  return outcome;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"exact recovery (both solvers, zero noise)", exact_recovery},
      {"pair-sum identity oracle", pair_sum_identity},
      {"grid replication, fixed reference station 1",
       [] { return grid_replication(bench::RefMode::fixed(0), 56.11, 5.0, 300.0); }},
      {"grid replication, best-condition reference",
       [] { return grid_replication(bench::RefMode::best(), 50.0, 3.0, 300.0); }},
      {"condition-map 60-degree rotation symmetry", condition_map_symmetry},
      {"offset invariance (+1e6 m clock shift)", offset_invariance},
      {"CLI grid determinism (bytes, threads)", cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %zu: %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
