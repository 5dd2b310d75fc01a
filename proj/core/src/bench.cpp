#include "rnl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "rnl/simulate.hpp"
#include "rnl/solver.hpp"
#include "rnl/version.hpp"

namespace rnl::bench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int axis_cells(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Runs fn(0..count-1) on up to `threads` workers; work items are pure
// functions of their index, so the schedule cannot change results.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  int workers = threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : threads;
  if (workers < 1) workers = 1;
  if (static_cast<std::size_t>(workers) > count) workers = static_cast<int>(count);

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

DiffMatrix true_diffs(std::span<const double> ranges) {
  const int n = static_cast<int>(ranges.size());
  DiffMatrix delta(n, DiffKind::kFiltered);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      delta.set_pair(i, j,
                     ranges[static_cast<std::size_t>(i)] - ranges[static_cast<std::size_t>(j)]);
    }
  }
  return delta;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

int GridSpec::nx() const { return axis_cells(x_min, x_max, step); }
int GridSpec::ny() const { return axis_cells(y_min, y_max, step); }

void validate(const GridSpec& grid) {
  if (!(grid.step > 0.0) || !std::isfinite(grid.step)) {
    throw std::invalid_argument("grid: step must be finite and > 0");
  }
  if (!(grid.x_min < grid.x_max) || !(grid.y_min < grid.y_max)) {
    throw std::invalid_argument("grid: min must be below max on both axes");
  }
}

std::vector<Point> grid_points(const GridSpec& grid) {
  validate(grid);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(grid.nx()) * static_cast<std::size_t>(grid.ny()));
  for (int iy = 0; iy < grid.ny(); ++iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      points.emplace_back(grid.x_min + ix * grid.step, grid.y_min + iy * grid.step);
    }
  }
  return points;
}

std::string RefMode::label() const {
  if (kind == Kind::kBestRef) return "best_ref";
  return "fixed_ref(" + std::to_string(ref + 1) + ")";
}

std::uint64_t cell_seed(std::uint64_t run_seed, std::size_t cell_index) {
  std::uint64_t state = run_seed;
  const std::uint64_t mixed_run = splitmix64(state);
  state = mixed_run ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(cell_index) + 1));
  return splitmix64(state);
}

GridReport grid_eval(const Layout& layout, const GridSpec& grid, double noise_sigma,
                     int realizations, RefMode mode, std::uint64_t seed, int threads) {
  require_valid(layout);
  validate(grid);
  if (layout.dim() != 2) {
    throw std::invalid_argument("grid_eval: the grid benchmark is defined for 2-D layouts");
  }
  if (realizations < 1) throw std::invalid_argument("grid_eval: realizations must be >= 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("grid_eval: sigma must be finite and >= 0");
  }
  if (mode.kind == RefMode::Kind::kFixedRef &&
      (mode.ref < 0 || mode.ref >= layout.station_count())) {
    throw std::invalid_argument("grid_eval: fixed reference index out of range");
  }

  const auto points = grid_points(grid);
  GridReport report;
  report.cells.resize(points.size());
  report.layout = layout;
  report.grid = grid;
  report.sigma = noise_sigma;
  report.realizations = realizations;
  report.mode = mode;
  report.seed = seed;

  const int n = layout.station_count();
  parallel_for(points.size(), threads, [&](std::size_t idx) {
    const Point& m = points[idx];
    const auto ranges = true_ranges(layout, m);

    // The reference station is a property of the cell's geometry, so best_ref
    // selects on the noise-free differences, once.
    int ref = mode.ref;
    if (mode.kind == RefMode::Kind::kBestRef) {
      try {
        ref = select_best_reference(layout, true_diffs(ranges));
      } catch (const RankDeficientError&) {
        ref = -1;  // no usable reference at this cell
      }
    }

    Rng rng(cell_seed(seed, idx));
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    std::vector<double> noisy(static_cast<std::size_t>(n));

    double sum_nonsym = 0.0;
    double sum_sym = 0.0;
    GridCell& cell = report.cells[idx];

    for (int r = 0; r < realizations; ++r) {
      // One filtering-error draw per station; the differences inherit them.
      for (int i = 0; i < n; ++i) {
        noisy[static_cast<std::size_t>(i)] =
            ranges[static_cast<std::size_t>(i)] + (noise_sigma > 0.0 ? gauss(rng) : 0.0);
      }
      DiffMatrix filtered(n, DiffKind::kFiltered);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          filtered.set_pair(i, j, noisy[static_cast<std::size_t>(i)] -
                                      noisy[static_cast<std::size_t>(j)]);
        }
      }

      // Both solvers consume this same filtered matrix.
      double err_nonsym = kInf;
      double err_sym = kInf;
      bool ok_nonsym = false;
      bool ok_sym = false;
      if (ref >= 0) {
        try {
          const auto res =
              solve_nonsym(layout, ranges[static_cast<std::size_t>(ref)], filtered, ref);
          err_nonsym = distance(res.position, m);
          ok_nonsym = true;
        } catch (const RankDeficientError&) {
        }
      }
      try {
        const auto res = solve_sym(layout, filtered);
        err_sym = distance(res.position, m);
        ok_sym = true;
      } catch (const RankDeficientError&) {
      }

      sum_nonsym += err_nonsym;
      sum_sym += err_sym;
      if (!ok_nonsym) ++cell.failed_nonsym;
      if (!ok_sym) ++cell.failed_sym;

      if (!ok_nonsym && !ok_sym) {
        ++cell.votes_zero;
      } else if (!ok_nonsym) {
        ++cell.votes_positive;
      } else if (!ok_sym) {
        ++cell.votes_negative;
      } else {
        const double d = err_nonsym - err_sym;
        if (d > kZeroDiffFloor) {
          ++cell.votes_positive;
        } else if (d < -kZeroDiffFloor) {
          ++cell.votes_negative;
        } else {
          ++cell.votes_zero;
        }
      }
    }

    cell.x = m.x();
    cell.y = m.y();
    cell.err_nonsym = sum_nonsym / realizations;
    cell.err_sym = sum_sym / realizations;
    const bool inf_nonsym = std::isinf(cell.err_nonsym);
    const bool inf_sym = std::isinf(cell.err_sym);
    if (inf_nonsym && inf_sym) {
      cell.diff = 0.0;  // both unusable: a tie, auditable via the failure counts
    } else {
      cell.diff = cell.err_nonsym - cell.err_sym;
    }
  });

  finalize_stats(report);
  return report;
}

void finalize_stats(GridReport& report) {
  long positive = 0;
  long negative = 0;
  long zero = 0;
  double mean_nonsym = 0.0;
  double mean_sym = 0.0;
  long ok_nonsym = 0;
  long ok_sym = 0;
  report.cells_failed_nonsym = 0;
  report.cells_failed_sym = 0;
  for (const auto& cell : report.cells) {
    positive += cell.votes_positive;
    negative += cell.votes_negative;
    zero += cell.votes_zero;
    if (cell.failed_nonsym == 0) {
      mean_nonsym += cell.err_nonsym;
      ++ok_nonsym;
    } else {
      ++report.cells_failed_nonsym;
    }
    if (cell.failed_sym == 0) {
      mean_sym += cell.err_sym;
      ++ok_sym;
    } else {
      ++report.cells_failed_sym;
    }
  }
  const double total = static_cast<double>(positive + negative + zero);
  report.pct_positive = total > 0.0 ? 100.0 * static_cast<double>(positive) / total : 0.0;
  report.pct_negative = total > 0.0 ? 100.0 * static_cast<double>(negative) / total : 0.0;
  report.pct_zero = total > 0.0 ? 100.0 * static_cast<double>(zero) / total : 0.0;
  report.mean_err_nonsym =
      ok_nonsym > 0 ? mean_nonsym / static_cast<double>(ok_nonsym) : std::nan("");
  report.mean_err_sym = ok_sym > 0 ? mean_sym / static_cast<double>(ok_sym) : std::nan("");
}

double condition_at(const Layout& layout, const Point& m, SolverVariant variant) {
  const auto ranges = true_ranges(layout, m);
  const auto truth = true_diffs(ranges);
  if (variant.kind == SolverVariant::Kind::kSymmetric) {
    return condition_number(build_sym_system(layout, truth));
  }
  return condition_number(
      build_nonsym_system(layout, std::span<const double>(ranges), variant.ref));
}

std::vector<ConditionCell> condition_map(const Layout& layout, const GridSpec& grid,
                                         SolverVariant variant, int threads) {
  require_valid(layout);
  validate(grid);
  if (layout.dim() != 2) {
    throw std::invalid_argument("condition_map: the grid benchmark is defined for 2-D layouts");
  }
  if (variant.kind == SolverVariant::Kind::kNonSymmetric &&
      (variant.ref < 0 || variant.ref >= layout.station_count())) {
    throw std::invalid_argument("condition_map: reference index out of range");
  }

  const auto points = grid_points(grid);
  std::vector<ConditionCell> cells(points.size());
  parallel_for(points.size(), threads, [&](std::size_t idx) {
    cells[idx].x = points[idx].x();
    cells[idx].y = points[idx].y();
    cells[idx].condition = condition_at(layout, points[idx], variant);
  });
  return cells;
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

Summary summarize(const GridReport& report) {
  if (report.cells.empty()) throw std::invalid_argument("summarize: empty report");

  Summary s;
  s.pct_positive = report.pct_positive;
  s.pct_negative = report.pct_negative;
  s.pct_zero = report.pct_zero;
  s.advantage_points = report.pct_positive - report.pct_negative;
  if (report.pct_negative > 0.0) {
    s.advantage_ratio_pct = 100.0 * (report.pct_positive - report.pct_negative) /
                            report.pct_negative;
  } else {
    s.advantage_ratio_pct = report.pct_positive > 0.0 ? kInf : 0.0;
  }
  s.mean_err_nonsym = report.mean_err_nonsym;
  s.mean_err_sym = report.mean_err_sym;

  std::vector<double> errs_nonsym;
  std::vector<double> errs_sym;
  errs_nonsym.reserve(report.cells.size());
  errs_sym.reserve(report.cells.size());
  for (const auto& cell : report.cells) {
    if (cell.failed_nonsym == 0) errs_nonsym.push_back(cell.err_nonsym);
    if (cell.failed_sym == 0) errs_sym.push_back(cell.err_sym);
  }
  s.median_err_nonsym = median_of(std::move(errs_nonsym));
  s.median_err_sym = median_of(std::move(errs_sym));
  s.cells_failed_nonsym = report.cells_failed_nonsym;
  s.cells_failed_sym = report.cells_failed_sym;
  return s;
}

void write_grid_csv(std::ostream& out, const GridReport& report) {
  out << "x,y,err_nonsym,err_sym,diff,failed_nonsym,failed_sym\n";
  for (const auto& cell : report.cells) {
    out << fmt9(cell.x) << "," << fmt9(cell.y) << "," << fmt9(cell.err_nonsym) << ","
        << fmt9(cell.err_sym) << "," << fmt9(cell.diff) << "," << cell.failed_nonsym << ","
        << cell.failed_sym << "\n";
  }
}

void write_condition_csv(std::ostream& out, std::span<const ConditionCell> cells) {
  out << "x,y,cond\n";
  for (const auto& cell : cells) {
    out << fmt9(cell.x) << "," << fmt9(cell.y) << "," << fmt9(cell.condition) << "\n";
  }
}

std::string summary_json(const GridReport& report, const Summary& summary) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["seed"] = report.seed;

  nlohmann::ordered_json config;
  config["dim"] = report.layout.dim();
  auto stations = nlohmann::ordered_json::array();
  for (const auto& st : report.layout.stations) {
    auto coords = nlohmann::ordered_json::array();
    for (int k = 0; k < st.dim(); ++k) coords.push_back(st[k]);
    stations.push_back(coords);
  }
  config["stations"] = stations;
  auto reference = nlohmann::ordered_json::array();
  for (int k = 0; k < report.layout.reference.dim(); ++k) {
    reference.push_back(report.layout.reference[k]);
  }
  config["reference"] = reference;
  config["grid"] = {{"x_min", report.grid.x_min}, {"x_max", report.grid.x_max},
                    {"y_min", report.grid.y_min}, {"y_max", report.grid.y_max},
                    {"step", report.grid.step}};
  config["sigma"] = report.sigma;
  config["realizations"] = report.realizations;
  config["mode"] = report.mode.label();
  j["config"] = config;

  j["cells"] = report.cells.size();
  j["comparisons"] = report.cells.size() * static_cast<std::size_t>(report.realizations);
  j["pct_positive"] = summary.pct_positive;
  j["pct_negative"] = summary.pct_negative;
  j["pct_zero"] = summary.pct_zero;
  j["advantage_points"] = summary.advantage_points;
  j["advantage_ratio_pct"] = summary.advantage_ratio_pct;
  j["mean_err_nonsym"] = summary.mean_err_nonsym;
  j["mean_err_sym"] = summary.mean_err_sym;
  j["median_err_nonsym"] = summary.median_err_nonsym;
  j["median_err_sym"] = summary.median_err_sym;
  j["cells_failed_nonsym"] = summary.cells_failed_nonsym;
  j["cells_failed_sym"] = summary.cells_failed_sym;
  return j.dump(2) + "\n";
}

}  // namespace rnl::bench
