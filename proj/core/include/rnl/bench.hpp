#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rnl/model.hpp"

namespace rnl::bench {

// Rectangular evaluation grid. Cells sit at min + k*step on each axis,
// inclusive of both ends.
struct GridSpec {
  double x_min = -30.0;
  double x_max = 30.0;
  double y_min = -30.0;
  double y_max = 30.0;
  double step = 1.0;

  int nx() const;
  int ny() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Throws std::invalid_argument unless min < max on both axes and step > 0.
void validate(const GridSpec& grid);

// Cell centres in output order: y outer, x inner (x varies fastest).
std::vector<Point> grid_points(const GridSpec& grid);

// How the non-symmetric solver picks its reference station.
struct RefMode {
  enum class Kind { kFixedRef, kBestRef };

  Kind kind = Kind::kFixedRef;
  int ref = 0;  // 0-based, kFixedRef only

  static RefMode fixed(int ref) { return {Kind::kFixedRef, ref}; }
  static RefMode best() { return {Kind::kBestRef, -1}; }

  std::string label() const;  // "fixed_ref(1)" with 1-based station, or "best_ref"

  friend bool operator==(const RefMode&, const RefMode&) = default;
};

// |diff| at or below this counts as a tie in the win percentages: exact
// recovery leaves only rounding dust in the errors, while real noise sits many
// orders of magnitude above it.
inline constexpr double kZeroDiffFloor = 1e-12;  // metres

// Per-cell outcome. Errors are means over realizations; a rank-deficient solve
// contributes +infinity, so a cell with any failed realization reports an
// infinite mean and the failure counts say how often. diff = err_nonsym -
// err_sym (positive: symmetric better); when both solvers failed the same
// realizations' comparison is a tie and diff is 0. The vote counts record the
// per-realization paired comparisons behind the win percentages: each
// realization is one error-difference sample, classified with the
// kZeroDiffFloor tie band (a realization where only one solver fails counts
// against that solver; both failing is a tie).
struct GridCell {
  double x = 0.0;
  double y = 0.0;
  double err_nonsym = 0.0;
  double err_sym = 0.0;
  double diff = 0.0;
  int failed_nonsym = 0;  // failed realizations
  int failed_sym = 0;
  int votes_positive = 0;  // realizations where the symmetric error was smaller
  int votes_negative = 0;
  int votes_zero = 0;
};

struct GridReport {
  std::vector<GridCell> cells;
  // Win percentages over all paired comparisons (cells x realizations);
  // positive means the symmetric solver had the smaller error. They always
  // sum to 100 up to rounding.
  double pct_positive = 0.0;
  double pct_negative = 0.0;
  double pct_zero = 0.0;
  double mean_err_nonsym = 0.0;  // over cells without failures for that solver
  double mean_err_sym = 0.0;
  long cells_failed_nonsym = 0;
  long cells_failed_sym = 0;

  // config echo
  Layout layout;
  GridSpec grid;
  double sigma = 0.0;
  int realizations = 0;
  RefMode mode;
  std::uint64_t seed = 0;
};

// Deterministic per-cell seed: a pure function of run seed and cell index, so
// the parallel schedule cannot influence any draw.
std::uint64_t cell_seed(std::uint64_t run_seed, std::size_t cell_index);

// Recomputes the aggregate fields (win percentages, means, failed-cell
// counts) from report.cells. grid_eval calls this; it is exposed so reports
// assembled or edited by other code stay consistent.
void finalize_stats(GridReport& report);

// Monte Carlo comparison of the two solvers over the grid. Per cell and
// realization: draw one N(0, sigma^2) filtering error per station, difference
// the perturbed ranges into a filtered matrix (per-channel linear filters
// preserve the difference structure, so the residual error lives on the
// stations), and feed that identical matrix to both solvers. The win
// percentages count the per-realization paired comparisons. In best_ref mode
// the reference follows the cell's geometry: it is selected once per cell
// from the noise-free differences, i.e. by the condition number the map
// reports there. Deterministic given (inputs, seed) regardless of thread
// count. threads <= 0 uses hardware concurrency.
GridReport grid_eval(const Layout& layout, const GridSpec& grid, double noise_sigma,
                     int realizations, RefMode mode, std::uint64_t seed, int threads = 0);

struct ConditionCell {
  double x = 0.0;
  double y = 0.0;
  double condition = 0.0;  // +infinity where the system is rank deficient
};

// Noise-free coefficient-matrix condition at every cell for the chosen
// variant. Rank-deficient cells carry the infinity sentinel.
std::vector<ConditionCell> condition_map(const Layout& layout, const GridSpec& grid,
                                         SolverVariant variant, int threads = 0);

// Condition of the noise-free system with the transponder at m; the value a
// condition map reports at that position.
double condition_at(const Layout& layout, const Point& m, SolverVariant variant);

struct Summary {
  double pct_positive = 0.0;
  double pct_negative = 0.0;
  double pct_zero = 0.0;
  double advantage_points = 0.0;     // pct_positive - pct_negative
  double advantage_ratio_pct = 0.0;  // 100 (pct_positive - pct_negative) / pct_negative
  double mean_err_nonsym = 0.0;
  double mean_err_sym = 0.0;
  double median_err_nonsym = 0.0;
  double median_err_sym = 0.0;
  long cells_failed_nonsym = 0;
  long cells_failed_sym = 0;
};

Summary summarize(const GridReport& report);

// CSV: x,y,err_nonsym,err_sym,diff,failed_nonsym,failed_sym; one row per cell
// in grid order; numbers at 9 significant digits; infinity as literal "inf".
void write_grid_csv(std::ostream& out, const GridReport& report);

// CSV: x,y,cond; infinity as literal "inf".
void write_condition_csv(std::ostream& out, std::span<const ConditionCell> cells);

// Summary JSON with config echo, seed and tool version. Key order and number
// formatting are stable, so equal runs produce equal bytes; thread count is
// execution detail and deliberately not echoed.
std::string summary_json(const GridReport& report, const Summary& summary);

}  // namespace rnl::bench
