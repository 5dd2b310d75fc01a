#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rnl/model.hpp"

namespace rnl {

// Additive Gaussian measurement noise. kPerRange corrupts every pseudo range
// draw; kPerFilteredDiff leaves the ranges exact and defers injection to the
// synthetic filter stage, which models filtering error rather than raw
// measurement noise.
struct NoiseSpec {
  enum class Target { kPerRange, kPerFilteredDiff };

  double sigma = 0.0;  // metres, >= 0
  Target target = Target::kPerRange;

  static NoiseSpec none() { return {}; }
  static NoiseSpec per_range(double sigma) { return {sigma, Target::kPerRange}; }
  static NoiseSpec per_filtered_diff(double sigma) { return {sigma, Target::kPerFilteredDiff}; }
};

// Per-epoch clock offset dynamics, in metres (time offset times speed of
// light). The rapidly_varying default spans +-1.5e5 m, about +-0.5 ms of
// clock error: large against the ranges, so nothing downstream may lean on
// offset smoothness.
struct OffsetProcess {
  enum class Kind { kConstant, kIidUniform, kRandomWalk };

  Kind kind = Kind::kConstant;
  double value = 0.0;       // kConstant
  double lo = 0.0;          // kIidUniform
  double hi = 0.0;          // kIidUniform
  double step_sigma = 0.0;  // kRandomWalk, >= 0; walk starts at 0

  static OffsetProcess constant(double value);
  static OffsetProcess iid_uniform(double lo, double hi);
  static OffsetProcess random_walk(double step_sigma);
  static OffsetProcess rapidly_varying() { return iid_uniform(-1.5e5, 1.5e5); }

  friend bool operator==(const OffsetProcess&, const OffsetProcess&) = default;
};

// Exact ranges ||M - B_i|| for every station.
std::vector<double> true_ranges(const Layout& layout, const Point& m);

// One epoch of pseudo ranges R_i = O + ||M - B_i|| - ||T - B_i|| (+ noise when
// the spec targets raw ranges), with truth recorded. Throws on invalid layout
// or dimension mismatch.
EpochMeasurement pseudo_ranges(const Layout& layout, const Point& m, double offset,
                               const NoiseSpec& noise, Rng& rng);

// Fills augmented[i] = pseudo[i] + ||T - B_i||. For noise-free epochs this
// reproduces O + ||M - B_i|| exactly.
EpochMeasurement augment(EpochMeasurement epoch, const Layout& layout);

// Raw pairwise differences delta(i,j) = L_i - L_j of one epoch; independent of
// the clock offset by construction.
DiffMatrix diff_matrix(const EpochMeasurement& epoch);

// One augmented epoch per trajectory point, offsets drawn from the process.
// Deterministic given the generator state.
std::vector<EpochMeasurement> gen_epoch_series(const Layout& layout,
                                               std::span<const Point> trajectory,
                                               const OffsetProcess& offsets,
                                               const NoiseSpec& noise, Rng& rng);

// CSV export/import: header epoch,station,pseudo,augmented plus
// truth_x,truth_y[,truth_z],truth_offset when every epoch carries truth.
// Values round-trip exactly.
void write_epoch_csv(std::ostream& out, std::span<const EpochMeasurement> series);
std::vector<EpochMeasurement> read_epoch_csv(std::istream& in);

}  // namespace rnl
