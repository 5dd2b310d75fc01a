#pragma once

#include <span>
#include <vector>

#include "rnl/model.hpp"

namespace rnl {

// Temporal filter applied to the pairwise difference channels before position
// estimation. Which filter runs matters little; what matters is that it runs
// on the offset-free differences L_i - L_j.
struct FilterKind {
  enum class Kind { kPassthrough, kMovingAverage, kExponential, kSynthetic };

  Kind kind = Kind::kPassthrough;
  int window = 1;      // kMovingAverage, >= 1; truncated during warm-up
  double alpha = 1.0;  // kExponential, in (0, 1]; initialized at the first sample
  double sigma = 0.0;  // kSynthetic, >= 0

  static FilterKind passthrough();
  static FilterKind moving_average(int window);
  static FilterKind exponential(double alpha);
  // Memoryless stand-in for a converged filter: output = input plus
  // N(0, sigma^2) per unordered pair. Fed noise-free differences this is
  // exactly "truth plus filtering error".
  static FilterKind synthetic(double sigma);

  friend bool operator==(const FilterKind&, const FilterKind&) = default;
};

// Filters a chronological series of difference matrices. Each of the
// n(n-1)/2 upper-triangle channels is filtered independently over time, then
// mirrored, so antisymmetry is exact rather than trusted to numerics.
// Throws std::invalid_argument for an empty series or inconsistent sizes.
std::vector<DiffMatrix> filter_series(std::span<const DiffMatrix> series, const FilterKind& kind,
                                      Rng& rng);

}  // namespace rnl
