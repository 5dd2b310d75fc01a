#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rnl/model.hpp"
#include "rnl/simulate.hpp"

namespace rnl::testing {

// Regular hexagon of radius 10 m; the two-decimal station table rounds to
// (10, 0), (5, 8.66), ...
inline Layout hexagon_layout() {
  const double ys = 5.0 * std::sqrt(3.0);
  Layout layout;
  layout.stations = {Point(10.0, 0.0),  Point(5.0, ys),   Point(-5.0, ys),
                     Point(-10.0, 0.0), Point(-5.0, -ys), Point(5.0, -ys)};
  layout.reference = Point(0.0, 0.0);
  return layout;
}

// Station coordinates exactly as printed in the two-decimal table.
inline Layout table_layout() {
  Layout layout;
  layout.stations = {Point(10.0, 0.0),  Point(5.0, 8.66),   Point(-5.0, 8.66),
                     Point(-10.0, 0.0), Point(-5.0, -8.66), Point(5.0, -8.66)};
  layout.reference = Point(0.0, 0.0);
  return layout;
}

// Random station count for the given dimension, honouring n >= d + 2.
inline int random_station_count(Rng& rng, int d, int max_n = 8) {
  const int min_n = d + 2;
  return min_n + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n - min_n + 1));
}

// Stations on a jittered ring (2-D) or sphere (3-D): always well conditioned.
inline Layout random_ring_layout(Rng& rng, int n, int d) {
  if (n < d + 2) throw std::invalid_argument("random_ring_layout: n must be >= d + 2");
  std::uniform_real_distribution<double> radius(8.0, 15.0);
  std::uniform_real_distribution<double> jitter(-0.35, 0.35);
  std::normal_distribution<double> gauss(0.0, 1.0);

  while (true) {
    Layout layout;
    layout.reference = d == 2 ? Point(0.5, -0.3) : Point(0.5, -0.3, 0.2);
    for (int i = 0; i < n; ++i) {
      const double r = radius(rng);
      if (d == 2) {
        const double angle = 2.0 * std::numbers::pi * i / n + jitter(rng);
        layout.stations.emplace_back(r * std::cos(angle), r * std::sin(angle));
      } else {
        double gx = gauss(rng);
        double gy = gauss(rng);
        double gz = gauss(rng);
        const double norm = std::sqrt(gx * gx + gy * gy + gz * gz);
        if (norm < 1e-6) {
          gx = 1.0;
          gy = 0.0;
          gz = 0.0;
        }
        layout.stations.emplace_back(r * gx / norm, r * gy / norm, r * gz / norm);
      }
    }
    if (is_valid(layout)) return layout;
  }
}

// Random convex combination of the stations: inside the hull by construction.
inline Point hull_point(Rng& rng, const Layout& layout) {
  std::exponential_distribution<double> expo(1.0);
  const int n = layout.station_count();
  std::vector<double> weights(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& w : weights) {
    w = expo(rng);
    total += w;
  }
  double coords[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < layout.dim(); ++k) {
      coords[k] += weights[static_cast<std::size_t>(i)] / total * layout.stations[static_cast<std::size_t>(i)][k];
    }
  }
  return layout.dim() == 2 ? Point(coords[0], coords[1]) : Point(coords[0], coords[1], coords[2]);
}

inline EpochMeasurement noise_free_epoch(const Layout& layout, const Point& m, double offset) {
  Rng rng(0);
  return augment(pseudo_ranges(layout, m, offset, NoiseSpec::none(), rng), layout);
}

inline double max_abs_delta(const DiffMatrix& m) {
  double result = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) result = std::max(result, std::abs(m.at(i, j)));
  }
  return result;
}

}  // namespace rnl::testing
