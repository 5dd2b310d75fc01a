#include "rnl/filter.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace rnl {

FilterKind FilterKind::passthrough() { return {}; }

FilterKind FilterKind::moving_average(int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  FilterKind k;
  k.kind = Kind::kMovingAverage;
  k.window = window;
  return k;
}

FilterKind FilterKind::exponential(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("exponential: alpha must be in (0, 1]");
  }
  FilterKind k;
  k.kind = Kind::kExponential;
  k.alpha = alpha;
  return k;
}

FilterKind FilterKind::synthetic(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("synthetic: sigma must be finite and >= 0");
  }
  FilterKind k;
  k.kind = Kind::kSynthetic;
  k.sigma = sigma;
  return k;
}

std::vector<DiffMatrix> filter_series(std::span<const DiffMatrix> series, const FilterKind& kind,
                                      Rng& rng) {
  if (series.empty()) throw std::invalid_argument("filter_series: empty series");
  const int n = series[0].size();
  for (const auto& m : series) {
    if (m.size() != n) throw std::invalid_argument("filter_series: inconsistent matrix sizes");
  }

  std::vector<DiffMatrix> out;
  out.reserve(series.size());

  switch (kind.kind) {
    case FilterKind::Kind::kPassthrough: {
      for (const auto& m : series) {
        DiffMatrix f(n, DiffKind::kFiltered);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) f.set_pair(i, j, m.at(i, j));
        out.push_back(std::move(f));
      }
      break;
    }
    case FilterKind::Kind::kMovingAverage: {
      // One running window per channel; truncated mean while warming up.
      const std::size_t channels = static_cast<std::size_t>(n) * (n - 1) / 2;
      std::vector<std::deque<double>> window(channels);
      std::vector<double> sum(channels, 0.0);
      for (const auto& m : series) {
        DiffMatrix f(n, DiffKind::kFiltered);
        std::size_t c = 0;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j, ++c) {
            window[c].push_back(m.at(i, j));
            sum[c] += m.at(i, j);
            if (static_cast<int>(window[c].size()) > kind.window) {
              sum[c] -= window[c].front();
              window[c].pop_front();
            }
            f.set_pair(i, j, sum[c] / static_cast<double>(window[c].size()));
          }
        }
        out.push_back(std::move(f));
      }
      break;
    }
    case FilterKind::Kind::kExponential: {
      const std::size_t channels = static_cast<std::size_t>(n) * (n - 1) / 2;
      std::vector<double> state(channels, 0.0);
      bool first = true;
      for (const auto& m : series) {
        DiffMatrix f(n, DiffKind::kFiltered);
        std::size_t c = 0;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j, ++c) {
            state[c] = first ? m.at(i, j) : kind.alpha * m.at(i, j) + (1.0 - kind.alpha) * state[c];
            f.set_pair(i, j, state[c]);
          }
        }
        first = false;
        out.push_back(std::move(f));
      }
      break;
    }
    case FilterKind::Kind::kSynthetic: {
      std::normal_distribution<double> gauss(0.0, kind.sigma);
      for (const auto& m : series) {
        DiffMatrix f(n, DiffKind::kFiltered);
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            f.set_pair(i, j, m.at(i, j) + (kind.sigma > 0.0 ? gauss(rng) : 0.0));
          }
        }
        out.push_back(std::move(f));
      }
      break;
    }
  }
  return out;
}

}  // namespace rnl
