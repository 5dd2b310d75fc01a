#include "rnl/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace rnl {

Point Point::from(std::span<const double> coords) {
  if (coords.size() == 2) return {coords[0], coords[1]};
  if (coords.size() == 3) return {coords[0], coords[1], coords[2]};
  throw std::invalid_argument("point dimension must be 2 or 3, got " +
                              std::to_string(coords.size()));
}

bool Point::all_finite() const {
  for (int i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[static_cast<std::size_t>(i)])) return false;
  }
  return true;
}

double distance(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) {
    throw std::invalid_argument("distance: dimension mismatch (" +
                                std::to_string(p.dim()) + " vs " + std::to_string(q.dim()) + ")");
  }
  double sum = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

constexpr double kMinStationSeparation = 1e-9;  // metres
constexpr double kMinGeometrySingularValue = 1e-9;

}  // namespace

std::vector<LayoutViolation> validate_layout(const Layout& layout) {
  std::vector<LayoutViolation> violations;
  const int n = layout.station_count();
  const int d = layout.reference.dim();

  if (!layout.reference.all_finite()) {
    violations.push_back({"reference position has non-finite coordinates", {}});
  }
  for (int i = 0; i < n; ++i) {
    if (!layout.stations[static_cast<std::size_t>(i)].all_finite()) {
      violations.push_back({"station has non-finite coordinates", {i}});
    }
  }

  std::vector<int> mismatched;
  for (int i = 0; i < n; ++i) {
    if (layout.stations[static_cast<std::size_t>(i)].dim() != d) mismatched.push_back(i);
  }
  if (!mismatched.empty()) {
    violations.push_back({"station dimension differs from reference dimension", mismatched});
    return violations;  // remaining checks assume one dimension
  }

  const int min_stations = d + 2;
  if (n < min_stations) {
    violations.push_back({"n >= " + std::to_string(min_stations) + " required for d = " +
                              std::to_string(d) + ", got " + std::to_string(n),
                          {}});
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (distance(layout.stations[static_cast<std::size_t>(i)],
                   layout.stations[static_cast<std::size_t>(j)]) <= kMinStationSeparation) {
        violations.push_back({"coincident stations", {i, j}});
      }
    }
  }

  // Degeneracy check: smallest singular value of the centered station matrix.
  // Collinear (d=2) or coplanar (d=3) stations cannot pin the position.
  if (n >= 2) {
    Eigen::MatrixXd centered(n, d);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) mean(k) += layout.stations[static_cast<std::size_t>(i)][k];
    }
    mean /= static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) {
        centered(i, k) = layout.stations[static_cast<std::size_t>(i)][k] - mean(k);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    if (svd.singularValues().minCoeff() <= kMinGeometrySingularValue) {
      violations.push_back({"degenerate geometry: stations are collinear/coplanar", {}});
    }
  }

  return violations;
}

bool is_valid(const Layout& layout) { return validate_layout(layout).empty(); }

void require_valid(const Layout& layout) {
  const auto violations = validate_layout(layout);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid layout:";
  for (const auto& v : violations) {
    msg << " [" << v.message;
    if (!v.stations.empty()) {
      msg << " (stations";
      for (int s : v.stations) msg << " " << s + 1;
      msg << ")";
    }
    msg << "]";
  }
  throw std::invalid_argument(msg.str());
}

DiffMatrix::DiffMatrix(int n, DiffKind kind)
    : n_(n), kind_(kind), delta_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {
  if (n < 2) throw std::invalid_argument("DiffMatrix needs at least 2 stations");
}

void DiffMatrix::set_pair(int i, int j, double value) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::invalid_argument("DiffMatrix::set_pair: index out of range");
  }
  if (i == j) throw std::invalid_argument("DiffMatrix::set_pair: diagonal is fixed at zero");
  delta_[idx(i, j)] = value;
  delta_[idx(j, i)] = -value;
}

std::string SolverVariant::label() const {
  if (kind == Kind::kSymmetric) return "sym";
  return "nonsym(ref=" + std::to_string(ref + 1) + ")";
}

}  // namespace rnl
