#include "rnl/solver.hpp"

#include <cmath>
#include <limits>

namespace rnl {

namespace {

double squared_norm(const Point& p) {
  double sum = 0.0;
  for (int k = 0; k < p.dim(); ++k) sum += p[k] * p[k];
  return sum;
}

std::vector<std::string> labels_for(int dim, const std::string& nuisance) {
  std::vector<std::string> labels{"x_M", "y_M"};
  if (dim == 3) labels.emplace_back("z_M");
  labels.push_back(nuisance);
  return labels;
}

void check_finite(const LinearSystem& sys) {
  if (!sys.a.allFinite() || !sys.b.allFinite()) {
    throw std::invalid_argument("linear system contains non-finite entries");
  }
  if (sys.rows() < sys.cols()) {
    throw std::invalid_argument("linear system is underdetermined");
  }
}

}  // namespace

std::vector<double> reconstruct_ranges_nonsym(double raw_l_ref, const DiffMatrix& filtered,
                                              int ref) {
  const int n = filtered.size();
  if (ref < 0 || ref >= n) {
    throw std::invalid_argument("reconstruct_ranges_nonsym: reference index out of range");
  }
  std::vector<double> l_hat(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // delta(ref, ref) = 0, so the reference entry is raw_l_ref itself.
    l_hat[static_cast<std::size_t>(i)] = raw_l_ref + filtered.at(i, ref);
  }
  return l_hat;
}

LinearSystem build_nonsym_system(const Layout& layout, std::span<const double> l_hat, int ref) {
  require_valid(layout);
  const int n = layout.station_count();
  const int d = layout.dim();
  if (static_cast<int>(l_hat.size()) != n) {
    throw std::invalid_argument("build_nonsym_system: range vector length does not match layout");
  }
  if (ref < 0 || ref >= n) {
    throw std::invalid_argument("build_nonsym_system: reference index out of range");
  }

  LinearSystem sys;
  sys.a.resize(n - 1, d + 1);
  sys.b.resize(n - 1);
  sys.unknown_labels = labels_for(d, "O");

  const Point& b_ref = layout.stations[static_cast<std::size_t>(ref)];
  const double b_ref_sq = squared_norm(b_ref);
  const double l_ref = l_hat[static_cast<std::size_t>(ref)];

  int row = 0;
  for (int i = 0; i < n; ++i) {
    if (i == ref) continue;
    const Point& b_i = layout.stations[static_cast<std::size_t>(i)];
    const double l_i = l_hat[static_cast<std::size_t>(i)];
    const double l_diff = l_i - l_ref;
    for (int k = 0; k < d; ++k) sys.a(row, k) = b_i[k] - b_ref[k];
    sys.a(row, d) = -l_diff;
    sys.b(row) = 0.5 * ((squared_norm(b_i) - b_ref_sq) - l_diff * (l_i + l_ref));
    ++row;
  }
  return sys;
}

double pair_sum_known_part(const DiffMatrix& filtered, int i, int j) {
  const int n = filtered.size();
  if (i == j) throw std::invalid_argument("pair_sum_known_part: i == j");
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::invalid_argument("pair_sum_known_part: index out of range");
  }
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    sum += filtered.at(i, k) + filtered.at(j, k);
  }
  return sum / (2.0 * static_cast<double>(n));
}

LinearSystem build_sym_system(const Layout& layout, const DiffMatrix& filtered) {
  require_valid(layout);
  const int n = layout.station_count();
  const int d = layout.dim();
  if (filtered.size() != n) {
    throw std::invalid_argument("build_sym_system: matrix size does not match layout");
  }

  LinearSystem sys;
  sys.a.resize(n * (n - 1) / 2, d + 1);
  sys.b.resize(sys.a.rows());
  sys.unknown_labels = labels_for(d, "W");

  int row = 0;
  for (int i = 0; i < n; ++i) {
    const Point& b_i = layout.stations[static_cast<std::size_t>(i)];
    const double b_i_sq = squared_norm(b_i);
    for (int j = i + 1; j < n; ++j) {
      const Point& b_j = layout.stations[static_cast<std::size_t>(j)];
      const double delta = filtered.at(i, j);
      for (int k = 0; k < d; ++k) sys.a(row, k) = b_i[k] - b_j[k];
      sys.a(row, d) = -delta;
      sys.b(row) = 0.5 * (b_i_sq - squared_norm(b_j)) - delta * pair_sum_known_part(filtered, i, j);
      ++row;
    }
  }
  return sys;
}

SolveResult solve_ls(const LinearSystem& sys, SolverVariant variant, LsMethod method) {
  check_finite(sys);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.a);
  const double sigma_max = svd.singularValues()(0);
  const double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  if (sigma_max <= 0.0 || sigma_min / sigma_max < kRankTolerance) {
    throw RankDeficientError("system is rank deficient at this geometry (" + variant.label() +
                             ", singular value ratio " +
                             std::to_string(sigma_max > 0.0 ? sigma_min / sigma_max : 0.0) + ")");
  }

  Eigen::VectorXd x;
  if (method == LsMethod::kQr) {
    x = sys.a.colPivHouseholderQr().solve(sys.b);
  } else {
    const Eigen::MatrixXd normal = sys.a.transpose() * sys.a;
    x = normal.inverse() * (sys.a.transpose() * sys.b);
  }

  const int d = sys.cols() - 1;
  SolveResult result;
  result.position = d == 2 ? Point(x(0), x(1)) : Point(x(0), x(1), x(2));
  result.nuisance = x(d);
  result.condition = sigma_max / sigma_min;
  result.residual = (sys.a * x - sys.b).norm();
  result.variant = variant;
  if (!result.position.all_finite() || !std::isfinite(result.nuisance)) {
    throw RankDeficientError("solve produced non-finite estimates (" + variant.label() + ")");
  }
  return result;
}

double condition_number(const LinearSystem& sys) {
  check_finite(sys);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.a);
  const double sigma_max = svd.singularValues()(0);
  const double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  // sigma_min that vanishes at working precision gets the sentinel, so the
  // map and the solver agree on what counts as unsolvable.
  if (sigma_max <= 0.0 || sigma_min / sigma_max < kRankTolerance) {
    return std::numeric_limits<double>::infinity();
  }
  return sigma_max / sigma_min;
}

int select_best_reference(const Layout& layout, const DiffMatrix& filtered) {
  const int n = layout.station_count();
  if (filtered.size() != n) {
    throw std::invalid_argument("select_best_reference: matrix size does not match layout");
  }
  int best = -1;
  double best_condition = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r) {
    // A does not depend on the raw reference measurement, only on the
    // differences, so a zero anchor gives the true condition number.
    const auto sys = build_nonsym_system(layout, reconstruct_ranges_nonsym(0.0, filtered, r), r);
    const double cond = condition_number(sys);
    if (std::isinf(cond)) continue;  // rank deficient candidate
    if (cond < best_condition) {
      best_condition = cond;
      best = r;
    }
  }
  if (best < 0) {
    throw RankDeficientError("select_best_reference: every candidate reference is rank deficient");
  }
  return best;
}

SolveResult solve_nonsym(const Layout& layout, double raw_l_ref, const DiffMatrix& filtered,
                         int ref, LsMethod method) {
  // Anchor the ranges at the reference measurement: reconstructing around 0
  // leaves just the delta column, and the shift moves wholesale into the
  // offset unknown.
  const auto anchored = reconstruct_ranges_nonsym(0.0, filtered, ref);
  auto result = solve_ls(build_nonsym_system(layout, anchored, ref),
                         SolverVariant::nonsym(ref), method);
  result.nuisance += raw_l_ref;
  return result;
}

SolveResult solve_sym(const Layout& layout, const DiffMatrix& filtered, LsMethod method) {
  return solve_ls(build_sym_system(layout, filtered), SolverVariant::sym(), method);
}

}  // namespace rnl
