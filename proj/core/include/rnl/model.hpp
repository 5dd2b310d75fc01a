#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnl {

using Rng = std::mt19937_64;

// Thrown when a coefficient matrix is numerically rank deficient at the given
// geometry (singular value ratio below kRankTolerance).
class RankDeficientError : public std::runtime_error {
 public:
  explicit RankDeficientError(const std::string& what) : std::runtime_error(what) {}
};

// sigma_min/sigma_max below this and a system counts as unsolvable.
inline constexpr double kRankTolerance = 1e-12;

// A 2-D or 3-D coordinate in metres. Treat as write-once: fill on
// construction, share freely afterwards.
class Point {
 public:
  Point() = default;
  Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
  Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

  // Dimension comes from the span length, which must be 2 or 3.
  static Point from(std::span<const double> coords);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double x() const { return c_[0]; }
  double y() const { return c_[1]; }
  double z() const { return c_[2]; }

  bool all_finite() const;

  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  int dim_ = 2;
};

// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
double distance(const Point& p, const Point& q);

// Base station positions plus the reference transponder position. All points
// share one dimension; solvability additionally needs station_count >= dim + 2
// and non-degenerate station geometry (see validate_layout).
struct Layout {
  std::vector<Point> stations;
  Point reference;

  int dim() const { return reference.dim(); }
  int station_count() const { return static_cast<int>(stations.size()); }

  friend bool operator==(const Layout&, const Layout&) = default;
};

struct LayoutViolation {
  std::string message;
  std::vector<int> stations;  // offending station indices (0-based), empty if global
};

// Returns every violated layout invariant; an empty list means the layout is
// usable by both solvers. Violations are data, not failures.
std::vector<LayoutViolation> validate_layout(const Layout& layout);
bool is_valid(const Layout& layout);
// Throws std::invalid_argument listing all violations.
void require_valid(const Layout& layout);

// One measurement epoch. pseudo[i] holds the pseudo range
// R_i = O + ||M - B_i|| - ||T - B_i|| and augmented[i] the augmented range
// L_i = R_i + ||T - B_i|| = O + ||M - B_i||, both in metres. Simulated epochs
// carry the generating truth.
struct EpochMeasurement {
  struct Truth {
    Point position;  // true transponder position M
    double offset;   // clock offset O, metres (time offset times c)
  };

  std::vector<double> pseudo;
  std::vector<double> augmented;
  std::optional<Truth> truth;

  int station_count() const { return static_cast<int>(pseudo.size()); }
};

enum class DiffKind { kRaw, kFiltered };

// Antisymmetric n x n matrix of pairwise differences delta(i,j) = L_i - L_j,
// either raw (one epoch) or filtered over time. Antisymmetry and the zero
// diagonal hold by construction: all writes go through set_pair, which mirrors
// the value with flipped sign.
class DiffMatrix {
 public:
  DiffMatrix(int n, DiffKind kind);

  int size() const { return n_; }
  DiffKind kind() const { return kind_; }

  double at(int i, int j) const { return delta_[idx(i, j)]; }

  // delta(i,j) = value, delta(j,i) = -value. i == j is rejected.
  void set_pair(int i, int j, double value);

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_ = 0;
  DiffKind kind_ = DiffKind::kRaw;
  std::vector<double> delta_;
};

struct SolverVariant {
  enum class Kind { kNonSymmetric, kSymmetric };

  Kind kind = Kind::kSymmetric;
  int ref = -1;  // reference station (0-based), kNonSymmetric only

  static SolverVariant nonsym(int ref) { return {Kind::kNonSymmetric, ref}; }
  static SolverVariant sym() { return {Kind::kSymmetric, -1}; }

  // "nonsym(ref=1)" with a 1-based station number, or "sym".
  std::string label() const;

  friend bool operator==(const SolverVariant&, const SolverVariant&) = default;
};

// Result of a least squares solve. nuisance is the offset-like unknown: the
// clock offset estimate for the non-symmetric system, and W = O - S/n for the
// symmetric one (S = sum of augmented ranges; only that combination is
// observable from offset-free differences).
struct SolveResult {
  Point position;
  double nuisance = 0.0;
  double condition = 1.0;
  double residual = 0.0;
  SolverVariant variant;
};

}  // namespace rnl
