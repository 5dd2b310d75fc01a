#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "rnl/model.hpp"

using namespace rnl;
using rnl::testing::hexagon_layout;
using rnl::testing::table_layout;

namespace {

bool has_violation(const std::vector<LayoutViolation>& violations, const std::string& needle) {
  return std::any_of(violations.begin(), violations.end(), [&](const LayoutViolation& v) {
    return v.message.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("distance: axis-aligned, diametral and 3-4-5 cases") {
  CHECK(distance(Point(0, 0), Point(10, 0)) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(distance(Point(10, 0), Point(-10, 0)) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(distance(Point(3, 4), Point(0, 0)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(distance(Point(1, 2, 2), Point(0, 0, 0)) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("distance: dimension mismatch is an error") {
  CHECK_THROWS_AS(distance(Point(0, 0), Point(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("distance: metric properties on random triples") {
  Rng rng(42);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Point a(coord(rng), coord(rng));
    const Point b(coord(rng), coord(rng));
    const Point c(coord(rng), coord(rng));
    CHECK(distance(a, b) >= 0.0);
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
  }
}

TEST_CASE("validate_layout: hexagon table is ok") {
  CHECK(validate_layout(table_layout()).empty());
  CHECK(is_valid(hexagon_layout()));
}

TEST_CASE("validate_layout: too few stations") {
  Layout layout;
  layout.stations = {Point(10, 0), Point(-5, 8.66), Point(-5, -8.66)};
  layout.reference = Point(0, 0);
  const auto violations = validate_layout(layout);
  CHECK(has_violation(violations, "n >= 4"));
}

TEST_CASE("validate_layout: collinear stations are degenerate") {
  Layout layout;
  layout.stations = {Point(0, 0), Point(1, 0), Point(2, 0), Point(3, 0)};
  layout.reference = Point(0, 0);
  CHECK(has_violation(validate_layout(layout), "degenerate geometry"));
}

TEST_CASE("validate_layout: coplanar stations are degenerate in 3-D") {
  Layout layout;
  layout.stations = {Point(0, 0, 1), Point(1, 0, 1), Point(0, 1, 1), Point(1, 1, 1),
                     Point(2, 1, 1)};
  layout.reference = Point(0, 0, 0);
  CHECK(has_violation(validate_layout(layout), "degenerate geometry"));
}

TEST_CASE("validate_layout: coincident stations are reported with indices") {
  Layout layout = hexagon_layout();
  layout.stations[3] = layout.stations[1];
  const auto violations = validate_layout(layout);
  REQUIRE(has_violation(violations, "coincident"));
  for (const auto& v : violations) {
    if (v.message.find("coincident") != std::string::npos) {
      CHECK(v.stations == std::vector<int>{1, 3});
    }
  }
}

TEST_CASE("validate_layout: dimension mismatch reported") {
  Layout layout = hexagon_layout();
  layout.stations[2] = Point(1, 2, 3);
  CHECK(has_violation(validate_layout(layout), "dimension"));
}

TEST_CASE("require_valid throws with the violation list") {
  Layout layout;
  layout.stations = {Point(0, 0), Point(1, 0), Point(2, 0)};
  layout.reference = Point(0, 0);
  CHECK_THROWS_AS(require_valid(layout), std::invalid_argument);
}

TEST_CASE("Point::from infers dimension and rejects others") {
  const double two[] = {1.0, 2.0};
  const double three[] = {1.0, 2.0, 3.0};
  const double four[] = {1.0, 2.0, 3.0, 4.0};
  CHECK(Point::from(two).dim() == 2);
  CHECK(Point::from(three).dim() == 3);
  CHECK_THROWS_AS(Point::from(four), std::invalid_argument);
  CHECK_FALSE(Point(std::nan(""), 0.0).all_finite());
}

TEST_CASE("DiffMatrix: antisymmetry and zero diagonal by construction") {
  DiffMatrix m(4, DiffKind::kRaw);
  m.set_pair(0, 2, 1.5);
  m.set_pair(3, 1, -2.25);
  CHECK(m.at(0, 2) == 1.5);
  CHECK(m.at(2, 0) == -1.5);
  CHECK(m.at(3, 1) == -2.25);
  CHECK(m.at(1, 3) == 2.25);
  for (int i = 0; i < 4; ++i) CHECK(m.at(i, i) == 0.0);
  CHECK_THROWS_AS(m.set_pair(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.set_pair(0, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DiffMatrix(1, DiffKind::kRaw), std::invalid_argument);
}

TEST_CASE("DiffMatrix: raw matrices satisfy the cocycle identity") {
  Rng rng(7);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    EpochMeasurement epoch;
    const int n = 4 + static_cast<int>(rng() % 5);
    epoch.pseudo.resize(static_cast<std::size_t>(n));
    epoch.augmented.resize(static_cast<std::size_t>(n));
    for (auto& l : epoch.augmented) l = value(rng);
    const auto delta = diff_matrix(epoch);
    const double tol = 1e-12 * std::max(1.0, rnl::testing::max_abs_delta(delta));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          CHECK(std::abs(delta.at(i, j) - (delta.at(i, k) + delta.at(k, j))) <= tol);
        }
      }
    }
  }
}

TEST_CASE("SolverVariant labels use 1-based station numbers") {
  CHECK(SolverVariant::sym().label() == "sym");
  CHECK(SolverVariant::nonsym(0).label() == "nonsym(ref=1)");
  CHECK(SolverVariant::nonsym(5).label() == "nonsym(ref=6)");
}
