#include "doctest.h"

#include <cmath>
#include <numbers>

#include "smsp/geometry.hpp"
#include "smsp/rng.hpp"

using namespace smsp;

namespace {

constexpr double kPi = std::numbers::pi;

BezierCurve<double> curve_from(std::initializer_list<std::pair<double, double>> pts) {
  BezierCurve<double>::Controls c(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index i = 0;
  for (const auto& [x, y] : pts) c.col(i++) = Point(x, y);
  return BezierCurve<double>(c);
}

BezierCut flat_cut(double theta = 0) {
  BezierCut cut;
  cut.frame = RotationFrame<double>(theta);
  cut.curve = curve_from({{-10, 0}, {10, 0}});
  return cut;
}

// Smallest circle through any pair or triple that covers every point.
double brute_force_radius(const PointSet& pts) {
  const Eigen::Index n = pts.cols();
  if (n == 1) return 0;
  double best = std::numeric_limits<double>::infinity();
  const auto covers = [&](const Circle<double>& c) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if ((pts.col(k) - c.center).norm() > c.radius * (1 + 1e-12) + 1e-12) return false;
    }
    return true;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto c2 = circle_from_pair<double>(pts.col(i), pts.col(j));
      if (c2.radius < best && covers(c2)) best = c2.radius;
      for (Eigen::Index k = j + 1; k < n; ++k) {
        const auto c3 = circle_from_triple<double>(pts.col(i), pts.col(j), pts.col(k));
        if (c3.radius < best && covers(c3)) best = c3.radius;
      }
    }
  }
  return best;
}

BezierCurve<double> random_monotone_curve(Rng& rng) {
  const int order = 1 + static_cast<int>(rng.index(3));
  BezierCurve<double>::Controls c(2, order + 1);
  std::vector<double> xs(static_cast<std::size_t>(order + 1));
  for (auto& x : xs) x = rng.uniform(-2, 2);
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i <= order; ++i) c.col(i) = Point(xs[static_cast<std::size_t>(i)], rng.uniform(-2, 2));
  return BezierCurve<double>(c);
}

}  // namespace

TEST_CASE("rotate examples") {
  const Point a = rotate<double>(Point(1, 0), RotationFrame<double>(0));
  CHECK(a.x() == doctest::Approx(1));
  CHECK(a.y() == doctest::Approx(0));

  const Point b = rotate<double>(Point(1, 0), RotationFrame<double>(kPi / 2));
  CHECK(std::abs(b.x()) < 1e-15);
  CHECK(b.y() == doctest::Approx(1));

  const Point c = rotate<double>(Point(0.3, -0.4), RotationFrame<double>(kPi));
  CHECK(c.x() == doctest::Approx(-0.3));
  CHECK(c.y() == doctest::Approx(0.4));
}

TEST_CASE("rotation round trip and norm preservation") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Point p(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const RotationFrame<double> f(rng.uniform(0, 2 * kPi));
    const Point q = rotate<double>(p, f);
    CHECK((inverse_rotate<double>(q, f) - p).norm() < 1e-12);
    CHECK(std::abs(q.norm() - p.norm()) < 1e-12);
  }
}

TEST_CASE("bezier_eval") {
  const auto line = curve_from({{0, 0}, {1, 1}});
  CHECK((bezier_eval(line, 0.5) - Point(0.5, 0.5)).norm() < 1e-15);

  const auto arch = curve_from({{0, 0}, {0.5, 1}, {1, 0}});
  CHECK((bezier_eval(arch, 0.5) - Point(0.5, 0.5)).norm() < 1e-15);

  const auto cubic = curve_from({{0, 1}, {0.2, 3}, {0.7, -2}, {1.5, 0.25}});
  CHECK(bezier_eval(cubic, 1.0) == cubic.back());
  CHECK(bezier_eval(cubic, 0.0) == cubic.front());
  CHECK_THROWS_AS(bezier_eval(cubic, 1.5), std::domain_error);
  CHECK_THROWS_AS(bezier_eval(cubic, -0.1), std::domain_error);
}

TEST_CASE("bezier order is limited to 1..3") {
  CHECK_THROWS_AS(BezierCurve<double>(BezierCurve<double>::Controls(2, 1)), std::invalid_argument);
  CHECK_NOTHROW(curve_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
}

TEST_CASE("bezier_y_at_x") {
  CHECK(bezier_y_at_x(curve_from({{0, 0}, {2, 2}}), 1.0) == doctest::Approx(1).epsilon(1e-9));
  CHECK(bezier_y_at_x(curve_from({{0, 0}, {0.5, 1}, {1, 0}}), 0.5) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(bezier_y_at_x(curve_from({{0, 0}, {1, 0}}), 5.0) == 0.0);
  CHECK(bezier_y_at_x(curve_from({{0, 3}, {1, -1}}), -5.0) == 3.0);
  CHECK_THROWS_AS(bezier_y_at_x(curve_from({{1, 0}, {0, 1}}), 0.5), InvalidCurve);
}

TEST_CASE("monotone inversion round trip") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const auto curve = random_monotone_curve(rng);
    const double s = rng.uniform();
    const Point p = bezier_eval(curve, s);
    CHECK(std::abs(bezier_y_at_x(curve, p.x()) - p.y()) < 1e-8);
  }
}

TEST_CASE("side_of_cut examples") {
  const BezierCut flat = flat_cut();
  CHECK(side_of_cut<double>(Point(0, 1), flat) == Side::kAbove);
  CHECK(side_of_cut<double>(Point(0, -1), flat) == Side::kBelow);
  CHECK(side_of_cut<double>(Point(0, 0), flat) == Side::kBelow);
  CHECK(side_of_cut<double>(Point(0, 5e-13), flat) == Side::kBelow);

  BezierCut arch;
  arch.curve = curve_from({{0, 0}, {0.5, 1}, {1, 0}});
  CHECK(side_of_cut<double>(Point(0.5, 0.6), arch) == Side::kAbove);
  CHECK(side_of_cut<double>(Point(0.5, 0.4), arch) == Side::kBelow);

  BezierCut shifted = flat;
  shifted.offset = 2;
  CHECK(side_of_cut<double>(Point(0, 1), shifted) == Side::kBelow);
  shifted.origin = Point(0, -3);
  CHECK(side_of_cut<double>(Point(0, 0), shifted) == Side::kAbove);
}

TEST_CASE("side_in_frame agrees with the bezier_y_at_x oracle") {
  Rng rng(13);
  int disagreements = 0;
  for (int i = 0; i < 2000; ++i) {
    BezierCut cut;
    cut.curve = random_monotone_curve(rng);
    cut.offset = rng.uniform(-1, 1);
    const Point q(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double h = q.y() - cut.offset - bezier_y_at_x(cut.curve, q.x());
    if (std::abs(h) < 1e-8) continue;
    const Side expected = h > 0 ? Side::kAbove : Side::kBelow;
    disagreements += side_in_frame<double>(q, cut) != expected;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("side_of_cut is rotation consistent") {
  Rng rng(14);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    BezierCut rotated;
    rotated.frame = RotationFrame<double>(rng.uniform(0, 2 * kPi));
    rotated.curve = random_monotone_curve(rng);
    rotated.offset = rng.uniform(-0.5, 0.5);
    BezierCut upright = rotated;
    upright.frame = RotationFrame<double>(0);

    const Point p(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Point q = rotate<double>(p, rotated.frame);
    const double h = q.y() - rotated.offset - bezier_y_at_x(rotated.curve, q.x());
    if (std::abs(h) < 1e-9) continue;
    mismatches += side_of_cut<double>(p, rotated) != side_of_cut<double>(q, upright);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("convex hull examples") {
  PointSet sq(2, 5);
  sq << 0, 1, 1, 0, 0.5, 0, 0, 1, 1, 0.5;
  const PointSet h = convex_hull(sq);
  CHECK(h.cols() == 4);
  for (Eigen::Index i = 0; i < h.cols(); ++i) CHECK((h.col(i) - Point(0.5, 0.5)).norm() > 0.5);

  PointSet tri(2, 3);
  tri << 0, 2, 1, 0, 0, 1;
  CHECK(convex_hull(tri).cols() == 3);

  PointSet two(2, 2);
  two << 0, 1, 0, 1;
  CHECK_THROWS_AS(convex_hull(two), DegenerateDomain);
  PointSet line(2, 4);
  line << 0, 1, 2, 3, 0, 1, 2, 3;
  CHECK_THROWS_AS(convex_hull(line), DegenerateDomain);
}

TEST_CASE("convex hull is counterclockwise and contains its input") {
  Rng rng(15);
  PointSet pts(2, 1000);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const double r = std::sqrt(rng.uniform());
    const double a = rng.uniform(0, 2 * kPi);
    pts.col(i) = Point(r * std::cos(a), r * std::sin(a));
  }
  const PointSet h = convex_hull(pts);
  for (Eigen::Index i = 0; i < h.cols(); ++i) {
    CHECK(h.col(i).norm() <= 1 + 1e-9);
    const Point a = h.col(i), b = h.col((i + 1) % h.cols()), c = h.col((i + 2) % h.cols());
    CHECK((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() > 0);
  }
  for (Eigen::Index i = 0; i < pts.cols(); ++i) CHECK(polygon_contains<double>(h, pts.col(i)));
  CHECK_FALSE(polygon_contains<double>(h, Point(1.1, 0)));
}

TEST_CASE("smallest enclosing circle examples") {
  PointSet one(2, 1);
  one << 0, 0;
  const auto c1 = smallest_enclosing_circle(one);
  CHECK(c1.radius == 0);
  CHECK(c1.center.norm() == 0);

  PointSet sq(2, 4);
  sq << 0, 1, 1, 0, 0, 0, 1, 1;
  const auto c4 = smallest_enclosing_circle(sq);
  CHECK(c4.radius == doctest::Approx(std::numbers::sqrt2 / 2).epsilon(1e-12));
  CHECK((c4.center - Point(0.5, 0.5)).norm() < 1e-12);

  CHECK_THROWS_AS(smallest_enclosing_circle(PointSet(2, 0)), std::invalid_argument);
}

TEST_CASE("smallest enclosing circle matches brute force on small sets") {
  Rng rng(16);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(12));
    PointSet pts(2, n);
    for (Eigen::Index i = 0; i < n; ++i) pts.col(i) = Point(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const auto c = smallest_enclosing_circle(pts);
    double reach = 0;
    for (Eigen::Index i = 0; i < n; ++i) reach = std::max(reach, (pts.col(i) - c.center).norm());
    failures += std::abs(c.radius - brute_force_radius(pts)) > 1e-9 || reach > c.radius + 1e-9;
  }
  CHECK(failures == 0);
}

TEST_CASE("smallest enclosing circle on 100 points is minimal") {
  Rng rng(17);
  PointSet pts(2, 100);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) pts.col(i) = Point(rng.uniform(-3, 1), rng.uniform(0, 2));
  const auto c = smallest_enclosing_circle(pts);
  double reach = 0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) reach = std::max(reach, (pts.col(i) - c.center).norm());
  CHECK(c.radius == doctest::Approx(reach).epsilon(1e-12));
  CHECK(c.radius == doctest::Approx(brute_force_radius(pts)).epsilon(1e-9));
}

TEST_CASE("collinear triple falls back to the diameter circle") {
  const auto c = circle_from_triple<double>(Point(0, 0), Point(1, 0), Point(3, 0));
  CHECK(c.radius == doctest::Approx(1.5));
  CHECK((c.center - Point(1.5, 0)).norm() < 1e-12);
}
