#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "smsp/errors.hpp"

namespace smsp {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Column-major 2xN point set; one column per point.
template <typename Scalar>
using PointSet2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using Point = Point2<double>;
using PointSet = PointSet2<double>;

/// Rotation of the coordinate system by `theta` radians. The sine and cosine
/// are computed once, so every rotation through a frame rounds identically.
template <typename Scalar>
class RotationFrame {
 public:
  RotationFrame() = default;
  explicit RotationFrame(Scalar theta) : theta_(theta), cos_(std::cos(theta)), sin_(std::sin(theta)) {}

  Scalar theta() const { return theta_; }
  Scalar cos() const { return cos_; }
  Scalar sin() const { return sin_; }

  Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> r;
    r << cos_, -sin_, sin_, cos_;
    return r;
  }

 private:
  Scalar theta_{0};
  Scalar cos_{1};
  Scalar sin_{0};
};

/// (x cos - y sin, x sin + y cos).
template <typename Scalar>
Point2<Scalar> rotate(const Point2<Scalar>& p, const RotationFrame<Scalar>& frame) {
  return {p.x() * frame.cos() - p.y() * frame.sin(), p.x() * frame.sin() + p.y() * frame.cos()};
}

template <typename Scalar>
Point2<Scalar> inverse_rotate(const Point2<Scalar>& p, const RotationFrame<Scalar>& frame) {
  return {p.x() * frame.cos() + p.y() * frame.sin(), -p.x() * frame.sin() + p.y() * frame.cos()};
}

/// Bezier curve of order 1..3 given by its control polygon (one column per
/// control point).
template <typename Scalar>
struct BezierCurve {
  using Controls = Eigen::Matrix<Scalar, 2, Eigen::Dynamic, Eigen::ColMajor, 2, 4>;

  Controls controls;

  BezierCurve() = default;
  explicit BezierCurve(Controls c) : controls(std::move(c)) {
    if (controls.cols() < 2 || controls.cols() > 4) {
      throw std::invalid_argument("Bezier order must be 1, 2 or 3");
    }
  }

  int order() const { return static_cast<int>(controls.cols()) - 1; }
  Point2<Scalar> front() const { return controls.col(0); }
  Point2<Scalar> back() const { return controls.col(controls.cols() - 1); }

  bool x_monotone() const {
    for (Eigen::Index i = 1; i < controls.cols(); ++i) {
      if (controls(0, i) < controls(0, i - 1)) return false;
    }
    return true;
  }
};

namespace detail {

template <typename Scalar>
std::array<Scalar, 4> bernstein(int order, Scalar s) {
  const Scalar u = Scalar(1) - s;
  switch (order) {
    case 1: return {u, s, 0, 0};
    case 2: return {u * u, 2 * u * s, s * s, 0};
    default: return {u * u * u, 3 * u * u * s, 3 * u * s * s, s * s * s};
  }
}

template <typename Scalar>
Scalar bezier_component(const BezierCurve<Scalar>& curve, int row, Scalar s) {
  const auto w = bernstein(curve.order(), s);
  Scalar v = 0;
  for (Eigen::Index i = 0; i < curve.controls.cols(); ++i) v += w[i] * curve.controls(row, i);
  return v;
}

}  // namespace detail

/// B(s) = sum_i P_i B_{n,i}(s), s in [0, 1].
template <typename Scalar>
Point2<Scalar> bezier_eval(const BezierCurve<Scalar>& curve, Scalar s) {
  if (!(s >= 0 && s <= 1)) throw std::domain_error("Bezier parameter outside [0, 1]");
  const auto w = detail::bernstein(curve.order(), s);
  Point2<Scalar> p = Point2<Scalar>::Zero();
  for (Eigen::Index i = 0; i < curve.controls.cols(); ++i) p += w[i] * curve.controls.col(i);
  return p;
}

/// Curve parameter whose x-component equals `x`, by bisection. Assumes a
/// monotone curve and x within [front.x, back.x].
template <typename Scalar>
Scalar bezier_parameter_at_x(const BezierCurve<Scalar>& curve, Scalar x, Scalar tol = Scalar(1e-10)) {
  Scalar lo = 0, hi = 1;
  while (hi - lo > tol) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (detail::bezier_component(curve, 0, mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Scalar(0.5) * (lo + hi);
}

/// Treats the curve as the graph of a function of x. Outside the control
/// x-range the endpoint heights are extended horizontally.
template <typename Scalar>
Scalar bezier_y_at_x(const BezierCurve<Scalar>& curve, Scalar x) {
  if (!curve.x_monotone()) throw InvalidCurve("control x-coordinates are not nondecreasing");
  const Eigen::Index last = curve.controls.cols() - 1;
  if (x <= curve.controls(0, 0)) return curve.controls(1, 0);
  if (x >= curve.controls(0, last)) return curve.controls(1, last);
  return detail::bezier_component(curve, 1, bezier_parameter_at_x(curve, x));
}

enum class Side { kBelow = 0, kAbove = 1 };

/// One cutting spline: points are translated by -origin, rotated by frame,
/// then compared against curve(x') + offset.
template <typename Scalar>
struct BezierCutT {
  RotationFrame<Scalar> frame;
  BezierCurve<Scalar> curve;
  Scalar offset{0};
  Point2<Scalar> origin{Point2<Scalar>::Zero()};
};

using BezierCut = BezierCutT<double>;

template <typename Scalar>
Point2<Scalar> to_cut_frame(const Point2<Scalar>& p, const BezierCutT<Scalar>& cut) {
  return rotate<Scalar>(p - cut.origin, cut.frame);
}

template <typename Scalar>
Point2<Scalar> from_cut_frame(const Point2<Scalar>& q, const BezierCutT<Scalar>& cut) {
  return inverse_rotate<Scalar>(q, cut.frame) + cut.origin;
}

/// Side of a point already expressed in the cut's rotated frame. Points
/// within 1e-12 of the curve count as below.
///
/// Bisects on the monotone x-component like bezier_y_at_x, but stops as soon
/// as the curve height over the remaining bracket (bounded through the
/// derivative's control polygon) cannot reach the point.
template <typename Scalar>
Side side_in_frame(const Point2<Scalar>& q, const BezierCutT<Scalar>& cut) {
  constexpr Scalar kTie = Scalar(1e-12);
  const auto& ctrl = cut.curve.controls;
  const Eigen::Index last = ctrl.cols() - 1;
  const Scalar h = q.y() - cut.offset;
  // Curve lies in the hull of its control points.
  if (h > ctrl.row(1).maxCoeff() + kTie) return Side::kAbove;
  if (h <= ctrl.row(1).minCoeff() - kTie) return Side::kBelow;
  if (!cut.curve.x_monotone()) throw InvalidCurve("control x-coordinates are not nondecreasing");

  Scalar g;
  if (q.x() <= ctrl(0, 0)) {
    g = ctrl(1, 0);
  } else if (q.x() >= ctrl(0, last)) {
    g = ctrl(1, last);
  } else {
    Scalar slope = 0;
    for (Eigen::Index i = 0; i < last; ++i) slope = std::max(slope, std::abs(ctrl(1, i + 1) - ctrl(1, i)));
    slope *= static_cast<Scalar>(last);
    Scalar lo = 0, hi = 1;
    while (hi - lo > Scalar(1e-10)) {
      const Scalar mid = Scalar(0.5) * (lo + hi);
      const Scalar reach = slope * (hi - lo) * Scalar(0.5);
      const Scalar y_mid = detail::bezier_component(cut.curve, 1, mid);
      if (h - y_mid > reach + kTie) return Side::kAbove;
      if (y_mid - h >= reach + kTie) return Side::kBelow;
      if (detail::bezier_component(cut.curve, 0, mid) < q.x()) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    g = detail::bezier_component(cut.curve, 1, Scalar(0.5) * (lo + hi));
  }
  return h - g > kTie ? Side::kAbove : Side::kBelow;
}

template <typename Scalar>
Side side_of_cut(const Point2<Scalar>& p, const BezierCutT<Scalar>& cut) {
  return side_in_frame(to_cut_frame(p, cut), cut);
}

template <typename Scalar>
struct Circle {
  Point2<Scalar> center{Point2<Scalar>::Zero()};
  Scalar radius{0};

  bool contains(const Point2<Scalar>& p, Scalar eps = Scalar(1e-12)) const {
    return (p - center).norm() <= radius + eps * std::max(Scalar(1), radius);
  }
};

template <typename Scalar>
Circle<Scalar> circle_from_pair(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return {Scalar(0.5) * (a + b), Scalar(0.5) * (a - b).norm()};
}

/// Circumscribed circle; for (near-)collinear triples falls back to the
/// diametral circle of the farthest pair.
template <typename Scalar>
Circle<Scalar> circle_from_triple(const Point2<Scalar>& a, const Point2<Scalar>& b,
                                  const Point2<Scalar>& c) {
  const Point2<Scalar> ab = b - a;
  const Point2<Scalar> ac = c - a;
  const Scalar d = 2 * (ab.x() * ac.y() - ab.y() * ac.x());
  const Scalar scale = std::max({ab.squaredNorm(), ac.squaredNorm(), (c - b).squaredNorm()});
  if (std::abs(d) <= Scalar(1e-14) * scale) {
    Circle<Scalar> best = circle_from_pair(a, b);
    for (const auto& cand : {circle_from_pair(a, c), circle_from_pair(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const Scalar ab2 = ab.squaredNorm();
  const Scalar ac2 = ac.squaredNorm();
  const Point2<Scalar> rel{(ac.y() * ab2 - ab.y() * ac2) / d, (ab.x() * ac2 - ac.x() * ab2) / d};
  return {a + rel, rel.norm()};
}

/// Minimal covering circle by the randomized incremental method. The
/// permutation is drawn from a fixed seed so the result is a pure function
/// of the input.
template <typename Scalar, typename Derived>
Circle<Scalar> smallest_enclosing_circle_impl(const Eigen::MatrixBase<Derived>& points) {
  const Eigen::Index n = points.cols();
  if (n == 0) throw std::invalid_argument("smallest_enclosing_circle: empty input");
  std::vector<Point2<Scalar>> p(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = points.col(i);
  std::mt19937_64 shuffle_rng(0x5eedc1c1eULL);
  std::shuffle(p.begin(), p.end(), shuffle_rng);

  Circle<Scalar> c{p[0], 0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (c.contains(p[i])) continue;
    c = {p[i], 0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(p[j])) continue;
      c = circle_from_pair(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (c.contains(p[k])) continue;
        c = circle_from_triple(p[i], p[j], p[k]);
      }
    }
  }
  // Absorb rounding so coverage holds exactly for the returned center.
  for (const auto& q : p) c.radius = std::max(c.radius, (q - c.center).norm());
  return c;
}

template <typename Derived>
Circle<typename Derived::Scalar> smallest_enclosing_circle(const Eigen::MatrixBase<Derived>& points) {
  return smallest_enclosing_circle_impl<typename Derived::Scalar>(points);
}

/// Counterclockwise hull vertices (monotone chain), collinear points dropped.
template <typename Derived>
PointSet2<typename Derived::Scalar> convex_hull(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  using P = Point2<Scalar>;
  const Eigen::Index n = points.cols();
  if (n < 3) throw DegenerateDomain("convex hull needs at least 3 points");
  std::vector<P> p(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = points.col(i);
  std::sort(p.begin(), p.end(), [](const P& a, const P& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());

  const auto cross = [](const P& o, const P& a, const P& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<P> hull(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  if (k > 0) --k;
  if (k < 3) throw DegenerateDomain("convex hull of collinear points");

  PointSet2<Scalar> out(2, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) out.col(static_cast<Eigen::Index>(i)) = hull[i];
  return out;
}

/// True when p lies inside or on the counterclockwise polygon `hull`.
template <typename Scalar>
bool polygon_contains(const PointSet2<Scalar>& hull, const Point2<Scalar>& p, Scalar tol = Scalar(1e-9)) {
  const Eigen::Index n = hull.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point2<Scalar> a = hull.col(i);
    const Point2<Scalar> b = hull.col((i + 1) % n);
    const Scalar cross = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
    if (cross < -tol * std::max(Scalar(1), (b - a).norm())) return false;
  }
  return true;
}

}  // namespace smsp
