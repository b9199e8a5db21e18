#include "smsp/cutgen.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace smsp {

CutGenConfig CutGenConfig::fixed_order(int order) {
  CutGenConfig cfg;
  cfg.order_weights = {0, 0, 0};
  cfg.order_weights.at(static_cast<std::size_t>(order - 1)) = 1;
  return cfg;
}

void CutGenConfig::validate() const {
  double total = 0;
  for (double w : order_weights) {
    if (!(w >= 0)) throw std::invalid_argument("order weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1) > 1e-9) throw std::invalid_argument("order weights must sum to 1");
  if (max_rejections < 1) throw std::invalid_argument("max_rejections must be positive");
  if (box && !(box->a < box->b && box->c < box->d)) {
    throw std::invalid_argument("control box needs a < b and c < d");
  }
}

ControlBox CutGenConfig::box_for(double radius) const {
  if (box) return *box;
  return {-radius, radius, -radius, radius};
}

int sample_order(const std::array<double, 3>& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (int n = 0; n < 3; ++n) {
    acc += weights[static_cast<std::size_t>(n)];
    if (u < acc) return n + 1;
  }
  // u landed in rounding slack above the cumulative sum.
  for (int n = 2; n >= 0; --n) {
    if (weights[static_cast<std::size_t>(n)] > 0) return n + 1;
  }
  return 3;
}

BezierCurve<double> sample_control_points(int order, const ControlBox& box, Rng& rng) {
  if (order < 1 || order > 3) throw std::invalid_argument("order must be 1, 2 or 3");
  BezierCurve<double>::Controls ctrl(2, order + 1);
  std::array<double, 2> interior{};
  for (int k = 0; k < order - 1; ++k) interior[static_cast<std::size_t>(k)] = rng.uniform(box.a, box.b);
  std::sort(interior.begin(), interior.begin() + (order - 1));

  ctrl(0, 0) = box.a;
  for (int k = 1; k < order; ++k) ctrl(0, k) = interior[static_cast<std::size_t>(k - 1)];
  ctrl(0, order) = box.b;
  for (int j = 0; j <= order; ++j) ctrl(1, j) = rng.uniform(box.c, box.d);
  return BezierCurve<double>(ctrl);
}

std::pair<double, double> offset_bounds(const BezierCurve<double>& curve, double min_y, double max_y) {
  double g_min = std::numeric_limits<double>::infinity();
  double g_max = -g_min;
  for (int i = 0; i < kOffsetGrid; ++i) {
    const double s = static_cast<double>(i) / (kOffsetGrid - 1);
    const double y = detail::bezier_component(curve, 1, s);
    g_min = std::min(g_min, y);
    g_max = std::max(g_max, y);
  }
  return {min_y - g_max, max_y - g_min};
}

double sample_offset(const BezierCurve<double>& curve, double min_y, double max_y, Rng& rng) {
  const auto [l1, l2] = offset_bounds(curve, min_y, max_y);
  return rng.uniform(l1, l2);
}

std::vector<Side> classify(const BezierCut& cut, const PointSet& points) {
  std::vector<Side> sides(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    sides[static_cast<std::size_t>(i)] = side_of_cut<double>(points.col(i), cut);
  }
  return sides;
}

bool cut_separates(const BezierCut& cut, const PointSet& points) {
  bool above = false;
  bool below = false;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    if (side_of_cut<double>(points.col(i), cut) == Side::kAbove) {
      above = true;
    } else {
      below = true;
    }
    if (above && below) return true;
  }
  return false;
}

BezierCut sample_cut(const PointSet& points, const Circle<double>& cover, const CutGenConfig& cfg, Rng& rng) {
  const ControlBox box = cfg.box_for(cover.radius);
  const Eigen::Index n = points.cols();
  PointSet rotated(2, n);
  for (int attempt = 0; attempt < cfg.max_rejections; ++attempt) {
    BezierCut cut;
    cut.origin = cover.center;
    cut.frame = RotationFrame<double>(rng.uniform(0, 2 * std::numbers::pi));
    const int order = sample_order(cfg.order_weights, rng);
    cut.curve = sample_control_points(order, box, rng);

    for (Eigen::Index i = 0; i < n; ++i) rotated.col(i) = to_cut_frame<double>(points.col(i), cut);
    const double min_y = n > 0 ? rotated.row(1).minCoeff() : 0.0;
    const double max_y = n > 0 ? rotated.row(1).maxCoeff() : 0.0;
    cut.offset = sample_offset(cut.curve, min_y, max_y, rng);

    bool above = false;
    bool below = false;
    for (Eigen::Index i = 0; i < n && !(above && below); ++i) {
      if (side_in_frame<double>(rotated.col(i), cut) == Side::kAbove) {
        above = true;
      } else {
        below = true;
      }
    }
    if (above && below) return cut;
  }
  throw CutFailure("no separating cut after " + std::to_string(cfg.max_rejections) + " proposals");
}

BezierCut sample_cut(const PointSet& points, const CutGenConfig& cfg, Rng& rng) {
  return sample_cut(points, smallest_enclosing_circle(points), cfg, rng);
}

}  // namespace smsp
