#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "smsp/geometry.hpp"
#include "smsp/rng.hpp"

namespace smsp {

/// Box [a, b] x [c, d] the control points are drawn from, in the rotated,
/// centered frame.
struct ControlBox {
  double a{-1}, b{1}, c{-1}, d{1};
};

struct CutGenConfig {
  /// Probabilities of curve orders 1, 2, 3.
  std::array<double, 3> order_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  int max_rejections{10000};
  /// Fixed box; when empty the box is [-r, r]^2 for the subset's covering
  /// circle radius r.
  std::optional<ControlBox> box;

  static CutGenConfig fixed_order(int order);
  void validate() const;
  ControlBox box_for(double radius) const;
};

/// Dense parameter grid used for curve extrema.
inline constexpr int kOffsetGrid = 256;

int sample_order(const std::array<double, 3>& weights, Rng& rng);

/// x_0 = a, x_n = b, interior x's are sorted Uniform(a, b) draws, every y is
/// Uniform(c, d).
BezierCurve<double> sample_control_points(int order, const ControlBox& box, Rng& rng);

/// (l1, l2) = (min y' - max g, max y' - min g), with g extrema over the grid.
std::pair<double, double> offset_bounds(const BezierCurve<double>& curve, double min_y, double max_y);

double sample_offset(const BezierCurve<double>& curve, double min_y, double max_y, Rng& rng);

/// Sides of every column of `points`, computed point by point through the
/// same path as side_of_cut.
std::vector<Side> classify(const BezierCut& cut, const PointSet& points);

bool cut_separates(const BezierCut& cut, const PointSet& points);

/// Rejection loop: rotate, draw order, controls and offset until the cut puts
/// points on both sides. Throws CutFailure after cfg.max_rejections tries.
BezierCut sample_cut(const PointSet& points, const Circle<double>& cover, const CutGenConfig& cfg, Rng& rng);

BezierCut sample_cut(const PointSet& points, const CutGenConfig& cfg, Rng& rng);

}  // namespace smsp
