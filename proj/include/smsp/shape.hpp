#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "smsp/dataset.hpp"
#include "smsp/partition.hpp"

namespace smsp {

struct BoundarySegment {
  std::vector<Point> polyline;
  int source_cut{0};
  bool interior{false};

  double length() const;
};

/// Samples every cut at `points_per_cut` parameter-uniform positions and
/// keeps the pieces lying inside `domain` (a counterclockwise polygon) and
/// inside the subset the cut split. Piece ends are refined to the clipping
/// boundary by bisection.
std::vector<BoundarySegment> discretize_cuts(const PartitionState& state, const PointSet& domain,
                                             int points_per_cut = 100);

/// Grid-bucketed fixed-radius neighbor search.
class RadiusIndex {
 public:
  RadiusIndex(const PointSet& points, double cell);

  /// Indices of points within `radius` of p, nearest first.
  std::vector<int> within(const Point& p, double radius) const;

 private:
  std::pair<long, long> cell_of(const Point& p) const;

  const PointSet* points_;
  double cell_;
  Point origin_;
  long nx_{1}, ny_{1};
  std::vector<std::vector<int>> buckets_;
};

/// Flags segments whose neighborhoods on both sides of their cut agree on a
/// single label. Each polyline vertex takes the `k` nearest data points within
/// `max_dist` on each side; it votes interior if both sides are nonempty,
/// unanimous, and share the label. Majority of votes decides the segment.
void mark_interior(std::vector<BoundarySegment>& segments, const PartitionState& state, const Dataset& data, int k,
                   double max_dist);

struct ShapeOptions {
  int points_per_cut{100};
  int knn{10};
  double max_dist{0};
  /// Budget the state was run to; defaults to the state's elapsed time.
  std::optional<double> budget;
};

struct ShapeResult {
  std::vector<BoundarySegment> segments;
  double perimeter{0};
  double budget_used{std::numeric_limits<double>::infinity()};
};

/// Discretize, drop interior segments, sum what is left. The domain is the
/// data's convex hull.
ShapeResult extract_shape(const PartitionState& state, const Dataset& data, const ShapeOptions& opts);

struct PerimeterReport {
  double raw{0};
  /// raw / budget; NaN for an unbounded budget.
  double normalized{0};
};

PerimeterReport perimeter(const ShapeResult& result);

}  // namespace smsp
