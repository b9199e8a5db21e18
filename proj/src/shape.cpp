#include "smsp/shape.hpp"

#include <algorithm>
#include <cmath>

namespace smsp {

double BoundarySegment::length() const {
  double len = 0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += (polyline[i] - polyline[i - 1]).norm();
  return len;
}

namespace {

Point curve_point(const BezierCut& cut, double s) {
  Point q = bezier_eval(cut.curve, s);
  q.y() += cut.offset;
  return from_cut_frame(q, cut);
}

void append_distinct(std::vector<Point>& line, const Point& p) {
  if (line.empty() || (line.back() - p).norm() > 0) line.push_back(p);
}

}  // namespace

std::vector<BoundarySegment> discretize_cuts(const PartitionState& state, const PointSet& domain, int points_per_cut) {
  if (points_per_cut < 2) throw std::invalid_argument("points_per_cut must be at least 2");
  std::vector<BoundarySegment> out;
  for (std::size_t n = 0; n < state.nodes.size(); ++n) {
    const Node& node = state.nodes[n];
    if (node.is_leaf()) continue;
    const BezierCut& cut = state.cuts[static_cast<std::size_t>(node.cut)];
    const auto& path = node.subset->path;
    const auto inside = [&](const Point& p) { return polygon_contains<double>(domain, p) && satisfies(state, path, p); };
    // Boundary crossing between parameters `in_s` (inside) and `out_s`.
    const auto crossing = [&](double in_s, double out_s) {
      for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (in_s + out_s);
        (inside(curve_point(cut, mid)) ? in_s : out_s) = mid;
      }
      return curve_point(cut, in_s);
    };

    const int count = points_per_cut;
    std::vector<double> s(static_cast<std::size_t>(count));
    std::vector<char> keep(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      s[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
      keep[static_cast<std::size_t>(i)] = inside(curve_point(cut, s[static_cast<std::size_t>(i)]));
    }

    BoundarySegment seg;
    seg.source_cut = node.cut;
    const auto flush = [&] {
      if (seg.polyline.size() >= 2) out.push_back(seg);
      seg.polyline.clear();
    };
    for (int i = 0; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (!keep[u]) continue;
      if (seg.polyline.empty() && i > 0) append_distinct(seg.polyline, crossing(s[u], s[u - 1]));
      append_distinct(seg.polyline, curve_point(cut, s[u]));
      if (i + 1 == count) {
        flush();
      } else if (!keep[u + 1]) {
        append_distinct(seg.polyline, crossing(s[u], s[u + 1]));
        flush();
      }
    }
  }
  return out;
}

RadiusIndex::RadiusIndex(const PointSet& points, double cell) : points_(&points), cell_(cell) {
  if (!(cell > 0)) throw std::invalid_argument("RadiusIndex: cell size must be positive");
  if (points.cols() == 0) {
    origin_ = Point::Zero();
    buckets_.resize(1);
    return;
  }
  origin_ = points.rowwise().minCoeff();
  const Point extent = points.rowwise().maxCoeff() - origin_;
  nx_ = static_cast<long>(std::floor(extent.x() / cell)) + 1;
  ny_ = static_cast<long>(std::floor(extent.y() / cell)) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const auto [cx, cy] = cell_of(points.col(i));
    buckets_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(static_cast<int>(i));
  }
}

std::pair<long, long> RadiusIndex::cell_of(const Point& p) const {
  const long cx = std::clamp(static_cast<long>(std::floor((p.x() - origin_.x()) / cell_)), 0L, nx_ - 1);
  const long cy = std::clamp(static_cast<long>(std::floor((p.y() - origin_.y()) / cell_)), 0L, ny_ - 1);
  return {cx, cy};
}

std::vector<int> RadiusIndex::within(const Point& p, double radius) const {
  std::vector<std::pair<double, int>> hits;
  const long reach = static_cast<long>(std::ceil(radius / cell_));
  const long px = static_cast<long>(std::floor((p.x() - origin_.x()) / cell_));
  const long py = static_cast<long>(std::floor((p.y() - origin_.y()) / cell_));
  const double limit = radius * (1 + 1e-9);
  for (long cy = std::max(0L, py - reach); cy <= std::min(ny_ - 1, py + reach); ++cy) {
    for (long cx = std::max(0L, px - reach); cx <= std::min(nx_ - 1, px + reach); ++cx) {
      for (int i : buckets_[static_cast<std::size_t>(cy * nx_ + cx)]) {
        const double d = (points_->col(i) - p).norm();
        if (d <= limit) hits.emplace_back(d, i);
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  return out;
}

void mark_interior(std::vector<BoundarySegment>& segments, const PartitionState& state, const Dataset& data, int k,
                   double max_dist) {
  if (k < 1) throw std::invalid_argument("mark_interior: k must be positive");
  if (!(max_dist > 0)) throw std::invalid_argument("mark_interior: max_dist must be positive");
  const RadiusIndex index(data.points, max_dist);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(segments.size()); ++si) {
    BoundarySegment& seg = segments[static_cast<std::size_t>(si)];
    const BezierCut& cut = state.cuts[static_cast<std::size_t>(seg.source_cut)];
    std::size_t votes = 0;
    for (const Point& v : seg.polyline) {
      int n_below = 0, n_above = 0;
      int label_below = 0, label_above = 0;
      bool mixed = false;
      for (int i : index.within(v, max_dist)) {
        const bool above = side_of_cut<double>(data.points.col(i), cut) == Side::kAbove;
        int& n = above ? n_above : n_below;
        int& label = above ? label_above : label_below;
        if (n >= k) continue;
        if (n == 0) {
          label = data.label(i);
        } else if (label != data.label(i)) {
          mixed = true;
        }
        ++n;
        if (mixed || (n_below >= k && n_above >= k)) break;
      }
      if (!mixed && n_below > 0 && n_above > 0 && label_below == label_above) ++votes;
    }
    seg.interior = 2 * votes > seg.polyline.size();
  }
}

ShapeResult extract_shape(const PartitionState& state, const Dataset& data, const ShapeOptions& opts) {
  ShapeResult result;
  result.budget_used = opts.budget.value_or(state.elapsed);
  if (state.cuts.empty()) return result;
  const PointSet domain = convex_hull(data.points);
  auto segments = discretize_cuts(state, domain, opts.points_per_cut);
  mark_interior(segments, state, data, opts.knn, opts.max_dist);
  for (auto& s : segments) {
    if (!s.interior) result.segments.push_back(std::move(s));
  }
  result.perimeter = perimeter(result).raw;
  return result;
}

PerimeterReport perimeter(const ShapeResult& result) {
  PerimeterReport r;
  for (const auto& s : result.segments) r.raw += s.length();
  r.normalized = std::isfinite(result.budget_used) && result.budget_used > 0
                     ? r.raw / result.budget_used
                     : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace smsp
