#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "smsp/geometry.hpp"

namespace smsp {

/// One observation: a planar predictor with a label in 1..K.
struct LabeledPoint {
  Point v;
  int z{1};
};

/// Predictors stored column-wise with parallel 1-based labels.
struct Dataset {
  PointSet points{2, 0};
  std::vector<int> labels;
  int num_labels{2};

  Eigen::Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }

  Point point(Eigen::Index i) const { return points.col(i); }
  int label(Eigen::Index i) const { return labels[static_cast<std::size_t>(i)]; }

  void push_back(const LabeledPoint& lp) {
    const Eigen::Index n = points.cols();
    points.conservativeResize(Eigen::NoChange, n + 1);
    points.col(n) = lp.v;
    labels.push_back(lp.z);
  }

  /// Per-label counts, index k-1 for label k.
  Eigen::VectorXi histogram() const {
    Eigen::VectorXi h = Eigen::VectorXi::Zero(num_labels);
    for (int z : labels) ++h(z - 1);
    return h;
  }

  Dataset subset(const std::vector<int>& indices) const {
    Dataset out;
    out.num_labels = num_labels;
    out.points.resize(2, static_cast<Eigen::Index>(indices.size()));
    out.labels.reserve(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
      out.points.col(static_cast<Eigen::Index>(j)) = points.col(indices[j]);
      out.labels.push_back(labels[static_cast<std::size_t>(indices[j])]);
    }
    return out;
  }

  void validate() const {
    if (static_cast<std::size_t>(points.cols()) != labels.size()) {
      throw std::invalid_argument("dataset: point/label count mismatch");
    }
    if (!points.allFinite()) throw std::invalid_argument("dataset: non-finite coordinate");
    for (int z : labels) {
      if (z < 1 || z > num_labels) throw std::invalid_argument("dataset: label out of range");
    }
  }

  static Dataset from_points(const std::vector<LabeledPoint>& pts, int num_labels) {
    Dataset d;
    d.num_labels = num_labels;
    d.points.resize(2, static_cast<Eigen::Index>(pts.size()));
    d.labels.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d.points.col(static_cast<Eigen::Index>(i)) = pts[i].v;
      d.labels.push_back(pts[i].z);
    }
    return d;
  }
};

}  // namespace smsp
