#pragma once

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <vector>

#include "smsp/cutgen.hpp"
#include "smsp/dataset.hpp"
#include "smsp/geometry.hpp"
#include "smsp/rng.hpp"

namespace smsp {

struct Constraint {
  int cut{0};
  Side side{Side::kBelow};

  bool operator==(const Constraint&) const = default;
};

/// A block of the partition, held extensionally: member data indices plus the
/// (cut, side) constraints leading to it from the root. Immutable once built;
/// particles share subsets through shared_ptr.
struct Subset {
  int id{0};
  std::vector<Constraint> path;
  std::vector<int> members;
  Eigen::VectorXi counts;
  Circle<double> cover;
  bool paused{false};
  bool cut_failed{false};

  double radius() const { return cover.radius; }
  bool pure() const { return (counts.array() > 0).count() <= 1; }
};

/// Builds a subset and its pause flag: pure, fewer than two members, or all
/// members coincident (zero radius) all pause.
Subset make_subset(const Dataset& data, int id, std::vector<Constraint> path, std::vector<int> members);

/// Tree node. Internal nodes carry a cut index and two children.
struct Node {
  std::shared_ptr<const Subset> subset;
  int cut{-1};
  int below{-1};
  int above{-1};

  bool is_leaf() const { return cut < 0; }
};

struct PartitionState {
  std::vector<BezierCut> cuts;
  std::vector<Node> nodes;
  /// Node ids of the current leaves.
  std::vector<int> leaves;
  double elapsed{0};
  bool terminal{false};
  int num_labels{2};

  const Subset& leaf(std::size_t i) const { return *nodes[static_cast<std::size_t>(leaves[i])].subset; }
  /// Node whose subset `cut` split.
  int node_of_cut(int cut) const;
};

PartitionState init_partition(const Dataset& data);

/// Sum of covering-circle radii over unpaused leaves.
double total_rate(const PartitionState& state);

struct Transition {
  enum class Kind { kSplit, kReachedBudget, kExtinct, kCutFailed };

  Kind kind{Kind::kExtinct};
  int node{-1};
  double waited{0};
  Eigen::VectorXi parent_counts;
  Eigen::VectorXi below_counts;
  Eigen::VectorXi above_counts;
};

/// One event of the process: exponential wait at the total rate, then a
/// radius-proportional leaf pick and a cut on it. Overshooting the budget
/// clamps elapsed to the budget.
Transition advance(PartitionState& state, const Dataset& data, double budget, const CutGenConfig& cfg, Rng& rng);

/// Advances until the budget or extinction, or until `max_cuts` cuts.
void run_to_budget(PartitionState& state, const Dataset& data, double budget, const CutGenConfig& cfg, Rng& rng,
                   int max_cuts = std::numeric_limits<int>::max());

/// Node id of the leaf containing p.
int route_point(const PartitionState& state, const Point& p);

bool satisfies(const PartitionState& state, const std::vector<Constraint>& path, const Point& p);

}  // namespace smsp
