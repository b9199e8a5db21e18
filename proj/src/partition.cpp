#include "smsp/partition.hpp"

#include <stdexcept>

namespace smsp {

Subset make_subset(const Dataset& data, int id, std::vector<Constraint> path, std::vector<int> members) {
  Subset s;
  s.id = id;
  s.path = std::move(path);
  s.members = std::move(members);
  s.counts = Eigen::VectorXi::Zero(data.num_labels);
  for (int i : s.members) ++s.counts(data.label(i) - 1);
  if (!s.members.empty()) {
    PointSet pts(2, static_cast<Eigen::Index>(s.members.size()));
    for (std::size_t j = 0; j < s.members.size(); ++j) pts.col(static_cast<Eigen::Index>(j)) = data.points.col(s.members[j]);
    s.cover = smallest_enclosing_circle(pts);
  }
  s.paused = s.members.size() < 2 || s.pure() || s.cover.radius <= 0;
  return s;
}

int PartitionState::node_of_cut(int cut) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].cut == cut) return static_cast<int>(i);
  }
  throw std::out_of_range("no node for cut");
}

PartitionState init_partition(const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("init_partition: empty dataset");
  PartitionState state;
  state.num_labels = data.num_labels;
  std::vector<int> all(static_cast<std::size_t>(data.size()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  state.nodes.push_back({std::make_shared<const Subset>(make_subset(data, 0, {}, std::move(all)))});
  state.leaves.push_back(0);
  state.terminal = state.nodes[0].subset->paused;
  return state;
}

double total_rate(const PartitionState& state) {
  double rate = 0;
  for (int id : state.leaves) {
    const Subset& s = *state.nodes[static_cast<std::size_t>(id)].subset;
    if (!s.paused) rate += s.radius();
  }
  return rate;
}

Transition advance(PartitionState& state, const Dataset& data, double budget, const CutGenConfig& cfg, Rng& rng) {
  Transition tr;
  const double rate = total_rate(state);
  if (!(rate > 0)) {
    state.terminal = true;
    tr.kind = Transition::Kind::kExtinct;
    return tr;
  }
  tr.waited = rng.exponential(rate);
  if (state.elapsed + tr.waited > budget) {
    state.elapsed = budget;
    tr.kind = Transition::Kind::kReachedBudget;
    return tr;
  }
  state.elapsed += tr.waited;

  // Radius-proportional pick among unpaused leaves.
  const double target = rng.uniform() * rate;
  std::size_t pick = state.leaves.size();
  double acc = 0;
  for (std::size_t i = 0; i < state.leaves.size(); ++i) {
    const Subset& s = state.leaf(i);
    if (s.paused) continue;
    acc += s.radius();
    pick = i;
    if (target < acc) break;
  }
  const int node_id = state.leaves[pick];
  const auto parent = state.nodes[static_cast<std::size_t>(node_id)].subset;
  tr.node = node_id;
  tr.parent_counts = parent->counts;

  PointSet pts(2, static_cast<Eigen::Index>(parent->members.size()));
  for (std::size_t j = 0; j < parent->members.size(); ++j) {
    pts.col(static_cast<Eigen::Index>(j)) = data.points.col(parent->members[j]);
  }

  BezierCut cut;
  try {
    cut = sample_cut(pts, parent->cover, cfg, rng);
  } catch (const CutFailure&) {
    auto failed = std::make_shared<Subset>(*parent);
    failed->paused = true;
    failed->cut_failed = true;
    state.nodes[static_cast<std::size_t>(node_id)].subset = std::move(failed);
    tr.kind = Transition::Kind::kCutFailed;
    state.terminal = !(total_rate(state) > 0);
    return tr;
  }

  const int cut_id = static_cast<int>(state.cuts.size());
  state.cuts.push_back(cut);
  const std::vector<Side> sides = classify(cut, pts);
  std::vector<int> below, above;
  for (std::size_t j = 0; j < sides.size(); ++j) {
    (sides[j] == Side::kAbove ? above : below).push_back(parent->members[j]);
  }

  auto child_path = [&](Side side) {
    std::vector<Constraint> path = parent->path;
    path.push_back({cut_id, side});
    return path;
  };
  const int below_id = static_cast<int>(state.nodes.size());
  const int above_id = below_id + 1;
  auto below_subset = std::make_shared<const Subset>(make_subset(data, below_id, child_path(Side::kBelow), std::move(below)));
  auto above_subset = std::make_shared<const Subset>(make_subset(data, above_id, child_path(Side::kAbove), std::move(above)));
  tr.below_counts = below_subset->counts;
  tr.above_counts = above_subset->counts;

  Node& split = state.nodes[static_cast<std::size_t>(node_id)];
  split.cut = cut_id;
  split.below = below_id;
  split.above = above_id;
  state.nodes.push_back({std::move(below_subset)});
  state.nodes.push_back({std::move(above_subset)});
  state.leaves[pick] = below_id;
  state.leaves.push_back(above_id);

  tr.kind = Transition::Kind::kSplit;
  state.terminal = !(total_rate(state) > 0);
  return tr;
}

void run_to_budget(PartitionState& state, const Dataset& data, double budget, const CutGenConfig& cfg, Rng& rng,
                   int max_cuts) {
  int cuts = 0;
  while (cuts < max_cuts && state.elapsed < budget && !state.terminal) {
    const Transition tr = advance(state, data, budget, cfg, rng);
    if (tr.kind == Transition::Kind::kSplit) ++cuts;
  }
}

int route_point(const PartitionState& state, const Point& p) {
  int id = 0;
  while (!state.nodes[static_cast<std::size_t>(id)].is_leaf()) {
    const Node& n = state.nodes[static_cast<std::size_t>(id)];
    id = side_of_cut(p, state.cuts[static_cast<std::size_t>(n.cut)]) == Side::kAbove ? n.above : n.below;
  }
  return id;
}

bool satisfies(const PartitionState& state, const std::vector<Constraint>& path, const Point& p) {
  for (const Constraint& c : path) {
    if (side_of_cut(p, state.cuts[static_cast<std::size_t>(c.cut)]) != c.side) return false;
  }
  return true;
}

}  // namespace smsp
