#include "smsp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smsp {

namespace {

double log_beta(const Eigen::VectorXd& x) {
  double s = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) s += std::lgamma(x(k));
  return s - std::lgamma(x.sum());
}

}  // namespace

double log_marginal_block(const Eigen::VectorXi& m, const Eigen::VectorXd& alpha) {
  if (m.size() != alpha.size()) throw std::invalid_argument("count/alpha length mismatch");
  if (m.sum() == 0) return 0.0;
  return log_beta(alpha + m.cast<double>()) - log_beta(alpha);
}

double log_likelihood(const PartitionState& state, const Eigen::VectorXd& alpha) {
  double total = 0;
  for (std::size_t i = 0; i < state.leaves.size(); ++i) total += log_marginal_block(state.leaf(i).counts, alpha);
  return total;
}

double weight_increment(const Eigen::VectorXi& parent, const Eigen::VectorXi& left, const Eigen::VectorXi& right,
                        const Eigen::VectorXd& alpha) {
  if (parent.size() != left.size() || parent.size() != right.size() || left + right != parent) {
    throw std::invalid_argument("weight_increment: child counts do not sum to parent counts");
  }
  return log_marginal_block(left, alpha) + log_marginal_block(right, alpha) - log_marginal_block(parent, alpha);
}

Eigen::VectorXd default_alpha(const Dataset& data) {
  const Eigen::VectorXi h = data.histogram();
  return h.cast<double>().cwiseMax(1.0) / 1000.0;
}

void SMCConfig::validate() const {
  if (n_particles < 1) throw std::invalid_argument("need at least one particle");
  if (!(ess_threshold > 0 && ess_threshold <= 1)) throw std::invalid_argument("ess threshold must lie in (0, 1]");
  if (n_workers < 1) throw std::invalid_argument("need at least one worker");
  if (!(budget >= 0)) throw std::invalid_argument("budget must be nonnegative");
}

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights) {
  const double top = log_weights.maxCoeff();
  Eigen::VectorXd w = (log_weights.array() - top).exp();
  return w / w.sum();
}

double effective_sample_size(const Eigen::VectorXd& weights) { return 1.0 / weights.squaredNorm(); }

std::vector<std::size_t> multinomial_resample(const Eigen::VectorXd& weights, Rng& rng) {
  const std::size_t m = static_cast<std::size_t>(weights.size());
  std::vector<double> cdf(m);
  double acc = 0;
  for (std::size_t i = 0; i < m; ++i) cdf[i] = (acc += weights(static_cast<Eigen::Index>(i)));
  std::vector<std::size_t> ancestors(m);
  for (auto& a : ancestors) {
    const double u = rng.uniform() * acc;
    a = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), m - 1);
  }
  return ancestors;
}

Eigen::VectorXd ParticleSet::weights() const {
  Eigen::VectorXd lw(static_cast<Eigen::Index>(particles.size()));
  for (std::size_t m = 0; m < particles.size(); ++m) lw(static_cast<Eigen::Index>(m)) = particles[m].log_weight;
  return normalize_log_weights(lw);
}

double ParticleSet::ess() const { return effective_sample_size(weights()); }

std::size_t ParticleSet::best() const {
  std::size_t best = 0;
  for (std::size_t m = 1; m < particles.size(); ++m) {
    if (particles[m].log_weight > particles[best].log_weight) best = m;
  }
  return best;
}

ParticleSet smc_fit(const Dataset& data, const SMCConfig& cfg, const CutGenConfig& cut_cfg,
                    const Eigen::VectorXd& alpha) {
  cfg.validate();
  cut_cfg.validate();
  data.validate();
  if (alpha.size() != data.num_labels || (alpha.array() <= 0).any()) {
    throw std::invalid_argument("alpha must have one positive entry per label");
  }

  ParticleSet set;
  set.alpha = alpha;
  set.num_labels = data.num_labels;
  set.budget = cfg.budget;

  const PartitionState root = init_partition(data);
  const std::size_t m_count = static_cast<std::size_t>(cfg.n_particles);
  set.particles.assign(m_count, Particle{root, 0.0, 0, root.terminal || cfg.budget <= 0 || cfg.max_cuts <= 0});

  constexpr std::uint64_t kResampleStream = 0xffffffffffffULL;
  for (int round = 0; round < cfg.max_rounds; ++round) {
    const bool active = std::any_of(set.particles.begin(), set.particles.end(), [](const Particle& p) { return !p.done; });
    if (!active) break;

    // Resample.
    const Eigen::VectorXd w = set.weights();
    if (effective_sample_size(w) < cfg.ess_threshold * static_cast<double>(m_count)) {
      Rng rng(derive_seed(cfg.seed, kResampleStream, static_cast<std::uint64_t>(round)));
      const auto ancestors = multinomial_resample(w, rng);
      std::vector<Particle> next;
      next.reserve(m_count);
      for (std::size_t a : ancestors) next.push_back(set.particles[a]);
      const double uniform = -std::log(static_cast<double>(m_count));
      for (auto& p : next) p.log_weight = uniform;
      set.particles = std::move(next);
      ++set.resamples;
    }

    // Propagate and weight.
    const auto n = static_cast<std::ptrdiff_t>(m_count);
#pragma omp parallel for num_threads(cfg.n_workers) schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      Particle& p = set.particles[static_cast<std::size_t>(i)];
      if (p.done) continue;
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(round)));
      const Transition tr = advance(p.state, data, cfg.budget, cut_cfg, rng);
      switch (tr.kind) {
        case Transition::Kind::kSplit:
          p.log_weight += weight_increment(tr.parent_counts, tr.below_counts, tr.above_counts, alpha);
          ++p.n_cuts;
          p.done = p.state.terminal || p.n_cuts >= cfg.max_cuts;
          break;
        case Transition::Kind::kCutFailed:
          p.done = p.state.terminal;
          break;
        case Transition::Kind::kReachedBudget:
        case Transition::Kind::kExtinct:
          p.done = true;
          break;
      }
    }
    ++set.rounds;

    // Normalize.
    const double top =
        std::max_element(set.particles.begin(), set.particles.end(), [](const Particle& a, const Particle& b) {
          return a.log_weight < b.log_weight;
        })->log_weight;
    double sum = 0;
    for (const auto& p : set.particles) sum += std::exp(p.log_weight - top);
    const double log_norm = top + std::log(sum);
    for (auto& p : set.particles) p.log_weight -= log_norm;
  }
  return set;
}

Eigen::VectorXd leaf_distribution(const Eigen::VectorXi& counts, const Eigen::VectorXd& alpha, PredictionRule rule) {
  const Eigen::VectorXd m = counts.cast<double>();
  if (rule == PredictionRule::kEmpirical && m.sum() > 0) return m / m.sum();
  return (alpha + m) / (alpha.sum() + m.sum());
}

namespace {

int argmax_lowest(const Eigen::VectorXd& p) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < p.size(); ++k) {
    if (p(k) > p(best)) best = k;
  }
  return static_cast<int>(best) + 1;
}

}  // namespace

Prediction predict(const ParticleSet& particles, const Point& query, PredictionRule rule) {
  if (particles.particles.empty()) throw std::invalid_argument("predict: empty particle set");
  const Eigen::VectorXd w = particles.weights();
  Prediction out;
  out.probabilities = Eigen::VectorXd::Zero(particles.num_labels);
  for (std::size_t m = 0; m < particles.particles.size(); ++m) {
    const double wm = w(static_cast<Eigen::Index>(m));
    if (wm == 0) continue;
    const PartitionState& s = particles.particles[m].state;
    const int leaf = route_point(s, query);
    out.probabilities += wm * leaf_distribution(s.nodes[static_cast<std::size_t>(leaf)].subset->counts, particles.alpha, rule);
  }
  out.label = argmax_lowest(out.probabilities);
  return out;
}

std::vector<int> predict_labels(const ParticleSet& particles, const PointSet& queries, PredictionRule rule) {
  if (particles.particles.empty()) throw std::invalid_argument("predict: empty particle set");
  const Eigen::VectorXd w = particles.weights();
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(particles.num_labels, queries.cols());
  for (std::size_t m = 0; m < particles.particles.size(); ++m) {
    const double wm = w(static_cast<Eigen::Index>(m));
    if (wm == 0) continue;
    const PartitionState& s = particles.particles[m].state;
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
      const int leaf = route_point(s, queries.col(q));
      probs.col(q) += wm * leaf_distribution(s.nodes[static_cast<std::size_t>(leaf)].subset->counts, particles.alpha, rule);
    }
  }
  std::vector<int> labels(static_cast<std::size_t>(queries.cols()));
  for (Eigen::Index q = 0; q < queries.cols(); ++q) labels[static_cast<std::size_t>(q)] = argmax_lowest(probs.col(q));
  return labels;
}

double accuracy(const ParticleSet& particles, const Dataset& data, PredictionRule rule) {
  if (data.empty()) return 0.0;
  const auto labels = predict_labels(particles, data.points, rule);
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) hits += labels[static_cast<std::size_t>(i)] == data.label(i);
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// Serialization

using nlohmann::json;

namespace {

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad number: " + s);
  }
  return j.get<double>();
}

const char* side_name(Side s) { return s == Side::kAbove ? "above" : "below"; }

Side side_from(const std::string& s) {
  if (s == "above") return Side::kAbove;
  if (s == "below") return Side::kBelow;
  throw std::invalid_argument("bad side: " + s);
}

}  // namespace

json cut_to_json(const BezierCut& cut) {
  json controls = json::array();
  for (Eigen::Index i = 0; i < cut.curve.controls.cols(); ++i) {
    controls.push_back({cut.curve.controls(0, i), cut.curve.controls(1, i)});
  }
  return {{"theta", cut.frame.theta()},
          {"order", cut.curve.order()},
          {"controls", controls},
          {"offset", cut.offset},
          {"origin", {cut.origin.x(), cut.origin.y()}}};
}

BezierCut cut_from_json(const json& j) {
  BezierCut cut;
  cut.frame = RotationFrame<double>(j.at("theta").get<double>());
  const auto& c = j.at("controls");
  BezierCurve<double>::Controls ctrl(2, static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    ctrl(0, static_cast<Eigen::Index>(i)) = c[i].at(0).get<double>();
    ctrl(1, static_cast<Eigen::Index>(i)) = c[i].at(1).get<double>();
  }
  cut.curve = BezierCurve<double>(ctrl);
  if (cut.curve.order() != j.at("order").get<int>()) throw std::invalid_argument("cut order/control count mismatch");
  if (!cut.curve.x_monotone()) throw InvalidCurve("cut controls are not x-monotone");
  cut.offset = j.at("offset").get<double>();
  if (j.contains("origin")) cut.origin = Point(j["origin"].at(0).get<double>(), j["origin"].at(1).get<double>());
  return cut;
}

json model_to_json(const ParticleSet& set) {
  const Eigen::VectorXd w = set.weights();
  json particles = json::array();
  for (std::size_t m = 0; m < set.particles.size(); ++m) {
    const Particle& p = set.particles[m];
    json cuts = json::array();
    for (const auto& c : p.state.cuts) cuts.push_back(cut_to_json(c));
    json nodes = json::array();
    for (std::size_t i = 0; i < p.state.nodes.size(); ++i) {
      const Node& n = p.state.nodes[i];
      const Subset& s = *n.subset;
      json path = json::array();
      for (const auto& c : s.path) path.push_back({c.cut, side_name(c.side)});
      json node = {{"id", i},
                   {"leaf", n.is_leaf()},
                   {"constraint_path", path},
                   {"counts", std::vector<int>(s.counts.data(), s.counts.data() + s.counts.size())},
                   {"radius", s.cover.radius},
                   {"center", {s.cover.center.x(), s.cover.center.y()}},
                   {"paused", s.paused},
                   {"cut_failed", s.cut_failed}};
      if (!n.is_leaf()) {
        node["cut"] = n.cut;
        node["below"] = n.below;
        node["above"] = n.above;
      }
      nodes.push_back(std::move(node));
    }
    particles.push_back({{"weight", w(static_cast<Eigen::Index>(m))},
                         {"log_weight", p.log_weight},
                         {"elapsed", number_or_inf(p.state.elapsed)},
                         {"n_cuts", p.n_cuts},
                         {"cuts", cuts},
                         {"nodes", nodes}});
  }
  return {{"format", "smsp-model/1"},
          {"num_labels", set.num_labels},
          {"alpha", std::vector<double>(set.alpha.data(), set.alpha.data() + set.alpha.size())},
          {"budget", number_or_inf(set.budget)},
          {"rounds", set.rounds},
          {"resamples", set.resamples},
          {"best_particle", set.best()},
          {"particles", particles}};
}

ParticleSet model_from_json(const json& j) {
  if (j.value("format", "") != "smsp-model/1") throw std::invalid_argument("not an smsp model document");
  ParticleSet set;
  set.num_labels = j.at("num_labels").get<int>();
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  set.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  set.budget = number_from(j.at("budget"));
  set.rounds = j.value("rounds", 0);
  set.resamples = j.value("resamples", 0);
  for (const auto& jp : j.at("particles")) {
    Particle p;
    p.log_weight = jp.at("log_weight").get<double>();
    p.n_cuts = jp.value("n_cuts", 0);
    p.done = true;
    p.state.num_labels = set.num_labels;
    p.state.elapsed = number_from(jp.at("elapsed"));
    for (const auto& jc : jp.at("cuts")) p.state.cuts.push_back(cut_from_json(jc));
    for (const auto& jn : jp.at("nodes")) {
      auto s = std::make_shared<Subset>();
      s->id = jn.at("id").get<int>();
      for (const auto& c : jn.at("constraint_path")) {
        s->path.push_back({c.at(0).get<int>(), side_from(c.at(1).get<std::string>())});
      }
      const auto counts = jn.at("counts").get<std::vector<int>>();
      s->counts = Eigen::Map<const Eigen::VectorXi>(counts.data(), static_cast<Eigen::Index>(counts.size()));
      s->cover.radius = jn.at("radius").get<double>();
      s->cover.center = Point(jn.at("center").at(0).get<double>(), jn.at("center").at(1).get<double>());
      s->paused = jn.at("paused").get<bool>();
      s->cut_failed = jn.value("cut_failed", false);
      Node node;
      node.subset = std::move(s);
      if (!jn.at("leaf").get<bool>()) {
        node.cut = jn.at("cut").get<int>();
        node.below = jn.at("below").get<int>();
        node.above = jn.at("above").get<int>();
      }
      p.state.nodes.push_back(std::move(node));
    }
    for (std::size_t i = 0; i < p.state.nodes.size(); ++i) {
      const Node& n = p.state.nodes[i];
      if (n.is_leaf()) {
        p.state.leaves.push_back(static_cast<int>(i));
      } else if (n.cut >= static_cast<int>(p.state.cuts.size()) || n.below >= static_cast<int>(p.state.nodes.size()) ||
                 n.above >= static_cast<int>(p.state.nodes.size())) {
        throw std::invalid_argument("model node references a missing cut or child");
      }
    }
    p.state.terminal = !(total_rate(p.state) > 0);
    set.particles.push_back(std::move(p));
  }
  if (set.particles.empty()) throw std::invalid_argument("model has no particles");
  return set;
}

}  // namespace smsp
