#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <vector>

#include "smsp/cutgen.hpp"
#include "smsp/dataset.hpp"
#include "smsp/partition.hpp"

namespace smsp {

/// log B(alpha + m) - log B(alpha), with log B(x) = sum log G(x_k) - log G(sum x_k).
double log_marginal_block(const Eigen::VectorXi& m, const Eigen::VectorXd& alpha);

/// Sum of per-leaf log marginals.
double log_likelihood(const PartitionState& state, const Eigen::VectorXd& alpha);

/// Change in log-likelihood when `parent` is split into `left` and `right`.
double weight_increment(const Eigen::VectorXi& parent, const Eigen::VectorXi& left, const Eigen::VectorXi& right,
                        const Eigen::VectorXd& alpha);

/// alpha_k = n_k / 1000, floored at 1/1000 so unseen labels stay positive.
Eigen::VectorXd default_alpha(const Dataset& data);

struct SMCConfig {
  int n_particles{100};
  double budget{std::numeric_limits<double>::infinity()};
  double ess_threshold{0.5};
  int n_workers{1};
  std::uint64_t seed{0};
  /// Per-particle cut cap (the one-cut experiments use 1).
  int max_cuts{std::numeric_limits<int>::max()};
  /// Cap on SMC rounds; used by the timing harness.
  int max_rounds{std::numeric_limits<int>::max()};

  void validate() const;
};

struct Particle {
  PartitionState state;
  double log_weight{0};
  int n_cuts{0};
  bool done{false};
};

struct ParticleSet {
  std::vector<Particle> particles;
  Eigen::VectorXd alpha;
  int num_labels{2};
  double budget{std::numeric_limits<double>::infinity()};
  int rounds{0};
  int resamples{0};

  /// Normalized weights, summing to 1.
  Eigen::VectorXd weights() const;
  double ess() const;
  std::size_t best() const;
};

/// Resample-propagate-weight loop. Each (particle, round) draws from its own
/// derived stream so results do not depend on n_workers.
ParticleSet smc_fit(const Dataset& data, const SMCConfig& cfg, const CutGenConfig& cut_cfg,
                    const Eigen::VectorXd& alpha);

/// Normalized weights from log-weights.
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights);

double effective_sample_size(const Eigen::VectorXd& weights);

/// Multinomial ancestor indices.
std::vector<std::size_t> multinomial_resample(const Eigen::VectorXd& weights, Rng& rng);

enum class PredictionRule {
  /// Leaf label frequencies; Dirichlet mean only for empty leaves.
  kEmpirical,
  /// Dirichlet posterior mean (alpha_k + m_k) / (sum alpha + sum m).
  kDirichlet,
};

struct Prediction {
  int label{1};
  Eigen::VectorXd probabilities;
};

Eigen::VectorXd leaf_distribution(const Eigen::VectorXi& counts, const Eigen::VectorXd& alpha, PredictionRule rule);

Prediction predict(const ParticleSet& particles, const Point& query, PredictionRule rule = PredictionRule::kEmpirical);

std::vector<int> predict_labels(const ParticleSet& particles, const PointSet& queries,
                                PredictionRule rule = PredictionRule::kEmpirical);

/// Fraction of points whose predicted label matches (0..1).
double accuracy(const ParticleSet& particles, const Dataset& data, PredictionRule rule = PredictionRule::kEmpirical);

nlohmann::json cut_to_json(const BezierCut& cut);
BezierCut cut_from_json(const nlohmann::json& j);

/// Model dump: per particle its weight, cuts and tree nodes (leaves carry
/// their constraint path and counts). Member indices are not stored.
nlohmann::json model_to_json(const ParticleSet& particles);
ParticleSet model_from_json(const nlohmann::json& j);

}  // namespace smsp
