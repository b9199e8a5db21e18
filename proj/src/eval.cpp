#include "smsp/eval.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace smsp {

MetricReport metrics(const ImageGrid& pred, const ImageGrid& truth) {
  if (pred.width != truth.width || pred.height != truth.height) {
    throw std::invalid_argument("metrics: image dimensions differ");
  }
  const Eigen::ArrayXd x = (pred.labels.array() == 1).cast<double>().reshaped();
  const Eigen::ArrayXd y = (truth.labels.array() == 1).cast<double>().reshaped();
  const double n = static_cast<double>(x.size());

  MetricReport r;
  r.mse = (x - y).square().mean();
  r.psnr = r.mse == 0 ? std::numeric_limits<double>::infinity() : 10 * std::log10(1 / r.mse);
  const double inter = (x * y).sum();
  const double uni = ((x + y) > 0).cast<double>().sum();
  r.jsc = uni == 0 ? 1.0 : inter / uni;
  r.pct_correct = 100.0 * (x == y).cast<double>().sum() / n;

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const double mx = x.mean();
  const double my = y.mean();
  const double vx = (x - mx).square().mean();
  const double vy = (y - my).square().mean();
  const double cov = ((x - mx) * (y - my)).mean();
  r.ssim = ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  return r;
}

MetricReport mean_report(const std::vector<MetricReport>& reports) {
  MetricReport m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.mse += r.mse;
    m.psnr += r.psnr;
    m.jsc += r.jsc;
    m.ssim += r.ssim;
    m.pct_correct += r.pct_correct;
  }
  const double k = static_cast<double>(reports.size());
  m.mse /= k;
  m.psnr /= k;
  m.jsc /= k;
  m.ssim /= k;
  m.pct_correct /= k;
  return m;
}

ChiSquareResult chi_square_equal(const std::vector<long>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi-square needs at least two cells");
  ChiSquareResult r;
  for (long c : counts) r.n += c;
  r.dof = static_cast<int>(counts.size()) - 1;
  if (r.n == 0) return r;
  const double expected = static_cast<double>(r.n) / static_cast<double>(counts.size());
  for (long c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

ChiSquareResult grid_uniformity_test(const PointSet& points, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  std::vector<long> counts(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid), 0);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double x = points(0, i);
    const double y = points(1, i);
    if (!(x >= 0 && x <= 1 && y >= 0 && y <= 1)) continue;
    const int cx = std::min(grid - 1, static_cast<int>(x * grid));
    const int cy = std::min(grid - 1, static_cast<int>(y * grid));
    ++counts[static_cast<std::size_t>(cy) * static_cast<std::size_t>(grid) + static_cast<std::size_t>(cx)];
  }
  return chi_square_equal(counts);
}

PointSet unit_square_boundary(int per_side) {
  PointSet pts(2, 4 * per_side);
  for (int i = 0; i < per_side; ++i) {
    const double u = static_cast<double>(i) / per_side;
    pts.col(i) = Point(u, 0);
    pts.col(per_side + i) = Point(1, u);
    pts.col(2 * per_side + i) = Point(1 - u, 1);
    pts.col(3 * per_side + i) = Point(0, 1 - u);
  }
  return pts;
}

PointSet uniformity_sample(const UniformityConfig& cfg, std::uint64_t replicate) {
  Rng rng(derive_seed(cfg.seed, replicate));
  PointSet out(2, cfg.n_curves);
  switch (cfg.arm) {
    case UniformityArm::kUniform:
      for (int i = 0; i < cfg.n_curves; ++i) out.col(i) = Point(rng.uniform(), rng.uniform());
      return out;
    case UniformityArm::kQuadrant:
      for (int i = 0; i < cfg.n_curves; ++i) out.col(i) = Point(0.5 * rng.uniform(), 0.5 * rng.uniform());
      return out;
    case UniformityArm::kCuts:
      break;
  }
  const PointSet square = unit_square_boundary(cfg.boundary_samples);
  const Circle<double> cover{Point(0.5, 0.5), std::numbers::sqrt2 / 2};
  for (int i = 0; i < cfg.n_curves; ++i) {
    const BezierCut cut = sample_cut(square, cover, cfg.cut_cfg, rng);
    Point q = bezier_eval(cut.curve, rng.uniform());
    q.y() += cut.offset;
    out.col(i) = from_cut_frame(q, cut);
  }
  return out;
}

UniformityResult uniformity_experiment(const UniformityConfig& cfg) {
  if (cfg.n_curves < 5 * cfg.grid * cfg.grid) {
    throw std::invalid_argument("uniformity_experiment: need at least 5 points per grid cell");
  }
  cfg.cut_cfg.validate();
  UniformityResult r;
  r.p_values.resize(static_cast<std::size_t>(cfg.n_replicates));
  r.points_kept.resize(static_cast<std::size_t>(cfg.n_replicates));
#pragma omp parallel for num_threads(cfg.n_workers) schedule(dynamic, 1)
  for (int k = 0; k < cfg.n_replicates; ++k) {
    const ChiSquareResult t = grid_uniformity_test(uniformity_sample(cfg, static_cast<std::uint64_t>(k)), cfg.grid);
    r.p_values[static_cast<std::size_t>(k)] = t.p_value;
    r.points_kept[static_cast<std::size_t>(k)] = t.n;
  }
  long above = 0;
  for (double p : r.p_values) above += p > 0.05;
  r.fraction_above = cfg.n_replicates > 0 ? static_cast<double>(above) / cfg.n_replicates : 0.0;
  return r;
}

std::vector<TimingRow> timing_report(const std::vector<int>& particle_counts, const std::vector<int>& worker_counts,
                                     const Dataset& data, int rounds, std::uint64_t seed, const CutGenConfig& cut_cfg) {
  const Eigen::VectorXd alpha = default_alpha(data);
  std::vector<TimingRow> rows;
  for (int m : particle_counts) {
    for (int w : worker_counts) {
      SMCConfig cfg;
      cfg.n_particles = m;
      cfg.n_workers = w;
      cfg.seed = seed;
      cfg.max_rounds = rounds;
      const auto start = std::chrono::steady_clock::now();
      const ParticleSet set = smc_fit(data, cfg, cut_cfg, alpha);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      rows.push_back({m, w, set.rounds, dt.count()});
    }
  }
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream ss;
  ss << "particles,workers,rounds,seconds\n";
  for (const auto& r : rows) ss << r.particles << ',' << r.workers << ',' << r.rounds << ',' << r.seconds << '\n';
  return ss.str();
}

}  // namespace smsp
