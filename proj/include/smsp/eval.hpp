#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smsp/cutgen.hpp"
#include "smsp/data.hpp"
#include "smsp/inference.hpp"

namespace smsp {

struct MetricReport {
  double mse{0};
  double psnr{0};
  double jsc{0};
  double ssim{0};
  double pct_correct{0};
};

/// MSE and PSNR on {0,1} foreground indicators, Jaccard on foreground sets,
/// single-window SSIM (k1 = 0.01, k2 = 0.03, range 1), and percent agreement.
MetricReport metrics(const ImageGrid& pred, const ImageGrid& truth);

/// Mean of each measure over several image pairs.
MetricReport mean_report(const std::vector<MetricReport>& reports);

struct ChiSquareResult {
  double statistic{0};
  int dof{0};
  double p_value{1};
  long n{0};
};

/// Pearson goodness-of-fit against equal cell probabilities.
ChiSquareResult chi_square_equal(const std::vector<long>& counts);

/// g x g grid test of uniformity on [0, 1]^2; points outside are ignored.
ChiSquareResult grid_uniformity_test(const PointSet& points, int grid);

enum class UniformityArm {
  /// One parameter-uniform point per accepted cut on the unit square.
  kCuts,
  /// Points drawn directly from Uniform([0,1]^2) (calibration).
  kUniform,
  /// Points drawn from the lower-left quadrant only (power check).
  kQuadrant,
};

struct UniformityConfig {
  int n_curves{5000};
  int n_replicates{100};
  int grid{10};
  std::uint64_t seed{0};
  UniformityArm arm{UniformityArm::kCuts};
  CutGenConfig cut_cfg{};
  /// Points per side of the square used to test intersection.
  int boundary_samples{64};
  int n_workers{1};
};

struct UniformityResult {
  std::vector<double> p_values;
  std::vector<long> points_kept;
  double fraction_above{0};
};

/// Square-intersection test points: the boundary of [0,1]^2 sampled evenly.
PointSet unit_square_boundary(int per_side);

/// Samples for one replicate, before the inside-square filter.
PointSet uniformity_sample(const UniformityConfig& cfg, std::uint64_t replicate);

UniformityResult uniformity_experiment(const UniformityConfig& cfg);

struct TimingRow {
  int particles{0};
  int workers{0};
  int rounds{0};
  double seconds{0};
};

/// Wall time of a fixed number of SMC rounds for every (particles, workers)
/// cell.
std::vector<TimingRow> timing_report(const std::vector<int>& particle_counts, const std::vector<int>& worker_counts,
                                     const Dataset& data, int rounds, std::uint64_t seed,
                                     const CutGenConfig& cut_cfg = {});

std::string timing_csv(const std::vector<TimingRow>& rows);

}  // namespace smsp
