#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sobench/train.hpp"

namespace sobench::bench {

/// Data regime for the depth-vs-width experiment: train size 10000 (large)
/// or 1000 (small); both test on 10000 fresh points.
struct Regime {
  enum class Tag { large, small };
  Tag tag = Tag::large;
  std::int64_t train_size() const { return tag == Tag::large ? 10000 : 1000; }
  std::int64_t test_size() const { return 10000; }
};
const char* to_string(Regime::Tag t);

struct TrialReport {
  std::string architecture;  // "shallow" or "deep"
  Regime::Tag regime = Regime::Tag::large;
  std::uint64_t seed = 0;
  double test_mse = 0.0;
  double train_risk = 0.0;
  double wall_time_s = 0.0;
  int iters = 0;
  bool diverged = false;
};

/// Training protocol for the depth-vs-width table: plain minibatch SGD under
/// an epoch budget (the large regime takes 10x the steps per epoch), with an
/// epoch-indexed step decay. Narrow deep nets are step-hungry under plain
/// SGD, so the small regime leaves the deep net short of convergence while
/// the large regime lets it pass the shallow one.
struct Table2Config {
  std::uint64_t target_seed = 15;  // one target per table run
  int batch = 100;
  std::vector<double> phase_steps{0.3, 0.09, 0.027};
  std::vector<int> phase_epochs{2000, 500, 500};
};

struct Table2Cell {
  std::string architecture;
  Regime::Tag regime;
  double mean = 0.0;
  double std_dev = 0.0;
  int trials = 0;
  int diverged = 0;
};

struct Table2Result {
  std::vector<TrialReport> trials;
  std::vector<Table2Cell> cells;  // 2 architectures x 2 regimes
};

/// Trains shallow (depth 1, width 20) and deep (depth 4, width 10) ReLU nets
/// under the plain L2 loss in both regimes, one trial per seed, and
/// aggregates mean/std of the test MSE. Diverged trials are counted and
/// excluded from the aggregates.
Table2Result run_table2(const std::vector<std::uint64_t>& seeds, const Table2Config& config);

void write_trials_csv(const std::vector<TrialReport>& trials, const std::string& path);
void write_table2_csv(const std::vector<Table2Cell>& cells, const std::string& path);

// --- scaling sweeps -----------------------------------------------------

struct ScalingConfig {
  enum class Axis { M, W };
  Axis axis = Axis::M;
  std::vector<double> grid;      // >= 4 points spanning >= one decade
  std::int64_t fixed_m = 4096;   // train size when sweeping W
  int fixed_width = 16;          // architecture when sweeping M
  int fixed_depth = 2;
  int k = 0;
  std::uint64_t target_seed = 42;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int iters = 2000;
  double step = 1e-3;
};

struct ScalingPoint {
  double axis_value = 0.0;
  double mean_risk = 0.0;
  double std_dev = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // least-squares slope of log risk vs log axis
};

/// Sweeps the chosen axis, training per grid point per seed, and fits the
/// log-log slope of the mean test risk. Refuses grids with fewer than 4
/// points or spanning less than one decade.
ScalingResult run_scaling(const ScalingConfig& config);

void write_scaling_csv(const ScalingResult& r, const ScalingConfig& config,
                       const std::string& path);

}  // namespace sobench::bench
