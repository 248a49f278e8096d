#include "sobench/harness.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sobench/autodiff.hpp"
#include "sobench/csv.hpp"
#include "sobench/rng.hpp"
#include "sobench/target2d.hpp"
#include "sobench/threads.hpp"

namespace sobench::bench {

const char* to_string(Regime::Tag t) { return t == Regime::Tag::large ? "large" : "small"; }

namespace {

std::vector<SobolevSample> draw_samples(const TargetFunction& target, std::int64_t count,
                                        std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(2, count);
  for (std::int64_t i = 0; i < count; ++i) {
    X(0, i) = rng.uniform01();
    X(1, i) = rng.uniform01();
  }
  const Eigen::VectorXd y = target.value_batch(X);
  std::vector<SobolevSample> out(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)].x = X.col(i);
    out[static_cast<std::size_t>(i)].value = y[i];
  }
  return out;
}

double test_mse(const MlpModel& m, const std::vector<SobolevSample>& test) {
  return empirical_risk(m, test, 0).value;
}

TrialReport run_one_trial(const TargetFunction& target, const std::string& arch,
                          const std::vector<int>& dims, Regime::Tag regime, std::uint64_t seed,
                          const Table2Config& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Regime r{regime};
  const auto train_set = draw_samples(target, r.train_size(), Rng::mix(seed, 0x11));
  const auto test_set = draw_samples(target, r.test_size(), Rng::mix(seed, 0x22));
  const int steps_per_epoch =
      std::max<int>(1, static_cast<int>(train_set.size()) / config.batch);

  TrialReport rep;
  rep.architecture = arch;
  rep.regime = regime;
  rep.seed = seed;

  MlpModel current = make_mlp(dims, ActivationKind::relu, Rng::mix(seed, 0x33));
  double train_risk = 0.0;
  for (std::size_t ph = 0; ph < config.phase_steps.size(); ++ph) {
    TrainConfig tc;
    tc.optimizer = Optimizer::sgd;
    tc.k = 0;
    tc.iters = config.phase_epochs[ph] * steps_per_epoch;
    tc.step = config.phase_steps[ph];
    tc.batch = config.batch;
    tc.seed = Rng::mix(seed, 0x44) + ph;
    const TrainResult res = train(current, train_set, tc);
    current = res.model;
    train_risk = res.final_risk;
    rep.iters += static_cast<int>(res.trace.size());
    if (res.diverged_at) {
      rep.diverged = true;
      break;
    }
  }

  rep.train_risk = train_risk;
  rep.test_mse = test_mse(current, test_set);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Table2Cell aggregate(const std::vector<TrialReport>& trials, const std::string& arch,
                     Regime::Tag regime) {
  Table2Cell cell;
  cell.architecture = arch;
  cell.regime = regime;
  std::vector<double> vals;
  for (const TrialReport& t : trials) {
    if (t.architecture != arch || t.regime != regime) continue;
    if (t.diverged) {
      ++cell.diverged;
      continue;
    }
    vals.push_back(t.test_mse);
  }
  cell.trials = static_cast<int>(vals.size());
  if (vals.empty()) return cell;
  // moments on value shifts so identical trials give exactly zero variance
  const double base = vals.front();
  double mean_d = 0.0;
  for (double v : vals) mean_d += v - base;
  mean_d /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals) var += (v - base - mean_d) * (v - base - mean_d);
  // population std over the seed set, matching an independent recomputation
  var /= static_cast<double>(vals.size());
  cell.mean = base + mean_d;
  cell.std_dev = std::sqrt(var);
  return cell;
}

}  // namespace

Table2Result run_table2(const std::vector<std::uint64_t>& seeds, const Table2Config& config) {
  if (seeds.size() < 3) throw std::invalid_argument("table2 needs at least 3 seeds");
  const TargetFunction target = make_target(config.target_seed);

  struct Job {
    std::string arch;
    std::vector<int> dims;
    Regime::Tag regime;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const Regime::Tag regime : {Regime::Tag::large, Regime::Tag::small})
    for (std::uint64_t seed : seeds) {
      jobs.push_back({"shallow", {2, 20, 1}, regime, seed});
      jobs.push_back({"deep", {2, 10, 10, 10, 10, 1}, regime, seed});
    }

  Table2Result result;
  result.trials.resize(jobs.size());
  // Trials are independent tasks; one chunk per trial keeps the report
  // order fixed regardless of the worker count.
  parallel_chunks(jobs.size(), 1, [&](std::size_t c, std::size_t b, std::size_t) {
    (void)c;
    const Job& j = jobs[b];
    result.trials[b] = run_one_trial(target, j.arch, j.dims, j.regime, j.seed, config);
  });

  for (const Regime::Tag regime : {Regime::Tag::large, Regime::Tag::small})
    for (const char* arch : {"shallow", "deep"})
      result.cells.push_back(aggregate(result.trials, arch, regime));
  return result;
}

void write_trials_csv(const std::vector<TrialReport>& trials, const std::string& path) {
  CsvWriter csv(path);
  csv.comment("one row per trial: architecture, data regime, seed, final test MSE, "
              "training risk of the returned model, wall time in seconds, iterations, diverged flag");
  csv.header({"architecture", "regime", "seed", "test_mse", "train_risk", "wall_time_s", "iters",
              "diverged"});
  for (const TrialReport& t : trials) {
    csv.begin_row();
    csv.field(t.architecture);
    csv.field(std::string(to_string(t.regime)));
    csv.field(static_cast<std::int64_t>(t.seed));
    csv.field(t.test_mse);
    csv.field(t.train_risk);
    csv.field(t.wall_time_s);
    csv.field(t.iters);
    csv.field(std::string(t.diverged ? "1" : "0"));
    csv.end_row();
  }
}

void write_table2_csv(const std::vector<Table2Cell>& cells, const std::string& path) {
  CsvWriter csv(path);
  csv.comment("aggregate test MSE per architecture x regime; std is over seeds; "
              "diverged trials are excluded and counted");
  csv.header({"architecture", "regime", "mean_test_mse", "std_test_mse", "trials", "diverged"});
  for (const Table2Cell& c : cells) {
    csv.begin_row();
    csv.field(c.architecture);
    csv.field(std::string(to_string(c.regime)));
    csv.field(c.mean);
    csv.field(c.std_dev);
    csv.field(c.trials);
    csv.field(c.diverged);
    csv.end_row();
  }
}

ScalingResult run_scaling(const ScalingConfig& config) {
  if (config.grid.size() < 4) throw std::invalid_argument("scaling grid needs at least 4 points");
  double lo = config.grid.front(), hi = config.grid.front();
  for (double g : config.grid) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (hi < 10.0 * lo)
    throw std::invalid_argument("scaling grid must span at least one decade");
  if (config.seeds.empty()) throw std::invalid_argument("scaling needs at least one seed");

  const TargetFunction target = make_target(config.target_seed);

  struct Job {
    std::size_t point;
    std::uint64_t seed;
    double axis_value;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < config.grid.size(); ++p)
    for (std::uint64_t s : config.seeds) jobs.push_back({p, s, config.grid[p]});

  std::vector<double> risks(jobs.size(), 0.0);
  parallel_chunks(jobs.size(), 1, [&](std::size_t c, std::size_t b, std::size_t) {
    (void)c;
    const Job& j = jobs[b];
    std::int64_t m = config.fixed_m;
    std::vector<int> dims{2, config.fixed_width, 1};
    if (config.axis == ScalingConfig::Axis::M) {
      m = static_cast<std::int64_t>(std::llround(j.axis_value));
      dims.assign(static_cast<std::size_t>(config.fixed_depth) + 2, config.fixed_width);
      dims.front() = 2;
      dims.back() = 1;
    } else {
      const int w = static_cast<int>(std::llround(j.axis_value));
      dims.assign(static_cast<std::size_t>(config.fixed_depth) + 2, w);
      dims.front() = 2;
      dims.back() = 1;
    }
    const auto train_set = draw_samples(target, m, Rng::mix(j.seed, 0x11));
    const auto test_set = draw_samples(target, 10000, Rng::mix(j.seed, 0x22));
    MlpModel init = make_mlp(dims, ActivationKind::relu, Rng::mix(j.seed, 0x33));
    TrainConfig tc;
    tc.k = config.k;
    tc.iters = config.iters;
    tc.step = config.step;
    tc.seed = Rng::mix(j.seed, 0x44);
    const TrainResult res = train(init, train_set, tc);
    risks[b] = empirical_risk(res.model, test_set, 0).value;
  });

  ScalingResult result;
  for (std::size_t p = 0; p < config.grid.size(); ++p) {
    std::vector<double> vals;
    for (std::size_t jb = 0; jb < jobs.size(); ++jb)
      if (jobs[jb].point == p) vals.push_back(risks[jb]);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size());
    result.points.push_back({config.grid[p], mean, std::sqrt(var)});
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ScalingPoint& pt : result.points) {
    const double x = std::log(pt.axis_value), y = std::log(std::max(pt.mean_risk, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(result.points.size());
  result.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return result;
}

void write_scaling_csv(const ScalingResult& r, const ScalingConfig& config,
                       const std::string& path) {
  CsvWriter csv(path);
  csv.comment(std::string("sweep axis: ") +
              (config.axis == ScalingConfig::Axis::M ? "M (train size)" : "W (width)") +
              "; mean/std of test risk over seeds; fitted log-log slope " +
              format_double(r.slope));
  csv.header({"axis_value", "mean_test_risk", "std_test_risk"});
  for (const ScalingPoint& pt : r.points) {
    csv.begin_row();
    csv.field(pt.axis_value);
    csv.field(pt.mean_risk);
    csv.field(pt.std_dev);
    csv.end_row();
  }
}

}  // namespace sobench::bench
