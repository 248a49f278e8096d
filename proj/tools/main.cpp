// sobench: Sobolev-training workbench command line.
//
// Subcommands: advise, bounds, curve, train, pde, table2, scaling.
// Exit codes: 0 ok, 2 invalid input, 3 I/O failure. Numerical divergence is
// recorded in the outputs and exits 0 with a warning count.

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sobench/autodiff.hpp"
#include "sobench/rng.hpp"
#include "sobench/bounds.hpp"
#include "sobench/csv.hpp"
#include "sobench/families.hpp"
#include "sobench/harness.hpp"
#include "sobench/pde.hpp"
#include "sobench/sobolev.hpp"
#include "sobench/target2d.hpp"
#include "sobench/threads.hpp"
#include "sobench/train.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "sobench 0.1.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- config file merge ----------------------------------------------------

// JSON config values fill in options the command line left untouched; flag
// overrides win, unknown keys are rejected.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw std::invalid_argument("config key '" + key + "' is not a flag of this subcommand");
    if (opt->count() > 0) continue;  // explicit flag wins
    opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
    opt->run_callback();
  }
}

// --- shared option plumbing -------------------------------------------------

struct CommonOpts {
  std::string out_dir = ".";
  std::string config_path;
  std::uint64_t seed = 1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out_dir, "Output directory for CSV/JSON results")
      ->capture_default_str();
  cmd->add_option("--config", c.config_path,
                  "JSON config file; explicit flags override file values");
  cmd->add_option("--seed", c.seed, "Global seed")->capture_default_str();
  cmd->add_option("--threads", c.threads,
                  "Worker threads (0 = available cores; env SOBOLEV_BENCH_THREADS)")
      ->capture_default_str();
}

void finish_common(const CommonOpts& c) {
  if (c.threads > 0) sobench::set_thread_count(c.threads);
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.out_dir);
}

void write_manifest(const CommonOpts& c, const std::string& subcommand, const json& config,
                    double wall_time_s, int warnings = 0) {
  json doc;
  doc["subcommand"] = subcommand;
  doc["config"] = config;
  doc["seed"] = c.seed;
  doc["versions"] = {{"sobench", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
  doc["wall_time_s"] = wall_time_s;
  doc["warnings"] = warnings;
  doc["timestamp"] = static_cast<std::int64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  std::ofstream out(fs::path(c.out_dir) / "manifest.json");
  if (!out) throw IoError("cannot write manifest.json");
  out << doc.dump(2) << "\n";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t comma = text.find(',', at);
    if (comma == std::string::npos) comma = text.size();
    seeds.push_back(std::stoull(text.substr(at, comma - at)));
    at = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

// Ranges: "lo:hi:log" doubles from lo to hi, "lo:hi:lin[:step]" steps
// linearly, and a bare comma list is taken verbatim.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') == std::string::npos) {
    std::size_t at = 0;
    while (at < text.size()) {
      std::size_t comma = text.find(',', at);
      if (comma == std::string::npos) comma = text.size();
      grid.push_back(std::stod(text.substr(at, comma - at)));
      at = comma + 1;
    }
    if (grid.empty()) throw std::invalid_argument("empty grid");
    return grid;
  }
  std::vector<std::string> parts;
  std::size_t at = 0;
  while (at <= text.size()) {
    std::size_t colon = text.find(':', at);
    if (colon == std::string::npos) colon = text.size();
    parts.push_back(text.substr(at, colon - at));
    at = colon + 1;
  }
  if (parts.size() < 3) throw std::invalid_argument("range must be lo:hi:log or lo:hi:lin[:step]");
  const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
  if (lo <= 0 || hi < lo) throw std::invalid_argument("range bounds must satisfy 0 < lo <= hi");
  if (parts[2] == "log") {
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 2.0) grid.push_back(v);
  } else if (parts[2] == "lin") {
    const double step = parts.size() > 3 ? std::stod(parts[3]) : 1.0;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v += step) grid.push_back(v);
  } else {
    throw std::invalid_argument("range kind must be log or lin");
  }
  return grid;
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- advise ---------------------------------------------------------------

struct AdviseOpts {
  CommonOpts common;
  double W = 0, M = 0, n = 0;
  int d = 0, k = 0;
  std::string constants_path;
  bool write_files = false;
};

int run_advise(const AdviseOpts& o) {
  namespace sb = sobench::bounds;
  const auto t0 = std::chrono::steady_clock::now();
  sb::BoundQuery q{o.W, o.M, o.n, o.d, o.k};
  sb::BoundConstants c;
  if (!o.constants_path.empty()) {
    std::ifstream in(o.constants_path);
    if (!in) throw IoError("cannot open constants file " + o.constants_path);
    json doc;
    in >> doc;
    c.C = doc.value("C", c.C);
    c.B = doc.value("B", c.B);
    c.F = doc.value("F", c.F);
    c.C1 = doc.value("C1", c.C1);
    c.C2 = doc.value("C2", c.C2);
    c.include_logs = doc.value("include_logs", c.include_logs);
  }
  sb::validate(q);
  const sb::RegionVerdict verdict = sb::recommend(q, c);
  sb::BoundConstants logs_on = c;
  logs_on.include_logs = true;
  const double denn = sb::denn_bound(q, logs_on);
  const double wenn = sb::wenn_bound(q, logs_on);
  const double cross = sb::crossover_M(q.W, q.n, q.d, q.k);

  std::printf("region: %s\n", sb::to_string(verdict.tag));
  std::printf("denn_bound: %.6g\n", denn);
  std::printf("wenn_bound: %.6g\n", wenn);
  std::printf("crossover_M: %.6g\n", cross);
  std::printf("margin (denn/wenn, logs off): %.6g\n", verdict.margin);

  json doc;
  doc["query"] = {{"W", q.W}, {"M", q.M}, {"n", q.n}, {"d", q.d}, {"k", q.k}};
  doc["verdict"] = sb::to_string(verdict.tag);
  doc["denn_bound"] = denn;
  doc["wenn_bound"] = wenn;
  doc["crossover_M"] = cross;
  doc["margin"] = verdict.margin;
  std::printf("%s\n", doc.dump().c_str());

  if (o.write_files) {
    finish_common(o.common);
    std::ofstream out(fs::path(o.common.out_dir) / "advise.json");
    if (!out) throw IoError("cannot write advise.json");
    out << doc.dump(2) << "\n";
    write_manifest(o.common, "advise", doc["query"], wall_since(t0));
  }
  return 0;
}

// --- bounds ---------------------------------------------------------------

struct BoundsOpts {
  CommonOpts common;
  double W = 100, M = 1e6, n = 3;
  int d = 2, k = 0;
  double N = 10, L = 10, M2 = 1e6;
  bool logs_off = false;
  bool write_files = false;
};

int run_bounds(const BoundsOpts& o) {
  namespace sb = sobench::bounds;
  const auto t0 = std::chrono::steady_clock::now();
  sb::BoundQuery q{o.W, o.M, o.n, o.d, o.k};
  sb::BoundConstants c;
  c.include_logs = !o.logs_off;
  sb::validate(q);

  json doc;
  doc["query"] = {{"W", q.W}, {"M", q.M}, {"n", q.n}, {"d", q.d}, {"k", q.k},
                  {"N", o.N},  {"L", o.L}, {"M2", o.M2}, {"include_logs", c.include_logs}};
  doc["denn_bound"] = sb::denn_bound(q, c);
  doc["wenn_bound"] = sb::wenn_bound(q, c);
  doc["rademacher_bound"] = sb::rademacher_bound(q, c);
  doc["general_fc_bound"] = sb::general_fc_bound(o.N, o.L, o.M, o.n, o.d, o.k, c);
  doc["approximation_rate"] = sb::approximation_rate(o.N, o.L, o.n, o.d, o.k, c);
  doc["optimal_rate"] = sb::optimal_rate(o.M, o.n, o.d, o.k);
  doc["optimal_width"] = sb::optimal_width(o.M, o.n, o.d);
  doc["crossover_M"] = sb::crossover_M(o.W, o.n, o.d, o.k);
  doc["pdim_bound_f0"] = sb::pdim_bound(sb::PdimClass::f0, o.N, o.L, c);
  doc["covering_bound"] = sb::covering_bound(1.0 / (80.0 * o.M), 100.0, o.M, 1.0);
  doc["covering_bound_uniform_params"] =
      sb::covering_bound_uniform_params(0.01, o.W, o.L, 1.0, sb::CoveringVariant::value, c);
  doc["sample_error_bound"] = sb::sample_error_bound(o.k, o.M, 1.0, o.d, 100.0, 100.0);
  if (o.n > 1)
    doc["pde_bound_ritz"] = sb::pde_bound(o.W, o.M, o.M2, o.n, o.d, sb::PdeVariant::ritz, c);
  if (o.n > 2)
    doc["pde_bound_pinn"] = sb::pde_bound(o.W, o.M, o.M2, o.n, o.d, sb::PdeVariant::pinn, c);
  std::printf("%s\n", doc.dump(2).c_str());

  if (o.write_files) {
    finish_common(o.common);
    std::ofstream out(fs::path(o.common.out_dir) / "bounds.json");
    if (!out) throw IoError("cannot write bounds.json");
    out << doc.dump(2) << "\n";
    write_manifest(o.common, "bounds", doc["query"], wall_since(t0));
  }
  return 0;
}

// --- curve ------------------------------------------------------------------

struct CurveOpts {
  CommonOpts common;
  int k = 0;
  double n = 3;
  int d = 2;
  std::string w_range = "4:4096:log";
};

int run_curve(const CurveOpts& o) {
  namespace sb = sobench::bounds;
  const auto t0 = std::chrono::steady_clock::now();
  if (!(o.n > o.k)) throw std::invalid_argument("curve needs n > k");
  finish_common(o.common);
  const std::vector<double> Ws = parse_grid(o.w_range);
  const auto pts = sb::fig1_curve(o.k, o.n, o.d, Ws);
  sobench::CsvWriter csv((fs::path(o.common.out_dir) / "curve.csv").string());
  csv.comment("crossover curve: sample count where the deeper-network bound order "
              "overtakes the wider one");
  csv.header({"k", "n", "d", "W", "M_crossover"});
  for (const auto& p : pts) {
    csv.begin_row();
    csv.field(o.k);
    csv.field(o.n);
    csv.field(o.d);
    csv.field(p.W);
    csv.field(p.M);
    csv.end_row();
  }
  json cfg{{"k", o.k}, {"n", o.n}, {"d", o.d}, {"W", o.w_range}};
  write_manifest(o.common, "curve", cfg, wall_since(t0));
  std::printf("curve.csv: %zu rows\n", pts.size());
  return 0;
}

// --- train --------------------------------------------------------------------

struct TrainOpts {
  CommonOpts common;
  std::string data_path;
  std::uint64_t target_seed = 42;
  std::int64_t train_size = 1000;
  int k = 0;
  int width = 16, depth = 2;
  std::string act = "relu";
  int iters = 2000, batch = 0;
  double step = 1e-3;
};

int run_train(const TrainOpts& o) {
  using namespace sobench;
  const auto t0 = std::chrono::steady_clock::now();
  finish_common(o.common);

  std::vector<SobolevSample> samples;
  if (!o.data_path.empty()) {
    samples = load_dataset(o.data_path);
  } else {
    const TargetFunction target = make_target(o.target_seed);
    samples = sample_target(target.as_field(), 2, std::min(o.k, 1), o.train_size,
                            Rng::mix(o.common.seed, 0x11));
    if (o.k == 2)
      throw std::invalid_argument("the builtin target has no Laplacian field; supply --data for k=2");
  }
  if (samples.empty()) throw std::invalid_argument("no training samples");
  const int d = static_cast<int>(samples.front().x.size());

  std::vector<int> dims{d};
  for (int i = 0; i < o.depth; ++i) dims.push_back(o.width);
  dims.push_back(1);
  MlpModel init = make_mlp(dims, activation_from_string(o.act), Rng::mix(o.common.seed, 0x33));

  TrainConfig tc;
  tc.k = o.k;
  tc.iters = o.iters;
  tc.step = o.step;
  tc.batch = o.batch;
  tc.seed = Rng::mix(o.common.seed, 0x44);
  const TrainResult res = train(init, samples, tc);

  CsvWriter trace((fs::path(o.common.out_dir) / "trace.csv").string());
  trace.header({"iter", "risk"});
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    trace.begin_row();
    trace.field(static_cast<std::int64_t>(i));
    trace.field(res.trace[i]);
    trace.end_row();
  }
  save_model(res.model, (fs::path(o.common.out_dir) / "model.json").string());

  json cfg{{"k", o.k},       {"width", o.width}, {"depth", o.depth}, {"act", o.act},
           {"iters", o.iters}, {"step", o.step},   {"batch", o.batch},
           {"data", o.data_path.empty() ? "builtin-target" : o.data_path},
           {"train_size", static_cast<std::int64_t>(samples.size())}};
  const int warnings = res.diverged_at ? 1 : 0;
  write_manifest(o.common, "train", cfg, wall_since(t0), warnings);
  std::printf("final empirical risk: %.6g (params %lld)\n", res.final_risk,
              static_cast<long long>(param_count(res.model)));
  if (res.diverged_at)
    std::printf("warning: training diverged at iteration %d; best-so-far model kept\n",
                *res.diverged_at);
  return 0;
}

// --- pde ------------------------------------------------------------------------

struct PdeOpts {
  CommonOpts common;
  std::string problem = "poisson_sin_dirichlet";
  std::string method = "pinn";
  std::int64_t m1 = 4096, m2 = 1024;
  int width = 24, depth = 2;
  int iters = 2000, batch = 0;
  double step = 1e-3, lambda = 100.0;
  bool ritz_half_norm = false;  // report the 1/(2 M1) interior normalization
};

int run_pde(const PdeOpts& o) {
  using namespace sobench;
  namespace sp = sobench::pde;
  const auto t0 = std::chrono::steady_clock::now();
  finish_common(o.common);

  sp::PdeProblem prob = sp::PdeProblem::by_name(o.problem);
  prob.lambda = o.lambda;
  sp::PdeMethod method;
  if (o.method == "pinn")
    method = sp::PdeMethod::pinn;
  else if (o.method == "ritz")
    method = sp::PdeMethod::ritz;
  else
    throw std::invalid_argument("method must be pinn or ritz");

  const ActivationKind act =
      method == sp::PdeMethod::pinn ? ActivationKind::relu_squared : ActivationKind::relu_squared;
  std::vector<int> dims{2};
  for (int i = 0; i < o.depth; ++i) dims.push_back(o.width);
  dims.push_back(1);
  MlpModel init = make_mlp(dims, act, Rng::mix(o.common.seed, 0x33));
  if (method == sp::PdeMethod::pinn && relu_only(init))
    std::fprintf(stderr, "warning: relu-only model has zero Laplacian a.e.\n");

  TrainConfig tc;
  tc.iters = o.iters;
  tc.step = o.step;
  tc.batch = o.batch;
  tc.seed = Rng::mix(o.common.seed, 0x44);
  sp::SamplePlan plan{o.m1, o.m2, Rng::mix(o.common.seed, 0x55)};
  const sp::PdeTrainResult res = sp::train_pde(init, prob, plan, method, tc);

  const QuadratureSpec quad = QuadratureSpec::default_for(2);
  const double l2 = prob.exact ? sp::solution_error(res.model, prob, sp::ErrorNorm::L2, quad) : -1.0;
  const double h1 = prob.exact ? sp::solution_error(res.model, prob, sp::ErrorNorm::H1, quad) : -1.0;
  double loss = res.final_loss;
  if (method == sp::PdeMethod::ritz && o.ritz_half_norm)
    loss = sp::ritz_empirical(res.model, prob, plan, true);

  CsvWriter csv((fs::path(o.common.out_dir) / "pde.csv").string());
  csv.comment("trial, interior/boundary sample counts, parameter count, final empirical "
              "loss, solution errors against the manufactured solution, wall time");
  csv.header({"trial", "M1", "M2", "W", "loss", "l2_err", "h1_err", "wall_time"});
  csv.begin_row();
  csv.field(0);
  csv.field(o.m1);
  csv.field(o.m2);
  csv.field(param_count(res.model));
  csv.field(loss);
  csv.field(l2);
  csv.field(h1);
  csv.field(wall_since(t0));
  csv.end_row();

  CsvWriter trace((fs::path(o.common.out_dir) / "trace.csv").string());
  trace.header({"iter", "risk"});
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    trace.begin_row();
    trace.field(static_cast<std::int64_t>(i));
    trace.field(res.trace[i]);
    trace.end_row();
  }
  save_model(res.model, (fs::path(o.common.out_dir) / "model.json").string());

  json cfg{{"problem", o.problem}, {"method", o.method}, {"M1", o.m1},       {"M2", o.m2},
           {"width", o.width},     {"depth", o.depth},   {"iters", o.iters}, {"step", o.step},
           {"lambda", o.lambda}};
  const int warnings = res.diverged_at ? 1 : 0;
  write_manifest(o.common, "pde", cfg, wall_since(t0), warnings);
  std::printf("loss %.6g, rel L2 err %.4g, wall %.1fs\n", res.final_loss,
              prob.exact ? l2 / 0.5 : -1.0, wall_since(t0));
  if (res.diverged_at)
    std::printf("warning: training diverged at iteration %d\n", *res.diverged_at);
  return 0;
}

// --- table2 -------------------------------------------------------------------

struct Table2Opts {
  CommonOpts common;
  std::string seeds = "1,2,3";
  std::uint64_t target_seed = 15;
  int batch = 100;
  std::string epochs = "2000,500,500";
  std::string steps = "0.3,0.09,0.027";
};

int run_table2(const Table2Opts& o) {
  namespace sb = sobench::bench;
  const auto t0 = std::chrono::steady_clock::now();
  finish_common(o.common);
  sb::Table2Config cfg;
  cfg.target_seed = o.target_seed;
  cfg.batch = o.batch;
  cfg.phase_epochs.clear();
  for (double e : parse_grid(o.epochs)) cfg.phase_epochs.push_back(static_cast<int>(e));
  cfg.phase_steps = parse_grid(o.steps);
  if (cfg.phase_epochs.size() != cfg.phase_steps.size())
    throw std::invalid_argument("--epochs and --steps must list the same number of phases");
  const sb::Table2Result res = sb::run_table2(parse_seed_list(o.seeds), cfg);
  sb::write_trials_csv(res.trials, (fs::path(o.common.out_dir) / "trials.csv").string());
  sb::write_table2_csv(res.cells, (fs::path(o.common.out_dir) / "table2.csv").string());

  std::printf("%-10s %-6s %-12s %-12s\n", "arch", "regime", "mean", "std");
  int diverged = 0;
  for (const auto& c : res.cells) {
    std::printf("%-10s %-6s %-12.4e %-12.4e\n", c.architecture.c_str(), to_string(c.regime),
                c.mean, c.std_dev);
    diverged += c.diverged;
  }
  json jcfg{{"seeds", o.seeds}, {"target_seed", o.target_seed}, {"batch", o.batch},
            {"epochs", o.epochs}, {"steps", o.steps}};
  write_manifest(o.common, "table2", jcfg, wall_since(t0), diverged);
  if (diverged > 0) std::printf("warnings: %d diverged trials excluded\n", diverged);
  return 0;
}

// --- scaling ----------------------------------------------------------------

struct ScalingOpts {
  CommonOpts common;
  std::string axis = "M";
  std::string grid = "1000:16000:log";
  std::string seeds = "1,2,3";
  int k = 0;
  int width = 16, depth = 2;
  std::int64_t fixed_m = 4096;
  std::uint64_t target_seed = 42;
  int iters = 2000;
  double step = 1e-3;
};

int run_scaling(const ScalingOpts& o) {
  namespace sb = sobench::bench;
  const auto t0 = std::chrono::steady_clock::now();
  finish_common(o.common);
  sb::ScalingConfig cfg;
  if (o.axis == "M")
    cfg.axis = sb::ScalingConfig::Axis::M;
  else if (o.axis == "W")
    cfg.axis = sb::ScalingConfig::Axis::W;
  else
    throw std::invalid_argument("axis must be M or W");
  cfg.grid = parse_grid(o.grid);
  cfg.seeds = parse_seed_list(o.seeds);
  cfg.k = o.k;
  cfg.fixed_width = o.width;
  cfg.fixed_depth = o.depth;
  cfg.fixed_m = o.fixed_m;
  cfg.target_seed = o.target_seed;
  cfg.iters = o.iters;
  cfg.step = o.step;
  const sb::ScalingResult res = sb::run_scaling(cfg);
  sb::write_scaling_csv(res, cfg, (fs::path(o.common.out_dir) / "scaling.csv").string());
  std::printf("fitted log-log slope: %.4f over %zu grid points\n", res.slope, res.points.size());
  json jcfg{{"axis", o.axis},   {"grid", o.grid},   {"seeds", o.seeds},
            {"k", o.k},          {"width", o.width}, {"depth", o.depth},
            {"fixed_m", o.fixed_m}, {"iters", o.iters}, {"step", o.step}};
  write_manifest(o.common, "scaling", jcfg, wall_since(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev-training workbench: depth-vs-width bound advisor, Sobolev/PDE "
               "trainers, and the desk-scale reproduction harness"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  AdviseOpts advise;
  CLI::App* advise_cmd =
      app.add_subcommand("advise", "Classify (W, M, n, d, k) against the crossover curve");
  advise_cmd->add_option("--W", advise.W, "Parameter count (>= 3)");
  advise_cmd->add_option("--M", advise.M, "Sample count (>= 2)");
  advise_cmd->add_option("--n", advise.n, "Target smoothness (> k)");
  advise_cmd->add_option("--d", advise.d, "Input dimension");
  advise_cmd->add_option("--k", advise.k, "Loss order (0, 1, 2)");
  advise_cmd->add_option("--constants", advise.constants_path,
                         "JSON file overriding bound constants");
  advise_cmd->add_flag("--write", advise.write_files, "Also write advise.json and a manifest");
  add_common(advise_cmd, advise.common);

  BoundsOpts bounds;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Evaluate every bound formula for one query");
  bounds_cmd->add_option("--W", bounds.W, "Parameter count")->capture_default_str();
  bounds_cmd->add_option("--M", bounds.M, "Sample count")->capture_default_str();
  bounds_cmd->add_option("--M2", bounds.M2, "Boundary sample count for the PDE bounds")
      ->capture_default_str();
  bounds_cmd->add_option("--n", bounds.n, "Target smoothness")->capture_default_str();
  bounds_cmd->add_option("--d", bounds.d, "Input dimension")->capture_default_str();
  bounds_cmd->add_option("--k", bounds.k, "Loss order")->capture_default_str();
  bounds_cmd->add_option("--N", bounds.N, "Width for shape-explicit formulas")
      ->capture_default_str();
  bounds_cmd->add_option("--L", bounds.L, "Depth for shape-explicit formulas")
      ->capture_default_str();
  bounds_cmd->add_flag("--logs-off", bounds.logs_off, "Drop logarithmic factors");
  bounds_cmd->add_flag("--write", bounds.write_files, "Also write bounds.json and a manifest");
  add_common(bounds_cmd, bounds.common);

  CurveOpts curve;
  CLI::App* curve_cmd = app.add_subcommand("curve", "Emit the crossover curve as CSV");
  curve_cmd->add_option("--k", curve.k, "Loss order")->capture_default_str();
  curve_cmd->add_option("--n", curve.n, "Target smoothness")->capture_default_str();
  curve_cmd->add_option("--d", curve.d, "Input dimension")->capture_default_str();
  curve_cmd->add_option("--W", curve.w_range, "W range, e.g. 4:4096:log")->capture_default_str();
  add_common(curve_cmd, curve.common);

  TrainOpts train_o;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Supervised Sobolev training on a CSV dataset or the "
                                  "builtin product-of-ReLU target");
  train_cmd->add_option("--data", train_o.data_path, "Dataset CSV (x1..xd,f[,g1..gd][,lap])");
  train_cmd->add_option("--target-seed", train_o.target_seed, "Builtin target seed")
      ->capture_default_str();
  train_cmd->add_option("--train-size", train_o.train_size, "Generated sample count")
      ->capture_default_str();
  train_cmd->add_option("--k", train_o.k, "Loss order")->capture_default_str();
  train_cmd->add_option("--width", train_o.width, "Hidden width")->capture_default_str();
  train_cmd->add_option("--depth", train_o.depth, "Hidden depth")->capture_default_str();
  train_cmd->add_option("--act", train_o.act, "Hidden activation (relu | relu_squared)")
      ->capture_default_str();
  train_cmd->add_option("--iters", train_o.iters, "Iteration budget")->capture_default_str();
  train_cmd->add_option("--batch", train_o.batch, "Batch size (0 = module convention)")
      ->capture_default_str();
  train_cmd->add_option("--step", train_o.step, "Step size")->capture_default_str();
  add_common(train_cmd, train_o.common);

  PdeOpts pde_o;
  CLI::App* pde_cmd = app.add_subcommand("pde", "Train a PDE solver and report solution errors");
  pde_cmd->add_option("--problem", pde_o.problem,
                      "poisson_sin_dirichlet | poisson_cos_neumann")
      ->capture_default_str();
  pde_cmd->add_option("--method", pde_o.method, "pinn | ritz")->capture_default_str();
  pde_cmd->add_option("--M1", pde_o.m1, "Interior sample count")->capture_default_str();
  pde_cmd->add_option("--M2", pde_o.m2, "Boundary sample count")->capture_default_str();
  pde_cmd->add_option("--width", pde_o.width, "Hidden width")->capture_default_str();
  pde_cmd->add_option("--depth", pde_o.depth, "Hidden depth")->capture_default_str();
  pde_cmd->add_option("--iters", pde_o.iters, "Iteration budget")->capture_default_str();
  pde_cmd->add_option("--batch", pde_o.batch, "Batch size (0 = module convention)")
      ->capture_default_str();
  pde_cmd->add_option("--step", pde_o.step, "Step size")->capture_default_str();
  pde_cmd->add_option("--lambda", pde_o.lambda, "Boundary penalty")->capture_default_str();
  pde_cmd->add_flag("--ritz-half-norm", pde_o.ritz_half_norm,
                    "Report the Ritz loss with the 1/(2 M1) interior normalization");
  add_common(pde_cmd, pde_o.common);

  Table2Opts table2_o;
  CLI::App* table2_cmd = app.add_subcommand(
      "table2", "Shallow-vs-deep comparison on the product-of-ReLU target, both data regimes");
  table2_cmd->add_option("--seeds", table2_o.seeds, "Comma-separated trial seeds (>= 3)")
      ->capture_default_str();
  table2_cmd->add_option("--target-seed", table2_o.target_seed, "Target seed")
      ->capture_default_str();
  table2_cmd->add_option("--batch", table2_o.batch, "Minibatch size")->capture_default_str();
  table2_cmd->add_option("--epochs", table2_o.epochs, "Comma-separated epochs per phase")
      ->capture_default_str();
  table2_cmd->add_option("--steps", table2_o.steps, "Comma-separated step sizes per phase")
      ->capture_default_str();
  add_common(table2_cmd, table2_o.common);

  ScalingOpts scaling_o;
  CLI::App* scaling_cmd =
      app.add_subcommand("scaling", "Sweep train size or width and fit the log-log slope");
  scaling_cmd->add_option("--axis", scaling_o.axis, "M | W")->capture_default_str();
  scaling_cmd->add_option("--grid", scaling_o.grid, "Grid, e.g. 1000:16000:log or 8,16,32,64,128")
      ->capture_default_str();
  scaling_cmd->add_option("--seeds", scaling_o.seeds, "Comma-separated seeds")
      ->capture_default_str();
  scaling_cmd->add_option("--k", scaling_o.k, "Loss order")->capture_default_str();
  scaling_cmd->add_option("--width", scaling_o.width, "Width (fixed on the M axis)")
      ->capture_default_str();
  scaling_cmd->add_option("--depth", scaling_o.depth, "Depth")->capture_default_str();
  scaling_cmd->add_option("--fixed-m", scaling_o.fixed_m, "Train size on the W axis")
      ->capture_default_str();
  scaling_cmd->add_option("--target-seed", scaling_o.target_seed, "Target seed")
      ->capture_default_str();
  scaling_cmd->add_option("--iters", scaling_o.iters, "Iteration budget")->capture_default_str();
  scaling_cmd->add_option("--step", scaling_o.step, "Step size")->capture_default_str();
  add_common(scaling_cmd, scaling_o.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help / --version exit 0; parse errors exit 2
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    CommonOpts* common = nullptr;
    if (sub == advise_cmd) common = &advise.common;
    if (sub == bounds_cmd) common = &bounds.common;
    if (sub == curve_cmd) common = &curve.common;
    if (sub == train_cmd) common = &train_o.common;
    if (sub == pde_cmd) common = &pde_o.common;
    if (sub == table2_cmd) common = &table2_o.common;
    if (sub == scaling_cmd) common = &scaling_o.common;
    if (common && !common->config_path.empty()) apply_config_file(sub, common->config_path);

    if (sub == advise_cmd) return run_advise(advise);
    if (sub == bounds_cmd) return run_bounds(bounds);
    if (sub == curve_cmd) return run_curve(curve);
    if (sub == train_cmd) return run_train(train_o);
    if (sub == pde_cmd) return run_pde(pde_o);
    if (sub == table2_cmd) return run_table2(table2_o);
    if (sub == scaling_cmd) return run_scaling(scaling_o);
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  }
  return 0;
}
