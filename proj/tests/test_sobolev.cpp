#include <algorithm>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "sobench/autodiff.hpp"
#include "sobench/sobolev.hpp"
#include "sobench/train.hpp"
#include "test_util.hpp"

using namespace sobench;
using testutil::rel_err_vec;

namespace {

MlpModel zero_model(int d) {
  MlpModel m = make_mlp({d, 2, 1}, ActivationKind::relu, 1);
  for (Layer& l : m.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  return m;
}

TargetField linear_target_1d() {
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return x[0]; };
  f.grad = [](const Eigen::VectorXd&) {
    Eigen::VectorXd g(1);
    g << 1.0;
    return g;
  };
  f.lap = [](const Eigen::VectorXd&) { return 0.0; };
  return f;
}

}  // namespace

TEST_CASE("h_k: zero model against f(x)=x1 at order 1") {
  const MlpModel m = zero_model(2);
  SobolevSample s;
  s.x.resize(2);
  s.x << 0.3, 0.9;
  s.value = 0.3;
  Eigen::VectorXd g(2);
  g << 1.0, 0.0;
  s.grad = g;
  CHECK(h_k(m, s, 1) == doctest::Approx(0.09 + 1.0).epsilon(1e-14));
}

TEST_CASE("h_k: zero gap when the model equals the target") {
  const MlpModel sq = testutil::square_net_1d();
  SobolevSample s;
  s.x.resize(1);
  s.x << 0.6;
  s.value = 0.36;
  Eigen::VectorXd g(1);
  g << 1.2;
  s.grad = g;
  s.lap = 2.0;
  for (int k : {0, 1, 2}) CHECK(h_k(sq, s, k) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("h_k: zero model against x1^2 + x2^2 at order 2") {
  const MlpModel m = zero_model(2);
  SobolevSample s;
  s.x.resize(2);
  s.x << 0.5, 0.5;
  s.value = 0.5;
  s.lap = 4.0;
  CHECK(h_k(m, s, 2) == doctest::Approx(0.25 + 16.0).epsilon(1e-14));
}

TEST_CASE("h_k: missing derivative targets are contract errors naming the field") {
  const MlpModel m = zero_model(2);
  SobolevSample s;
  s.x.resize(2);
  s.x << 0.1, 0.2;
  s.value = 0.4;
  CHECK_THROWS_WITH_AS(h_k(m, s, 1), doctest::Contains("grad"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(h_k(m, s, 2), doctest::Contains("lap"), std::invalid_argument);
}

TEST_CASE("h_k ordering: h0 <= h1 and h0 <= h2 pointwise") {
  const MlpModel m = make_mlp({2, 6, 1}, ActivationKind::relu_squared, 5);
  const TargetField f = linear_target_1d();  // reused shapes below are 2-d
  Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    SobolevSample s;
    s.x.resize(2);
    s.x << rng.uniform01(), rng.uniform01();
    s.value = s.x[0] * s.x[1];
    Eigen::VectorXd g(2);
    g << s.x[1], s.x[0];
    s.grad = g;
    s.lap = 0.0;
    const double h0 = h_k(m, s, 0);
    CHECK(h0 <= h_k(m, s, 1) + 1e-15);
    CHECK(h0 <= h_k(m, s, 2) + 1e-15);
  }
  (void)f;
}

TEST_CASE("empirical_risk: mean identities") {
  const MlpModel m = make_mlp({1, 4, 1}, ActivationKind::relu, 3);
  SobolevSample s;
  s.x.resize(1);
  s.x << 0.4;
  s.value = 0.7;

  // all samples identical -> pointwise value
  std::vector<SobolevSample> same(5, s);
  CHECK(empirical_risk(m, same, 0).value == doctest::Approx(h_k(m, s, 0)).epsilon(1e-14));

  // disjoint-union additivity
  Rng rng(7);
  std::vector<SobolevSample> s1, s2;
  for (int i = 0; i < 4; ++i) {
    SobolevSample q;
    q.x.resize(1);
    q.x << rng.uniform01();
    q.value = rng.uniform01();
    s1.push_back(q);
  }
  for (int i = 0; i < 9; ++i) {
    SobolevSample q;
    q.x.resize(1);
    q.x << rng.uniform01();
    q.value = rng.uniform01();
    s2.push_back(q);
  }
  std::vector<SobolevSample> both = s1;
  both.insert(both.end(), s2.begin(), s2.end());
  const double r1 = empirical_risk(m, s1, 0).value;
  const double r2 = empirical_risk(m, s2, 0).value;
  const double rb = empirical_risk(m, both, 0).value;
  CHECK(rb == doctest::Approx((4 * r1 + 9 * r2) / 13.0).epsilon(1e-13));

  CHECK_THROWS_AS(empirical_risk(m, {}, 0), std::invalid_argument);
}

TEST_CASE("empirical_risk: matches an independent summation and ignores order") {
  const MlpModel m = make_mlp({2, 5, 1}, ActivationKind::relu_squared, 13);
  Rng rng(17);
  std::vector<SobolevSample> samples;
  for (int i = 0; i < 40; ++i) {
    SobolevSample q;
    q.x.resize(2);
    q.x << rng.uniform01(), rng.uniform01();
    q.value = rng.uniform_sym(2.0);
    samples.push_back(q);
  }
  double sum = 0.0;
  for (const auto& q : samples) {
    const double gap = q.value - ad::eval(m, q.x);
    sum += gap * gap;
  }
  CHECK(empirical_risk(m, samples, 0).value == doctest::Approx(sum / 40.0).epsilon(1e-13));

  std::vector<SobolevSample> shuffled = samples;
  std::mt19937 mix(99);
  std::shuffle(shuffled.begin(), shuffled.end(), mix);
  CHECK(empirical_risk(m, shuffled, 0).value ==
        doctest::Approx(empirical_risk(m, samples, 0).value).epsilon(1e-13));
}

TEST_CASE("continuous_risk: analytic integrals for the zero model") {
  const MlpModel m = zero_model(1);
  const TargetField f = linear_target_1d();
  const QuadratureSpec spec = QuadratureSpec::default_for(1);
  // integral of x^2 is 1/3; order 1 adds |f'|^2 = 1
  CHECK(continuous_risk(m, f, 0, spec).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(continuous_risk(m, f, 1, spec).value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("continuous_risk: zero integrand when the model is the target") {
  const MlpModel sq = testutil::square_net_1d();
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  f.grad = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(1);
    g << 2.0 * x[0];
    return g;
  };
  f.lap = [](const Eigen::VectorXd&) { return 2.0; };
  const QuadratureSpec spec = QuadratureSpec::default_for(1);
  for (int k : {0, 1, 2})
    CHECK(continuous_risk(sq, f, k, spec).value == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("continuous_risk: monte carlo standard error shrinks like 1/sqrt(m)") {
  const MlpModel m = make_mlp({3, 6, 1}, ActivationKind::relu, 19);
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return std::sin(3.0 * x.sum()); };
  f.grad = nullptr;
  f.lap = nullptr;

  auto std_over_seeds = [&](std::int64_t count) {
    std::vector<double> vals;
    for (std::uint64_t s = 0; s < 20; ++s) {
      QuadratureSpec spec;
      spec.kind = QuadratureSpec::Kind::monte_carlo;
      spec.count = count;
      spec.seed = 1000 + s;
      vals.push_back(continuous_risk(m, f, 0, spec).value);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(vals.size()));
  };

  const double s1 = std_over_seeds(512);
  const double s4 = std_over_seeds(2048);
  CHECK(s4 < 0.7 * s1);
}

TEST_CASE("risk gradients match parameter differences for k = 0, 1, 2") {
  const MlpModel m = make_mlp({2, 8, 8, 1}, ActivationKind::relu_squared, 29);
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return x[0] * x[0] - 0.5 * x[1]; };
  f.grad = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g << 2.0 * x[0], -0.5;
    return g;
  };
  f.lap = [](const Eigen::VectorXd&) { return 2.0; };
  const auto samples = sample_target(f, 2, 2, 16, 31);

  for (int k : {0, 1, 2}) {
    Eigen::VectorXd grad;
    const double risk = empirical_risk_gradient(m, samples, k, grad);
    CHECK(risk == doctest::Approx(empirical_risk(m, samples, k).value).epsilon(1e-12));
    const Eigen::VectorXd fd = testutil::fd_param_gradient(
        m, [&](const MlpModel& mm) { return empirical_risk(mm, samples, k).value; });
    CHECK(rel_err_vec(grad, fd) < (k <= 1 ? 1e-4 : 1e-3));
  }
}

TEST_CASE("train: realizable 1-d linear target reaches the optimizer floor") {
  TargetField f = linear_target_1d();
  const auto samples = sample_target(f, 1, 0, 64, 37);
  // single affine layer: the realizable convex case
  MlpModel init = make_mlp({1, 1}, ActivationKind::relu, 41);
  init.layers[0].act = ActivationKind::identity;
  TrainConfig c;
  c.k = 0;
  c.iters = 4000;
  c.step = 1e-2;
  const TrainResult res = train(init, samples, c);
  CHECK(res.final_risk < 1e-6);

  // closed-form least squares cross-check: residual of the optimum is 0
  CHECK(!res.diverged_at.has_value());
}

TEST_CASE("train: zero iterations is a no-op") {
  TargetField f = linear_target_1d();
  const auto samples = sample_target(f, 1, 0, 16, 43);
  const MlpModel init = make_mlp({1, 4, 1}, ActivationKind::relu, 47);
  TrainConfig c;
  c.iters = 0;
  const TrainResult res = train(init, samples, c);
  CHECK(flatten_params(res.model) == flatten_params(init));
  CHECK(res.trace.empty());
}

TEST_CASE("train: fixed seed gives a bit-identical loss trace") {
  TargetField f = linear_target_1d();
  const auto samples = sample_target(f, 1, 0, 6000, 51);
  const MlpModel init = make_mlp({1, 6, 1}, ActivationKind::relu, 53);
  TrainConfig c;
  c.k = 0;
  c.iters = 40;
  c.batch = 512;  // exercises the minibatch index stream
  c.seed = 99;
  const TrainResult a = train(init, samples, c);
  const TrainResult b = train(init, samples, c);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i] == b.trace[i]);
  CHECK(flatten_params(a.model) == flatten_params(b.model));
}

TEST_CASE("train: returned model never beats the initial risk upward") {
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return std::cos(2.0 * x[0]) * x[1]; };
  f.grad = nullptr;
  f.lap = nullptr;
  const auto samples = sample_target(f, 2, 0, 128, 57);
  const MlpModel init = make_mlp({2, 10, 1}, ActivationKind::relu, 59);
  const double risk0 = empirical_risk(init, samples, 0).value;
  TrainConfig c;
  c.k = 0;
  c.iters = 200;
  const TrainResult res = train(init, samples, c);
  CHECK(res.final_risk <= risk0);
  CHECK(empirical_risk(res.model, samples, 0).value == doctest::Approx(res.final_risk));
}

TEST_CASE("dataset csv round-trips") {
  TargetField f;
  f.value = [](const Eigen::VectorXd& x) { return x[0] - 2.0 * x[1]; };
  f.grad = [](const Eigen::VectorXd&) {
    Eigen::VectorXd g(2);
    g << 1.0, -2.0;
    return g;
  };
  f.lap = [](const Eigen::VectorXd&) { return 0.0; };
  const auto samples = sample_target(f, 2, 2, 12, 61);
  const std::string path = (std::filesystem::temp_directory_path() / "sobench_data.csv").string();
  save_dataset(samples, 2, path);
  const auto back = load_dataset(path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].x == samples[i].x);
    CHECK(back[i].value == samples[i].value);
    CHECK(*back[i].grad == *samples[i].grad);
    CHECK(*back[i].lap == *samples[i].lap);
  }
  std::filesystem::remove(path);
}
