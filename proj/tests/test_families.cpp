#include <cmath>

#include "doctest.h"
#include "sobench/autodiff.hpp"
#include "sobench/families.hpp"
#include "test_util.hpp"

using namespace sobench;

TEST_CASE("wenn scaling: width N, depth max(1, ceil(log2 N))") {
  const auto dims = family_dims(ArchitectureFamily::wenn(20), 2);
  CHECK(dims.front() == 2);
  CHECK(dims.back() == 1);
  CHECK(dims[1] == 20);
  CHECK(static_cast<int>(dims.size()) - 2 == 5);  // ceil(log2 20)
  CHECK(static_cast<int>(family_dims(ArchitectureFamily::wenn(1), 2).size()) - 2 == 1);
}

TEST_CASE("table-2 shapes come from explicit overrides") {
  // shallow (depth 1, width 20)
  const auto shallow = family_dims(ArchitectureFamily::explicit_shape(1, 20), 2);
  CHECK(shallow == std::vector<int>{2, 20, 1});
  // deep (depth 4, width 10)
  const auto deep = family_dims(ArchitectureFamily::explicit_shape(4, 10), 2);
  CHECK(deep == std::vector<int>{2, 10, 10, 10, 10, 1});
}

TEST_CASE("denn scaling: width <= C1 log L, depth <= C2 L log L") {
  for (int l : {8, 64, 512}) {
    ArchitectureFamily f = ArchitectureFamily::denn(l);
    const auto dims = family_dims(f, 2);
    const int w = dims[1];
    const int depth = static_cast<int>(dims.size()) - 2;
    CHECK(w <= static_cast<int>(std::ceil(f.c1 * std::log2(l))));
    CHECK(depth <= f.c2 * l * std::log2(l) + 1e-9);
  }
}

TEST_CASE("dsrn instance satisfies the class budgets") {
  const int l = 8;
  const DsrnShape s = dsrn_shape(l);
  const double budget = 10.0 * (l + 1) * std::log2(4.0 * l);
  CHECK(s.depth_budget == doctest::Approx(budget));
  CHECK(s.depth_body + s.depth_head <= budget);
  CHECK(s.depth_head <= 6.0 * std::log(budget));

  const auto acts = family_activations(ArchitectureFamily::dsrn(l), 2);
  // sigma_1 body then sigma_2 head then affine output
  int first_sq = -1;
  for (std::size_t i = 0; i < acts.size(); ++i)
    if (acts[i] == ActivationKind::relu_squared && first_sq < 0) first_sq = static_cast<int>(i);
  REQUIRE(first_sq >= 0);
  for (std::size_t i = 0; i + 1 < acts.size(); ++i) {
    if (static_cast<int>(i) < first_sq)
      CHECK(acts[i] == ActivationKind::relu);
    else
      CHECK(acts[i] == ActivationKind::relu_squared);
  }
  CHECK(acts.back() == ActivationKind::identity);
}

TEST_CASE("build rejects invalid sizes") {
  CHECK_THROWS_AS(family_dims(ArchitectureFamily::wenn(0), 2), std::invalid_argument);
  CHECK_THROWS_AS(family_dims(ArchitectureFamily::wenn(4), 0), std::invalid_argument);
}

TEST_CASE("denn parameter growth stays in the L (log2 L)^3 band") {
  double lo = 1e300, hi = 0.0;
  for (int l = 8; l <= 4096; l *= 2) {
    const auto dims = family_dims(ArchitectureFamily::denn(l), 2);
    const double w = static_cast<double>(param_count_from_dims(dims));
    const double ratio = w / (l * std::pow(std::log2(l), 3.0));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo >= 0.9);
  CHECK(hi <= 1.6);
  CHECK(hi / lo < 1.5);
}

TEST_CASE("sup_norm_estimate: zero model and the x^2 net") {
  MlpModel zero = make_mlp({1, 2, 1}, ActivationKind::relu, 1);
  for (Layer& l : zero.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  for (int k : {0, 1, 2}) CHECK(sup_norm_estimate(zero, k, 16).value == 0.0);

  const MlpModel sq = testutil::square_net_1d();
  // max of x^2 on [0,1] with the endpoint in the grid
  CHECK(sup_norm_estimate(sq, 0, 16).value == doctest::Approx(1.0));
  // W^{1,inf} picks up |2x| = 2 at x = 1
  CHECK(sup_norm_estimate(sq, 1, 16).value == doctest::Approx(2.0));
}

TEST_CASE("sup_norm_estimate: monotone nondecreasing under grid refinement") {
  const MlpModel m = make_mlp({2, 10, 10, 1}, ActivationKind::relu, 31);
  double prev = 0.0;
  for (int res : {4, 8, 16, 32}) {
    const double est = sup_norm_estimate(m, 1, res).value;
    CHECK(est >= prev);
    prev = est;
  }
}

TEST_CASE("sup norm ordering across derivative orders") {
  const MlpModel m = make_mlp({2, 8, 8, 1}, ActivationKind::relu_squared, 67);
  const double k0 = sup_norm_estimate(m, 0, 24).value;
  const double k1 = sup_norm_estimate(m, 1, 24).value;
  const double k2 = sup_norm_estimate(m, 2, 24).value;
  CHECK(k0 <= k1);
  CHECK(k1 <= k2);
}

TEST_CASE("membership report checks the bound box") {
  const MlpModel sq = testutil::square_net_1d();
  const MembershipReport in = check_membership(sq, BoundBox{2.0}, 0, 16);
  CHECK(in.within);
  const MembershipReport out = check_membership(sq, BoundBox{1.5}, 1, 16);
  CHECK(!out.within);  // derivative reaches 2 at the right endpoint
  CHECK_THROWS_AS(check_membership(sq, BoundBox{0.5}, 0, 16), std::invalid_argument);  // B >= 1
}
