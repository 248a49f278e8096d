#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "sobench/bounds.hpp"

using namespace sobench::bounds;

namespace {

const BoundConstants kDefault{};
BoundConstants no_logs() {
  BoundConstants c;
  c.include_logs = false;
  return c;
}

}  // namespace

TEST_CASE("denn_bound: frozen spot value and limits") {
  BoundQuery q{100, 1e6, 3, 2, 0};
  CHECK(denn_bound(q, kDefault) == doctest::Approx(1.3825e-1).epsilon(1e-3));

  // M -> infinity leaves the approximation term alone
  BoundQuery big = q;
  big.M = 1e18;
  const double lw = std::log(100.0);
  const double approx = std::pow(100.0 / (lw * lw), -6.0);
  CHECK(denn_bound(big, kDefault) == doctest::Approx(approx).epsilon(1e-6));

  // bound(k=0) <= bound(k=1) at fixed (W, M, n, d)
  BoundQuery k1 = q;
  k1.k = 1;
  CHECK(denn_bound(q, kDefault) <= denn_bound(k1, kDefault));

  BoundQuery bad = q;
  bad.n = 0;
  CHECK_THROWS_AS(denn_bound(bad, kDefault), std::domain_error);
}

TEST_CASE("wenn_bound: logs-off spot value and monotonicity in M") {
  BoundQuery q{100, 1e6, 3, 2, 0};
  CHECK(wenn_bound(q, no_logs()) == doctest::Approx(1.01e-4).epsilon(1e-12));

  double prev = 1e300;
  for (double M : {1e3, 1e4, 1e5, 1e6}) {
    BoundQuery qq = q;
    qq.M = M;
    const double b = wenn_bound(qq, kDefault);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("rademacher_bound: spot value and crossing with the denn sample term") {
  BoundQuery q{100, 1e4, 3, 2, 0};
  CHECK(rademacher_bound(q, kDefault) == doctest::Approx(9.2104).epsilon(1e-4));

  // logs off: W^2/M vs W/sqrt(M) cross exactly at M = W^2
  const double W = 100;
  for (double M : {5e3, 1e4, 2e4}) {
    const double denn_sample = W * W / M;
    const double rad_sample = W / std::sqrt(M);
    if (M < W * W) CHECK(rad_sample < denn_sample);
    if (M > W * W) CHECK(rad_sample > denn_sample);
    if (M == W * W) CHECK(rad_sample == doctest::Approx(denn_sample));
  }

  // both bounds converge to the same approximation term as M grows
  BoundQuery big = q;
  big.M = 1e30;
  CHECK(rademacher_bound(big, kDefault) == doctest::Approx(denn_bound(big, kDefault)).epsilon(1e-9));
}

TEST_CASE("general_fc_bound: spot value, guard, and (N, L) symmetry") {
  CHECK(general_fc_bound(10, 10, 1e6, 3, 2, 0, kDefault) ==
        doctest::Approx(1e-12 + 0.7325).epsilon(1e-3));

  // log factor guarded at N = 1 or L = 1: sample term stays positive
  const double g = general_fc_bound(1, 10, 1e6, 3, 2, 0, kDefault);
  CHECK(g > 0.0);
  CHECK(std::isfinite(g));

  // first term symmetric in (N, L)
  BoundConstants off = no_logs();
  const double a = general_fc_bound(4, 16, 1e30, 3, 2, 0, off);
  const double b = general_fc_bound(16, 4, 1e30, 3, 2, 0, off);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("approximation_rate: power law") {
  CHECK(approximation_rate(2, 4, 3, 2, 1, kDefault) == doctest::Approx(1.5625e-2).epsilon(1e-12));
  // doubling N*L multiplies by 2^{-2(n-k)/d}
  const double r1 = approximation_rate(2, 4, 3, 2, 1, kDefault);
  const double r2 = approximation_rate(4, 4, 3, 2, 1, kDefault);
  CHECK(r2 / r1 == doctest::Approx(std::pow(2.0, -2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(approximation_rate(2, 4, 2, 2, 2, kDefault), std::domain_error);
}

TEST_CASE("optimal_rate and optimal_width: frozen spot values") {
  CHECK(optimal_rate(1e6, 2, 1, 0) == doctest::Approx(1.5849e-5).epsilon(1e-4));
  CHECK(optimal_width(1e10, 2, 2) == doctest::Approx(46.42).epsilon(1e-3));
  // higher k slows the rate
  CHECK(optimal_rate(1e6, 3, 2, 0) < optimal_rate(1e6, 3, 2, 1));
}

TEST_CASE("crossover_M: spot value and monotonicity in k") {
  CHECK(crossover_M(10, 3, 2, 0) == doctest::Approx(1e5).epsilon(1e-12));
  // k = n-1 collapses the exponent to 2 + 2/d
  CHECK(crossover_M(7, 4, 2, 3) == doctest::Approx(std::pow(7.0, 3.0)).epsilon(1e-12));
  CHECK(crossover_M(10, 3, 2, 1) < crossover_M(10, 3, 2, 0));
  CHECK(crossover_M(10, 3, 2, 2) < crossover_M(10, 3, 2, 1));
}

TEST_CASE("recommend: region verdicts around the crossover") {
  BoundQuery q{10, 1e7, 3, 2, 0};
  CHECK(recommend(q, kDefault).tag == RegionVerdict::Tag::denn);
  q.M = 1e3;
  CHECK(recommend(q, kDefault).tag == RegionVerdict::Tag::wenn);
  q.M = 1e5;  // exactly at the crossover
  const RegionVerdict v = recommend(q, kDefault);
  CHECK(v.tag == RegionVerdict::Tag::transitional);
  CHECK(v.margin > 0.0);
}

TEST_CASE("recommend: verdict never contradicts the logs-off bound ordering") {
  for (double W : {4.0, 16.0, 64.0, 256.0, 1024.0})
    for (int d = 1; d <= 5; ++d)
      for (int k = 0; k <= 2; ++k)
        for (double n = k + 1; n <= 5; ++n)
          for (double factor : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            BoundQuery q{W, std::max(2.0, factor * crossover_M(W, n, d, k)), n, d, k};
            const RegionVerdict v = recommend(q, kDefault);
            if (v.tag == RegionVerdict::Tag::denn) CHECK(v.margin < 1.0 + 1e-12);
            if (v.tag == RegionVerdict::Tag::wenn) CHECK(v.margin > 1.0 - 1e-12);
          }
}

TEST_CASE("crossover grid: denn at 2x and wenn at half, zero violations") {
  int checked = 0;
  for (int k = 0; k <= 2; ++k)
    for (double n = k + 1; n <= 5; ++n)
      for (int d = 1; d <= 5; ++d)
        for (double W : {4.0, 16.0, 64.0, 256.0, 1024.0}) {
          if (std::pow(W, -2.0 * (n - k) / d) > 0.5) continue;
          const double cross = crossover_M(W, n, d, k);
          BoundQuery hi{W, 2.0 * cross, n, d, k};
          BoundQuery lo{W, std::max(2.0, cross / 2.0), n, d, k};
          CHECK(recommend(hi, kDefault).tag == RegionVerdict::Tag::denn);
          CHECK(recommend(lo, kDefault).tag == RegionVerdict::Tag::wenn);
          ++checked;
        }
  CHECK(checked > 100);
}

TEST_CASE("fig1_curve: monotone, ordered in k, and consistent with crossover_M") {
  std::vector<double> Ws;
  for (double w = 4; w <= 4096; w *= 2) Ws.push_back(w);
  const auto c0 = fig1_curve(0, 3, 2, Ws);
  const auto c1 = fig1_curve(1, 3, 2, Ws);
  for (std::size_t i = 0; i < Ws.size(); ++i) {
    CHECK(c0[i].M == doctest::Approx(crossover_M(Ws[i], 3, 2, 0)));
    if (i > 0) CHECK(c0[i].M > c0[i - 1].M);
    if (Ws[i] > 1) CHECK(c1[i].M < c0[i].M);  // higher k expands the denn region
  }
}

TEST_CASE("pdim_bound: spot value, guard, monotonicity") {
  CHECK(pdim_bound(PdimClass::f0, 10, 10, kDefault) == doctest::Approx(1.1035e5).epsilon(1e-3));
  // log2 degeneracy guarded: N^2 L^2 floor instead of 0
  CHECK(pdim_bound(PdimClass::f0, 1, 10, kDefault) == doctest::Approx(100.0 * guarded_log2(10)));
  double prev = 0.0;
  for (double N : {2.0, 4.0, 8.0, 16.0}) {
    const double p = pdim_bound(PdimClass::dkf1, N, 8, kDefault);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("covering_bound: spot value, monotone in eps, domain") {
  CHECK(covering_bound(0.1, 10, 100, 1) == doctest::Approx(62.98).epsilon(1e-3));
  CHECK(covering_bound(0.2, 10, 100, 1) < covering_bound(0.1, 10, 100, 1));
  CHECK_THROWS_AS(covering_bound(0.1, 200, 100, 1), std::domain_error);  // m < pdim
}

TEST_CASE("covering_bound_uniform_params: spot value and structure") {
  CHECK(covering_bound_uniform_params(0.01, 100, 5, 1, CoveringVariant::value, kDefault) ==
        doctest::Approx(3408.6).epsilon(1e-3));
  // delta = L + 1 kills the second term
  const double W = 50, L = 7, F = 2;
  const double v =
      covering_bound_uniform_params(L + 1, W, L, F, CoveringVariant::first_derivative, kDefault);
  CHECK(v == doctest::Approx(W * (L + 1) * std::log(F * (W + 1))).epsilon(1e-12));
  // linear in W with the logs fixed
  const double v1 = covering_bound_uniform_params(0.5, 10, 3, 1, CoveringVariant::value, kDefault);
  const double v2 = covering_bound_uniform_params(0.5, 20, 3, 1, CoveringVariant::value, kDefault);
  CHECK(v2 / v1 == doctest::Approx(2.0 * std::log(21.0) / std::log(11.0)).epsilon(0.2));
}

TEST_CASE("sample_error_bound: frozen spot value and limits") {
  CHECK(sample_error_bound(0, 1e4, 1, 2, 100, 100) == doctest::Approx(1022.0).epsilon(1e-3));
  // vanishes as M grows
  CHECK(sample_error_bound(0, 1e12, 1, 2, 100, 100) < 1e-3);
  // derivative terms only add
  CHECK(sample_error_bound(1, 1e4, 1, 2, 100, 100) >= sample_error_bound(0, 1e4, 1, 2, 100, 100));
  CHECK(sample_error_bound(2, 1e4, 1, 2, 100, 100) >= sample_error_bound(0, 1e4, 1, 2, 100, 100));
}

TEST_CASE("pde_bound: spot value, symmetry, variant ordering") {
  CHECK(pde_bound(100, 1e6, 1e6, 3, 2, PdeVariant::ritz, kDefault) ==
        doctest::Approx(2.02e-3 + 0.27631).epsilon(1e-3));
  // M1 = M2 = M doubles the supervised sample term
  const double lw = std::log(100.0);
  const double sample = 1e4 * 2.0 * std::log(1e6) / 1e6;
  const double approx = std::pow(100.0 / (lw * lw), -4.0);
  CHECK(pde_bound(100, 1e6, 1e6, 3, 2, PdeVariant::ritz, kDefault) ==
        doctest::Approx(approx + sample).epsilon(1e-12));
  // ritz <= pinn at equal inputs once n >= 3
  CHECK(pde_bound(100, 1e6, 1e6, 3, 2, PdeVariant::ritz, kDefault) <=
        pde_bound(100, 1e6, 1e6, 3, 2, PdeVariant::pinn, kDefault));
}

TEST_CASE("slope law: optimal-width trajectory recovers the corollary rate") {
  std::vector<double> Ms;
  for (double M = 1e4; M <= 1.0000001e12; M *= 10.0) Ms.push_back(M);
  struct Case {
    double n;
    int d, k;
  };
  for (const Case c : {Case{2, 1, 0}, Case{3, 2, 1}, Case{4, 2, 2}}) {
    const double target = -2.0 * (c.n - c.k) / (2.0 * (c.n - c.k) + c.d);
    const double off = optimal_width_slope(Ms, c.n, c.d, c.k, no_logs());
    CHECK(std::abs(off - target) <= 0.02 * std::abs(target));
    const double on = optimal_width_slope(Ms, c.n, c.d, c.k, kDefault);
    CHECK(std::abs(on - target) <= 0.10 * std::abs(target));
  }
}

TEST_CASE("every bound is positive and finite on random valid queries") {
  std::uint64_t state = 12345;
  auto next = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int t = 0; t < 200; ++t) {
    const int k = static_cast<int>(next() * 3);
    const double n = k + 1 + next() * 4;
    const int d = 1 + static_cast<int>(next() * 5);
    BoundQuery q{3 + next() * 1000, 2 + next() * 1e7, n, d, k};
    BoundConstants c;
    c.include_logs = next() < 0.5;
    for (double v : {denn_bound(q, c), wenn_bound(q, c), rademacher_bound(q, c),
                     crossover_M(q.W, q.n, q.d, q.k), optimal_rate(q.M, q.n, q.d, q.k),
                     optimal_width(q.M, q.n, q.d)}) {
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("denn_bound U-shape: logs off, term monotonicity in W") {
  BoundConstants off = no_logs();
  double prev_approx = 1e300, prev_sample = 0.0;
  for (double W : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    const double m = 3.0, M = 1e6;
    const double approx = std::pow(W, -4.0 * m / 2.0);
    const double sample = W * W / M;
    CHECK(approx < prev_approx);
    CHECK(sample > prev_sample);
    prev_approx = approx;
    prev_sample = sample;
    BoundQuery q{W, M, 3, 2, 0};
    CHECK(denn_bound(q, off) == doctest::Approx(approx + sample).epsilon(1e-12));
  }
}
