#include "sobench/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "sobench/rng.hpp"
#include "sobench/threads.hpp"

namespace sobench {

namespace {

struct Rule {
  std::vector<double> x, w;
};

// Nodes via Newton on the Legendre recurrence, shifted to [0,1].
Rule compute_rule(int n) {
  Rule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  const double eps = 1e-15;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));  // initial guess on [-1,1]
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < eps) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    r.x[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (t + 1.0);
    r.w[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return r;
}

const Rule& cached_rule(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  const Rule& r = cached_rule(n);
  nodes = r.x;
  weights = r.w;
}

double integrate_segment(double a, double b, int n, const std::function<double(double)>& f) {
  const Rule& r = cached_rule(n);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(a + (b - a) * r.x[i]);
  return s * (b - a);
}

double integrate_unit_cube(int d, const QuadratureSpec& spec,
                           const std::function<double(const Eigen::VectorXd&)>& f) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (spec.kind == QuadratureSpec::Kind::tensor) {
    if (d > 3) throw std::invalid_argument("tensor quadrature supports d <= 3");
    const Rule& r = cached_rule(spec.points_per_axis);
    const std::size_t n = r.x.size();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    const double sum = parallel_sum(total, 4096, [&](std::size_t flat) {
      Eigen::VectorXd x(d);
      double w = 1.0;
      std::size_t rem = flat;
      for (int c = 0; c < d; ++c) {
        const std::size_t i = rem % n;
        rem /= n;
        x[c] = r.x[i];
        w *= r.w[i];
      }
      return w * f(x);
    });
    return sum;
  }
  // Monte Carlo: mean of f over `count` uniform points, fixed seed.
  const std::size_t count = static_cast<std::size_t>(spec.count);
  std::vector<Eigen::VectorXd> pts(count);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(d);
    for (int c = 0; c < d; ++c) x[c] = rng.uniform01();
    pts[i] = std::move(x);
  }
  const double sum = parallel_sum(count, 1024, [&](std::size_t i) { return f(pts[i]); });
  return sum / static_cast<double>(count);
}

}  // namespace sobench
