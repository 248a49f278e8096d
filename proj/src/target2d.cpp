#include "sobench/target2d.hpp"

#include "sobench/rng.hpp"

namespace sobench {

namespace {

void init_factor(Eigen::MatrixXd& w, Eigen::VectorXd& b, Eigen::VectorXd& a, Rng& rng) {
  const int n = TargetFunction::kUnits;
  w.resize(n, 2);
  b.resize(n);
  a.resize(n);
  const double hidden_bound = 1.0 / std::sqrt(2.0);
  const double out_bound = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    w(i, 0) = rng.uniform_sym(hidden_bound);
    w(i, 1) = rng.uniform_sym(hidden_bound);
    b(i) = rng.uniform_sym(hidden_bound);
  }
  for (int i = 0; i < n; ++i) a(i) = rng.uniform_sym(out_bound);
}

}  // namespace

TargetFunction::TargetFunction(std::uint64_t seed) {
  Rng rng(seed);
  init_factor(f1_.w, f1_.b, f1_.a, rng);
  init_factor(f2_.w, f2_.b, f2_.a, rng);
}

double TargetFunction::factor_value(const Factor& f, const Eigen::Vector2d& x) {
  const Eigen::VectorXd pre = f.w * x + f.b;
  return f.a.dot(pre.cwiseMax(0.0));
}

Eigen::Vector2d TargetFunction::factor_grad(const Factor& f, const Eigen::Vector2d& x) {
  const Eigen::VectorXd pre = f.w * x + f.b;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int i = 0; i < kUnits; ++i)
    if (pre[i] > 0.0) g += f.a[i] * f.w.row(i).transpose();
  return g;
}

double TargetFunction::value(const Eigen::Vector2d& x) const {
  return factor_value(f1_, x) * factor_value(f2_, x);
}

Eigen::Vector2d TargetFunction::gradient(const Eigen::Vector2d& x) const {
  const double v1 = factor_value(f1_, x), v2 = factor_value(f2_, x);
  return factor_grad(f1_, x) * v2 + v1 * factor_grad(f2_, x);
}

Eigen::VectorXd TargetFunction::value_batch(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd pre1 = (f1_.w * X).colwise() + f1_.b;
  const Eigen::MatrixXd pre2 = (f2_.w * X).colwise() + f2_.b;
  const Eigen::VectorXd v1 = pre1.cwiseMax(0.0).transpose() * f1_.a;
  const Eigen::VectorXd v2 = pre2.cwiseMax(0.0).transpose() * f2_.a;
  return v1.cwiseProduct(v2);
}

double TargetFunction::factor_lipschitz(const Factor& f) {
  double k = 0.0;
  for (int i = 0; i < kUnits; ++i) k += std::abs(f.a[i]) * f.w.row(i).norm();
  return k;
}

double TargetFunction::factor_sup(const Factor& f) {
  // relu(w.x + b) <= |w|_1 + |b| on the unit square
  double s = 0.0;
  for (int i = 0; i < kUnits; ++i)
    s += std::abs(f.a[i]) * (f.w.row(i).cwiseAbs().sum() + std::abs(f.b[i]));
  return s;
}

double TargetFunction::lipschitz_bound() const {
  return factor_lipschitz(f1_) * factor_sup(f2_) + factor_sup(f1_) * factor_lipschitz(f2_);
}

TargetField TargetFunction::as_field() const {
  TargetField t;
  auto self = *this;  // value copy keeps the field self-contained
  t.value = [self](const Eigen::VectorXd& x) { return self.value(Eigen::Vector2d(x[0], x[1])); };
  t.grad = [self](const Eigen::VectorXd& x) {
    const Eigen::Vector2d g = self.gradient(Eigen::Vector2d(x[0], x[1]));
    Eigen::VectorXd out(2);
    out << g[0], g[1];
    return out;
  };
  t.lap = nullptr;
  return t;
}

TargetFunction make_target(std::uint64_t seed) { return TargetFunction(seed); }

}  // namespace sobench
