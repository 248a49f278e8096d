#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sobench/sobolev.hpp"

namespace sobench {

/// Benchmark target on [0,1]^2: the product of two independent width-1000
/// ReLU expansions, weights uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)]
/// (fan_in 2 for the hidden units, 1000 for the output coefficients).
/// Lipschitz and bounded on the square, so f lies in W^{1,inf}.
class TargetFunction {
 public:
  static constexpr int kUnits = 1000;

  explicit TargetFunction(std::uint64_t seed);

  double value(const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;  // a.e.; relu'(0) = 0

  /// Batched evaluation, one column per point.
  Eigen::VectorXd value_batch(const Eigen::MatrixXd& X) const;

  /// Lipschitz constant estimate from the factor weight norms:
  /// |f(x)-f(y)| <= (K1 S2 + K2 S1) |x-y| with K the factor Lipschitz
  /// constants and S the factor sup bounds on the square.
  double lipschitz_bound() const;

  TargetField as_field() const;  // value + gradient (no Laplacian: k <= 1)

 private:
  struct Factor {
    Eigen::MatrixXd w;  // kUnits x 2
    Eigen::VectorXd b;  // kUnits
    Eigen::VectorXd a;  // kUnits
  };
  Factor f1_, f2_;

  static double factor_value(const Factor& f, const Eigen::Vector2d& x);
  static Eigen::Vector2d factor_grad(const Factor& f, const Eigen::Vector2d& x);
  static double factor_lipschitz(const Factor& f);
  static double factor_sup(const Factor& f);
};

TargetFunction make_target(std::uint64_t seed);

}  // namespace sobench
