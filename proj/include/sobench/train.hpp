#pragma once

#include <optional>
#include <vector>

#include "sobench/model.hpp"
#include "sobench/sobolev.hpp"

namespace sobench {

enum class Optimizer { adam, sgd };

/// Gradient-descent configuration. batch = 0 selects the module convention:
/// full batch below 4096 samples, minibatches of 1024 beyond. momentum
/// applies to the sgd optimizer only.
struct TrainConfig {
  Optimizer optimizer = Optimizer::adam;
  double step = 1e-3;
  int iters = 5000;
  int batch = 0;
  std::uint64_t seed = 1;
  int k = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double momentum = 0.0;
  int full_eval_every = 50;  // full-risk snapshot cadence under minibatching
};

struct TrainResult {
  MlpModel model;             // best-so-far snapshot by empirical risk
  std::vector<double> trace;  // per-iteration training loss
  double final_risk = 0.0;    // empirical risk of the returned model
  std::optional<int> diverged_at;  // iteration index of a non-finite loss
};

/// Empirical risk and its parameter gradient in one pass.
/// k = 0 uses a batched dense sweep; k >= 1 differentiates through the
/// forward-recorded input derivatives on a tape. Both lay the gradient out
/// like flatten_params.
double empirical_risk_gradient(const MlpModel& m, const std::vector<SobolevSample>& samples,
                               int k, Eigen::VectorXd& grad);

/// Minimizes the empirical Sobolev risk. Divergence is reported in the
/// result, never thrown. Deterministic per (config, samples).
TrainResult train(const MlpModel& init, const std::vector<SobolevSample>& samples,
                  const TrainConfig& config);

/// Optimizer step shared by the supervised and PDE training loops.
class AdamState {
 public:
  explicit AdamState(Eigen::Index n) : m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, const TrainConfig& c) {
    if (c.optimizer == Optimizer::sgd) {
      if (c.momentum > 0.0) {
        m_ = c.momentum * m_ + grad;
        theta -= c.step * m_;
      } else {
        theta -= c.step * grad;
      }
      return;
    }
    ++t_;
    m_ = c.beta1 * m_ + (1.0 - c.beta1) * grad;
    v_ = c.beta2 * v_ + (1.0 - c.beta2) * grad.cwiseProduct(grad).eval();
    const double bc1 = 1.0 - std::pow(c.beta1, t_);
    const double bc2 = 1.0 - std::pow(c.beta2, t_);
    theta -= (c.step / bc1) * m_.cwiseQuotient(((v_ / bc2).cwiseSqrt().array() + c.eps).matrix());
  }

 private:
  Eigen::VectorXd m_, v_;
  int t_ = 0;
};

}  // namespace sobench
