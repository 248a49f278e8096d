#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sobench/dual.hpp"
#include "sobench/forward.hpp"
#include "sobench/model.hpp"

namespace sobench::ad {

/// phi(x; theta) by the layer recursion. Throws on input-shape mismatch.
double eval(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// grad_x phi(x; theta); cost O(d * eval).
Eigen::VectorXd input_gradient(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same quantity via a tape reverse sweep; used to cross-check forward mode.
Eigen::VectorXd input_gradient_reverse(const MlpModel& m,
                                       const Eigen::Ref<const Eigen::VectorXd>& x);

/// Laplacian sum_i d^2 phi / dx_i^2 via second-order forward propagation;
/// identically 0 a.e. for pure-ReLU models (not an error).
double input_laplacian(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Value, first and second derivative of t -> phi(x + t*dir) at t = 0.
/// Independent single-direction route used by tests against the fused sweep.
Dual2<double> directional(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& dir);

/// Builds a loss scalar on a fresh tape with the model's parameters as
/// leaves, then reverse-sweeps it. The builder may record forward-mode input
/// derivatives (taped_gradient / taped_laplacian below) onto the tape, so the
/// sweep differentiates through them. Returns d(loss)/d(theta) laid out like
/// flatten_params.
using LossBuilder = std::function<Var(Tape&, const TapedModel&)>;
Eigen::VectorXd param_gradient(const MlpModel& m, const LossBuilder& build_loss);

// Taped network evaluations for use inside loss builders. `x` enters as
// constants; parameter leaves must already be registered via register_params.
Var taped_value(Tape& tape, const TapedModel& tm, const Eigen::Ref<const Eigen::VectorXd>& x,
                JetWorkspace<Var>& wk);
Var taped_value(Tape& tape, const TapedModel& tm, const Eigen::Ref<const Eigen::VectorXd>& x);

struct TapedJet {
  Var value;
  std::vector<Var> grad;
  Var lap;  // only set by taped_laplacian
};
TapedJet taped_gradient(Tape& tape, const TapedModel& tm,
                        const Eigen::Ref<const Eigen::VectorXd>& x, JetWorkspace<Var>& wk);
TapedJet taped_laplacian(Tape& tape, const TapedModel& tm,
                         const Eigen::Ref<const Eigen::VectorXd>& x, JetWorkspace<Var>& wk);

}  // namespace sobench::ad
