#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sobench/autodiff.hpp"
#include "sobench/model.hpp"
#include "sobench/rng.hpp"

namespace testutil {

inline double rel_err(double got, double want, double floor = 1e-12) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline double rel_err_vec(const Eigen::VectorXd& got, const Eigen::VectorXd& want,
                          double floor = 1e-12) {
  return (got - want).norm() / std::max(want.norm(), floor);
}

// Central finite differences; the independent oracle for the forward sweeps.
inline Eigen::VectorXd fd_gradient(const sobench::MlpModel& m, const Eigen::VectorXd& x,
                                   double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (sobench::ad::eval(m, xp) - sobench::ad::eval(m, xm)) / (2.0 * h);
  }
  return g;
}

inline double fd_laplacian(const sobench::MlpModel& m, const Eigen::VectorXd& x,
                           double h = 1e-3) {
  const double center = sobench::ad::eval(m, x);
  double lap = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    lap += (sobench::ad::eval(m, xp) - 2.0 * center + sobench::ad::eval(m, xm)) / (h * h);
  }
  return lap;
}

// Central differences over a flattened parameter vector.
inline Eigen::VectorXd fd_param_gradient(const sobench::MlpModel& m,
                                         const std::function<double(const sobench::MlpModel&)>& loss,
                                         double h = 1e-6) {
  Eigen::VectorXd theta = sobench::flatten_params(m);
  Eigen::VectorXd g(theta.size());
  sobench::MlpModel work = m;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double orig = theta[i];
    theta[i] = orig + h;
    sobench::unflatten_params(work, theta);
    const double lp = loss(work);
    theta[i] = orig - h;
    sobench::unflatten_params(work, theta);
    const double lm = loss(work);
    theta[i] = orig;
    g[i] = (lp - lm) / (2.0 * h);
  }
  sobench::unflatten_params(work, theta);
  return g;
}

// Every preactivation stays at distance > guard from its kink along the
// forward pass.
inline bool kink_guarded(const sobench::MlpModel& m, const Eigen::VectorXd& x,
                         double guard = 1e-3) {
  Eigen::VectorXd a = x;
  for (const sobench::Layer& l : m.layers) {
    Eigen::VectorXd z = l.weight * a + l.bias;
    if (l.act != sobench::ActivationKind::identity)
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (std::abs(z[i]) <= guard) return false;
    a.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) a[i] = sobench::act_value(l.act, z[i]);
  }
  return true;
}

// Draws an interior point passing the kink guard (and optionally a minimum
// Laplacian magnitude so relative errors are well defined).
inline Eigen::VectorXd guarded_point(const sobench::MlpModel& m, sobench::Rng& rng,
                                     double guard = 1e-3, double min_lap = -1.0) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::VectorXd x(m.input_dim);
    for (int c = 0; c < m.input_dim; ++c) x[c] = rng.uniform(0.05, 0.95);
    if (!kink_guarded(m, x, guard)) continue;
    if (min_lap > 0.0 && std::abs(sobench::ad::input_laplacian(m, x)) < min_lap) continue;
    return x;
  }
  throw std::runtime_error("no kink-guarded point found");
}

// phi(x) = relu^2(x) + relu^2(-x) = x^2 on the line.
inline sobench::MlpModel square_net_1d() {
  sobench::MlpModel m;
  m.input_dim = 1;
  sobench::Layer hidden;
  hidden.weight.resize(2, 1);
  hidden.weight << 1.0, -1.0;
  hidden.bias = Eigen::VectorXd::Zero(2);
  hidden.act = sobench::ActivationKind::relu_squared;
  sobench::Layer out;
  out.weight.resize(1, 2);
  out.weight << 1.0, 1.0;
  out.bias = Eigen::VectorXd::Zero(1);
  out.act = sobench::ActivationKind::identity;
  m.layers = {hidden, out};
  return m;
}

// phi(x) = x1^2 + x2^2 from four sigma_2 units.
inline sobench::MlpModel sum_of_squares_net_2d() {
  sobench::MlpModel m;
  m.input_dim = 2;
  sobench::Layer hidden;
  hidden.weight.resize(4, 2);
  hidden.weight << 1, 0, -1, 0, 0, 1, 0, -1;
  hidden.bias = Eigen::VectorXd::Zero(4);
  hidden.act = sobench::ActivationKind::relu_squared;
  sobench::Layer out;
  out.weight.resize(1, 4);
  out.weight << 1, 1, 1, 1;
  out.bias = Eigen::VectorXd::Zero(1);
  out.act = sobench::ActivationKind::identity;
  m.layers = {hidden, out};
  return m;
}

// phi(x) = 3 x1 - 2 x2, a single affine layer.
inline sobench::MlpModel affine_net_2d() {
  sobench::MlpModel m;
  m.input_dim = 2;
  sobench::Layer out;
  out.weight.resize(1, 2);
  out.weight << 3.0, -2.0;
  out.bias = Eigen::VectorXd::Zero(1);
  out.act = sobench::ActivationKind::identity;
  m.layers = {out};
  return m;
}

}  // namespace testutil
