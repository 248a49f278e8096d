#include "sobench/train.hpp"

#include <cmath>

#include "sobench/autodiff.hpp"
#include "sobench/rng.hpp"
#include "sobench/threads.hpp"

namespace sobench {

namespace {

// Buffers for the batched dense sweep, reused across iterations so the hot
// minibatch loop stays allocation-free once warm.
struct DenseSweep {
  std::vector<Eigen::MatrixXd> act, pre, delta, dW;
  Eigen::VectorXd residual;
};

// Batched value-loss gradient: forward/backward over the whole batch with
// dense matrix products. X is d x M, y is M.
double mse_gradient_batched(const MlpModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            Eigen::VectorXd& grad, DenseSweep& ws) {
  const Eigen::Index M = X.cols();
  const std::size_t L = m.layers.size();
  ws.act.resize(L + 1);
  ws.pre.resize(L);
  ws.delta.resize(L);
  ws.dW.resize(L);
  ws.act[0] = X;
  for (std::size_t l = 0; l < L; ++l) {
    const Layer& layer = m.layers[l];
    ws.pre[l].resize(layer.weight.rows(), M);
    ws.pre[l].noalias() = layer.weight * ws.act[l];
    ws.pre[l].colwise() += layer.bias;
    if (layer.act == ActivationKind::identity) {
      ws.act[l + 1] = ws.pre[l];
    } else {
      ws.act[l + 1].resizeLike(ws.pre[l]);
      const Eigen::MatrixXd& z = ws.pre[l];
      Eigen::MatrixXd& a = ws.act[l + 1];
      for (Eigen::Index j = 0; j < z.size(); ++j) a(j) = act_value(layer.act, z(j));
    }
  }
  ws.residual = ws.act[L].row(0).transpose() - y;
  const double loss = ws.residual.squaredNorm() / static_cast<double>(M);

  grad.resize(param_count(m));
  ws.delta[L - 1].resize(1, M);
  ws.delta[L - 1].noalias() = (2.0 / static_cast<double>(M)) * ws.residual.transpose();
  Eigen::Index tail = grad.size();
  for (std::size_t l = L; l-- > 0;) {
    const Layer& layer = m.layers[l];
    const Eigen::Index rows = layer.weight.rows(), cols = layer.weight.cols();
    tail -= rows * cols + rows;
    Eigen::MatrixXd& delta = ws.delta[l];
    ws.dW[l].resize(rows, cols);
    ws.dW[l].noalias() = delta * ws.act[l].transpose();
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) grad[tail + i * cols + j] = ws.dW[l](i, j);
    grad.segment(tail + rows * cols, rows) = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd& next = ws.delta[l - 1];
      next.resize(layer.weight.cols(), M);
      next.noalias() = layer.weight.transpose() * delta;
      const Eigen::MatrixXd& z = ws.pre[l - 1];
      for (Eigen::Index j = 0; j < next.size(); ++j) next(j) *= act_prime(m.layers[l - 1].act, z(j));
    }
  }
  return loss;
}

// Per-sample tape gradient of h_k summed over [begin, end); adds into grad.
double tape_risk_gradient_chunk(const MlpModel& m, const std::vector<SobolevSample>& samples,
                                const std::vector<std::size_t>* index, std::size_t begin,
                                std::size_t end, int k, Eigen::VectorXd& grad) {
  ad::Tape tape;
  tape.reserve(16384);
  ad::TapedModel tm = ad::register_params(tape, m);
  const std::size_t n_params = tape.size();
  ad::JetWorkspace<ad::Var> wk;
  std::vector<double> adj;
  double loss_sum = 0.0;
  for (std::size_t it = begin; it < end; ++it) {
    const SobolevSample& s = samples[index ? (*index)[it] : it];
    tape.rewind(n_params);
    ad::Var loss{};
    if (k == 0) {
      ad::Var v = ad::taped_value(tape, tm, s.x, wk);
      loss = ad::square(v - s.value);
    } else if (k == 1) {
      if (!s.grad) throw std::invalid_argument("h_1 needs the sample field 'grad'");
      ad::TapedJet jet = ad::taped_gradient(tape, tm, s.x, wk);
      loss = ad::square(jet.value - s.value);
      for (std::size_t c = 0; c < jet.grad.size(); ++c)
        loss = loss + ad::square(jet.grad[c] - (*s.grad)[static_cast<Eigen::Index>(c)]);
    } else {
      if (!s.lap) throw std::invalid_argument("h_2 needs the sample field 'lap'");
      ad::TapedJet jet = ad::taped_laplacian(tape, tm, s.x, wk);
      loss = ad::square(jet.value - s.value) + ad::square(jet.lap - *s.lap);
    }
    loss_sum += tape.value(loss);
    tape.gradient(loss, adj);
    for (std::size_t p = 0; p < n_params; ++p) grad[static_cast<Eigen::Index>(p)] += adj[p];
  }
  return loss_sum;
}

struct RiskWork {
  DenseSweep sweep;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Mean h_k gradient over an index subset (or all samples when index == null).
double risk_gradient(const MlpModel& m, const std::vector<SobolevSample>& samples,
                     const std::vector<std::size_t>* index, int k, Eigen::VectorXd& grad,
                     RiskWork& work) {
  const std::size_t n = index ? index->size() : samples.size();
  if (n == 0) throw std::invalid_argument("risk gradient over an empty sample set");

  if (k == 0) {
    const int d = m.input_dim;
    work.X.resize(d, static_cast<Eigen::Index>(n));
    work.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const SobolevSample& s = samples[index ? (*index)[i] : i];
      work.X.col(static_cast<Eigen::Index>(i)) = s.x;
      work.y[static_cast<Eigen::Index>(i)] = s.value;
    }
    return mse_gradient_batched(m, work.X, work.y, grad, work.sweep);
  }

  const std::size_t chunk = 256;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> partial_grad(n_chunks);
  std::vector<double> partial_loss(n_chunks, 0.0);
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    partial_grad[c] = Eigen::VectorXd::Zero(param_count(m));
    partial_loss[c] = tape_risk_gradient_chunk(m, samples, index, b, e, k, partial_grad[c]);
  });
  grad = Eigen::VectorXd::Zero(param_count(m));
  double loss = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    grad += partial_grad[c];
    loss += partial_loss[c];
  }
  grad /= static_cast<double>(n);
  return loss / static_cast<double>(n);
}

}  // namespace

double empirical_risk_gradient(const MlpModel& m, const std::vector<SobolevSample>& samples,
                               int k, Eigen::VectorXd& grad) {
  RiskWork work;
  return risk_gradient(m, samples, nullptr, k, grad, work);
}

TrainResult train(const MlpModel& init, const std::vector<SobolevSample>& samples,
                  const TrainConfig& config) {
  if (config.step <= 0.0) throw std::invalid_argument("step size must be positive");
  if (config.iters < 0) throw std::invalid_argument("iteration budget must be >= 0");
  if (samples.empty()) throw std::invalid_argument("training needs at least one sample");

  const std::size_t M = samples.size();
  int batch = config.batch;
  if (batch == 0) batch = M < 4096 ? static_cast<int>(M) : 1024;
  batch = std::min<int>(batch, static_cast<int>(M));
  const bool full_batch = static_cast<std::size_t>(batch) == M;

  TrainResult result;
  result.model = init;
  result.trace.reserve(static_cast<std::size_t>(config.iters));

  MlpModel current = init;
  Eigen::VectorXd theta = flatten_params(current);
  AdamState adam(theta.size());
  Rng rng(config.seed);

  double best_risk = empirical_risk(current, samples, config.k).value;
  result.final_risk = best_risk;
  if (config.iters == 0) return result;

  Eigen::VectorXd grad;
  std::vector<std::size_t> index(static_cast<std::size_t>(batch));
  RiskWork work;

  for (int it = 0; it < config.iters; ++it) {
    double loss;
    if (full_batch) {
      loss = risk_gradient(current, samples, nullptr, config.k, grad, work);
    } else {
      for (auto& id : index) id = static_cast<std::size_t>(rng.next_u64() % M);
      loss = risk_gradient(current, samples, &index, config.k, grad, work);
    }
    result.trace.push_back(loss);
    if (!std::isfinite(loss)) {
      result.diverged_at = it;
      break;
    }

    if (full_batch) {
      // pre-update loss equals the empirical risk of the current iterate
      if (loss < best_risk) {
        best_risk = loss;
        result.model = current;
      }
    } else if (it % config.full_eval_every == 0) {
      const double risk = empirical_risk(current, samples, config.k).value;
      if (risk < best_risk) {
        best_risk = risk;
        result.model = current;
      }
    }

    adam.step(theta, grad, config);
    unflatten_params(current, theta);
  }

  if (!result.diverged_at) {
    const double risk = empirical_risk(current, samples, config.k).value;
    if (risk < best_risk) {
      best_risk = risk;
      result.model = current;
    }
  }
  result.final_risk = best_risk;
  return result;
}

}  // namespace sobench
