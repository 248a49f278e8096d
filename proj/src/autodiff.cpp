#include "sobench/autodiff.hpp"

#include <stdexcept>

namespace sobench::ad {

namespace {

void check_shape(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != m.input_dim)
    throw std::invalid_argument("input has dimension " + std::to_string(x.size()) +
                                ", model expects " + std::to_string(m.input_dim));
}

}  // namespace

double eval(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_shape(m, x);
  // Dense fast path: the same recursion as forward_value, in Eigen.
  Eigen::VectorXd a = x;
  for (const Layer& l : m.layers) {
    Eigen::VectorXd z = l.weight * a + l.bias;
    if (l.act == ActivationKind::identity) {
      a = std::move(z);
    } else {
      a.resize(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) a[i] = act_value(l.act, z[i]);
    }
  }
  return a[0];
}

Eigen::VectorXd input_gradient(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_shape(m, x);
  JetWorkspace<double> wk;
  std::vector<double> grad;
  PlainWeights ws{&m};
  forward_gradient(m, ws, x.data(), grad, wk);
  return Eigen::Map<Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
}

Eigen::VectorXd input_gradient_reverse(const MlpModel& m,
                                       const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_shape(m, x);
  Tape tape;
  std::vector<Var> xs;
  xs.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) xs.push_back(tape.leaf(x[i]));

  // Parameters enter as plain constants folded into the op partials.
  std::vector<Var> a = xs, za;
  for (const Layer& l : m.layers) {
    za.clear();
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      Var z = tape.leaf(l.bias(i));
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j)
        z = z + l.weight(i, j) * a[static_cast<std::size_t>(j)];
      za.push_back(act_value(l.act, z));
    }
    a.swap(za);
  }
  std::vector<double> adj;
  tape.gradient(a[0], adj);
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = adj[static_cast<std::size_t>(xs[static_cast<std::size_t>(i)].id)];
  return g;
}

double input_laplacian(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_shape(m, x);
  JetWorkspace<double> wk;
  std::vector<double> grad;
  double lap = 0.0;
  PlainWeights ws{&m};
  forward_laplacian(m, ws, x.data(), grad, lap, wk);
  return lap;
}

Dual2<double> directional(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& dir) {
  check_shape(m, x);
  std::vector<Dual2<double>> a, za;
  a.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back({x[i], dir[i], 0.0});
  for (const Layer& l : m.layers) {
    za.clear();
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      Dual2<double> z{l.bias(i), 0.0, 0.0};
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j)
        z = z + l.weight(i, j) * a[static_cast<std::size_t>(j)];
      za.push_back(activate(l.act, z));
    }
    a.swap(za);
  }
  return a[0];
}

TapedModel register_params(Tape& tape, const MlpModel& m) {
  TapedModel tm;
  tm.shape = &m;
  tm.w.resize(m.layers.size());
  tm.b.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const Layer& layer = m.layers[l];
    auto& wv = tm.w[l];
    wv.reserve(static_cast<std::size_t>(layer.weight.size()));
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) wv.push_back(tape.leaf(layer.weight(i, j)));
    auto& bv = tm.b[l];
    bv.reserve(static_cast<std::size_t>(layer.bias.size()));
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) bv.push_back(tape.leaf(layer.bias(i)));
  }
  return tm;
}

Eigen::VectorXd param_gradient(const MlpModel& m, const LossBuilder& build_loss) {
  Tape tape;
  tape.reserve(4096);
  TapedModel tm = register_params(tape, m);
  Var loss = build_loss(tape, tm);
  if (!loss.valid() || loss.tape != &tape)
    throw std::invalid_argument("loss builder must return a scalar recorded on the given tape");
  std::vector<double> adj;
  tape.gradient(loss, adj);
  const std::int64_t p = param_count(m);
  Eigen::VectorXd g(p);
  for (std::int64_t i = 0; i < p; ++i) g[i] = adj[static_cast<std::size_t>(i)];
  return g;
}

Var taped_value(Tape& tape, const TapedModel& tm, const Eigen::Ref<const Eigen::VectorXd>& x,
                JetWorkspace<Var>& wk) {
  check_shape(*tm.shape, x);
  std::vector<Var> xs;
  xs.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) xs.push_back(tape.leaf(x[i]));
  TapedWeights ws{&tm};
  return forward_value(*tm.shape, ws, xs.data(), wk);
}

Var taped_value(Tape& tape, const TapedModel& tm, const Eigen::Ref<const Eigen::VectorXd>& x) {
  JetWorkspace<Var> wk;
  return taped_value(tape, tm, x, wk);
}

TapedJet taped_gradient(Tape& tape, const TapedModel& tm,
                        const Eigen::Ref<const Eigen::VectorXd>& x, JetWorkspace<Var>& wk) {
  check_shape(*tm.shape, x);
  std::vector<Var> xs;
  xs.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) xs.push_back(tape.leaf(x[i]));
  TapedWeights ws{&tm};
  TapedJet jet;
  jet.value = forward_gradient(*tm.shape, ws, xs.data(), jet.grad, wk);
  jet.lap = Var{};
  return jet;
}

TapedJet taped_laplacian(Tape& tape, const TapedModel& tm,
                         const Eigen::Ref<const Eigen::VectorXd>& x, JetWorkspace<Var>& wk) {
  check_shape(*tm.shape, x);
  std::vector<Var> xs;
  xs.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) xs.push_back(tape.leaf(x[i]));
  TapedWeights ws{&tm};
  TapedJet jet;
  jet.value = forward_laplacian(*tm.shape, ws, xs.data(), jet.grad, jet.lap, wk);
  return jet;
}

}  // namespace sobench::ad
