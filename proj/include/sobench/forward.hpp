#pragma once

#include <vector>

#include "sobench/model.hpp"
#include "sobench/tape.hpp"

namespace sobench::ad {

/// Model parameters registered as leaves on a tape, laid out exactly like
/// flatten_params: per layer, weight row-major, then bias. The leaves occupy
/// tape positions [0, param_count) when registered on a fresh tape, so a
/// reverse sweep's first entries are the parameter gradient.
struct TapedModel {
  const MlpModel* shape = nullptr;
  std::vector<std::vector<Var>> w;  // per layer, row-major
  std::vector<std::vector<Var>> b;

  Var weight(std::size_t l, int i, int j) const {
    return w[l][static_cast<std::size_t>(i) * shape->layers[l].weight.cols() + j];
  }
  Var bias(std::size_t l, int i) const { return b[l][static_cast<std::size_t>(i)]; }
};

TapedModel register_params(Tape& tape, const MlpModel& m);

// Weight accessors letting one kernel serve both the plain and the taped
// evaluation paths.
struct PlainWeights {
  const MlpModel* m;
  double weight(std::size_t l, int i, int j) const { return m->layers[l].weight(i, j); }
  double bias(std::size_t l, int i) const { return m->layers[l].bias(i); }
};

struct TapedWeights {
  const TapedModel* tm;
  Var weight(std::size_t l, int i, int j) const { return tm->weight(l, i, j); }
  Var bias(std::size_t l, int i) const { return tm->bias(l, i); }
};

/// Scratch buffers for the layer sweeps; reuse across calls to avoid churn.
template <class S>
struct JetWorkspace {
  std::vector<S> a, za;      // activations, next activations
  std::vector<S> g, zg;      // input Jacobian rows, row-major (unit, coord)
  std::vector<S> lap, zlap;  // per-unit Laplacian traces
};

namespace detail {

// zero / one of the scalar type, in terms of an exemplar carrying the tape.
inline double like_const(double, double c) { return c; }
inline Var like_const(Var x, double c) { return x.tape->leaf(c); }

}  // namespace detail

/// Forward value sweep: the layer recursion h_i = W_i h~_{i-1} + b_i.
template <class S, class W>
S forward_value(const MlpModel& m, const W& ws, const S* x, JetWorkspace<S>& wk) {
  const int d = m.input_dim;
  wk.a.assign(x, x + d);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const int rows = static_cast<int>(m.layers[l].weight.rows());
    const int cols = static_cast<int>(m.layers[l].weight.cols());
    wk.za.clear();
    for (int i = 0; i < rows; ++i) {
      S z = ws.bias(l, i);
      for (int j = 0; j < cols; ++j) z = z + ws.weight(l, i, j) * wk.a[static_cast<std::size_t>(j)];
      wk.za.push_back(act_value(m.layers[l].act, z));
    }
    wk.a.swap(wk.za);
  }
  return wk.a[0];
}

/// Forward sweep carrying the input Jacobian: J_l = diag(act'(z_l)) W_l J_{l-1}.
/// Fills grad_out with the d components of the network's input gradient.
template <class S, class W>
S forward_gradient(const MlpModel& m, const W& ws, const S* x, std::vector<S>& grad_out,
                   JetWorkspace<S>& wk) {
  const int d = m.input_dim;
  wk.a.assign(x, x + d);
  wk.g.clear();
  bool have_jac = false;  // layer-1 Jacobian is just the weight matrix
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const int rows = static_cast<int>(m.layers[l].weight.rows());
    const int cols = static_cast<int>(m.layers[l].weight.cols());
    const ActivationKind act = m.layers[l].act;
    wk.za.clear();
    wk.zg.clear();
    for (int i = 0; i < rows; ++i) {
      S z = ws.bias(l, i);
      for (int j = 0; j < cols; ++j) z = z + ws.weight(l, i, j) * wk.a[static_cast<std::size_t>(j)];
      // dz/dx_c
      for (int c = 0; c < d; ++c) {
        if (!have_jac) {
          wk.zg.push_back(ws.weight(l, i, c));
        } else {
          S gz = ws.weight(l, i, 0) * wk.g[static_cast<std::size_t>(0) * d + c];
          for (int j = 1; j < cols; ++j)
            gz = gz + ws.weight(l, i, j) * wk.g[static_cast<std::size_t>(j) * d + c];
          wk.zg.push_back(gz);
        }
      }
      if (act == ActivationKind::identity) {
        wk.za.push_back(z);
      } else {
        const S p = act_prime(act, z);
        wk.za.push_back(act_value(act, z));
        for (int c = 0; c < d; ++c) {
          S& gz = wk.zg[static_cast<std::size_t>(i) * d + c];
          gz = p * gz;
        }
      }
    }
    wk.a.swap(wk.za);
    wk.g.swap(wk.zg);
    have_jac = true;
  }
  grad_out.assign(wk.g.begin(), wk.g.begin() + d);
  return wk.a[0];
}

/// Forward sweep carrying Jacobian and Laplacian trace:
///   t_l = act''(z_l) .* rowsq(W_l J_{l-1}) + act'(z_l) .* (W_l t_{l-1}).
/// Returns the value; fills grad_out and lap_out.
template <class S, class W>
S forward_laplacian(const MlpModel& m, const W& ws, const S* x, std::vector<S>& grad_out,
                    S& lap_out, JetWorkspace<S>& wk) {
  const int d = m.input_dim;
  wk.a.assign(x, x + d);
  wk.g.clear();
  wk.lap.clear();
  bool have_jac = false;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const int rows = static_cast<int>(m.layers[l].weight.rows());
    const int cols = static_cast<int>(m.layers[l].weight.cols());
    const ActivationKind act = m.layers[l].act;
    wk.za.clear();
    wk.zg.clear();
    wk.zlap.clear();
    for (int i = 0; i < rows; ++i) {
      S z = ws.bias(l, i);
      for (int j = 0; j < cols; ++j) z = z + ws.weight(l, i, j) * wk.a[static_cast<std::size_t>(j)];
      const std::size_t gi = static_cast<std::size_t>(i) * d;
      for (int c = 0; c < d; ++c) {
        if (!have_jac) {
          wk.zg.push_back(ws.weight(l, i, c));
        } else {
          S gz = ws.weight(l, i, 0) * wk.g[0 * static_cast<std::size_t>(d) + c];
          for (int j = 1; j < cols; ++j)
            gz = gz + ws.weight(l, i, j) * wk.g[static_cast<std::size_t>(j) * d + c];
          wk.zg.push_back(gz);
        }
      }
      S lz = detail::like_const(z, 0.0);
      if (have_jac) {
        lz = ws.weight(l, i, 0) * wk.lap[0];
        for (int j = 1; j < cols; ++j) lz = lz + ws.weight(l, i, j) * wk.lap[static_cast<std::size_t>(j)];
      }
      if (act == ActivationKind::identity) {
        wk.za.push_back(z);
        wk.zlap.push_back(lz);
      } else {
        const S p = act_prime(act, z);
        wk.za.push_back(act_value(act, z));
        S la = p * lz;
        if (!act_curvature_free(act)) {
          S gnorm2 = wk.zg[gi] * wk.zg[gi];
          for (int c = 1; c < d; ++c) gnorm2 = gnorm2 + wk.zg[gi + c] * wk.zg[gi + c];
          la = la + act_second(act, z) * gnorm2;
        }
        wk.zlap.push_back(la);
        for (int c = 0; c < d; ++c) {
          S& gz = wk.zg[gi + c];
          gz = p * gz;
        }
      }
    }
    wk.a.swap(wk.za);
    wk.g.swap(wk.zg);
    wk.lap.swap(wk.zlap);
    have_jac = true;
  }
  grad_out.assign(wk.g.begin(), wk.g.begin() + d);
  lap_out = wk.lap[0];
  return wk.a[0];
}

}  // namespace sobench::ad
