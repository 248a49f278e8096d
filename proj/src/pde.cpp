#include "sobench/pde.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "sobench/autodiff.hpp"
#include "sobench/rng.hpp"
#include "sobench/threads.hpp"

namespace sobench::pde {

namespace {

constexpr double kDiskCx = 0.5, kDiskCy = 0.5, kDiskR = 0.5;

Eigen::VectorXd to_dyn(const Eigen::Vector2d& x) {
  Eigen::VectorXd v(2);
  v << x[0], x[1];
  return v;
}

void require_bc(const PdeProblem& prob, BoundaryKind want, const char* who) {
  if (prob.bc != want)
    throw std::invalid_argument(std::string(who) + " requires the " +
                                (want == BoundaryKind::neumann_zero ? "neumann_zero" : "dirichlet_zero") +
                                " boundary condition");
}

// Interior quadrature over the domain (tensor Gauss; Monte Carlo on demand).
double integrate_domain(Domain dom, const QuadratureSpec& spec,
                        const std::function<double(const Eigen::Vector2d&)>& f) {
  if (spec.kind == QuadratureSpec::Kind::monte_carlo) {
    const auto pts = sample_interior(dom, spec.count, spec.seed);
    const double area = dom == Domain::unit_square ? 1.0 : M_PI * kDiskR * kDiskR;
    const double sum = parallel_sum(pts.size(), 1024, [&](std::size_t i) { return f(pts[i]); });
    return area * sum / static_cast<double>(pts.size());
  }
  std::vector<double> nodes, weights;
  gauss_legendre_01(spec.points_per_axis, nodes, weights);
  const std::size_t n = nodes.size();
  if (dom == Domain::unit_square) {
    return parallel_sum(n * n, 512, [&](std::size_t flat) {
      const std::size_t i = flat % n, j = flat / n;
      return weights[i] * weights[j] * f(Eigen::Vector2d(nodes[i], nodes[j]));
    });
  }
  // disk: polar rule, jacobian r
  return parallel_sum(n * n, 512, [&](std::size_t flat) {
    const std::size_t i = flat % n, j = flat / n;
    const double r = kDiskR * nodes[i];
    const double th = 2.0 * M_PI * nodes[j];
    const Eigen::Vector2d x(kDiskCx + r * std::cos(th), kDiskCy + r * std::sin(th));
    return weights[i] * weights[j] * (kDiskR * 2.0 * M_PI) * r * f(x);
  });
}

double boundary_length(Domain dom) { return dom == Domain::unit_square ? 4.0 : 2.0 * M_PI * kDiskR; }

// Arclength integral over the domain boundary.
double integrate_boundary(Domain dom, const QuadratureSpec& spec,
                          const std::function<double(const Eigen::Vector2d&)>& f) {
  std::vector<double> nodes, weights;
  gauss_legendre_01(spec.points_per_axis, nodes, weights);
  double s = 0.0;
  if (dom == Domain::unit_square) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double t = nodes[i], w = weights[i];
      s += w * (f(Eigen::Vector2d(t, 0.0)) + f(Eigen::Vector2d(1.0, t)) +
                f(Eigen::Vector2d(t, 1.0)) + f(Eigen::Vector2d(0.0, t)));
    }
    return s;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double th = 2.0 * M_PI * nodes[i];
    const Eigen::Vector2d x(kDiskCx + kDiskR * std::cos(th), kDiskCy + kDiskR * std::sin(th));
    s += weights[i] * boundary_length(dom) * f(x);
  }
  return s;
}

ScalarField product_sine(double freq) {
  const double w = M_PI * freq;
  ScalarField f;
  f.value = [w](const Eigen::Vector2d& x) { return std::sin(w * x[0]) * std::sin(w * x[1]); };
  f.grad = [w](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(w * std::cos(w * x[0]) * std::sin(w * x[1]),
                           w * std::sin(w * x[0]) * std::cos(w * x[1]));
  };
  f.lap = [w](const Eigen::Vector2d& x) {
    return -2.0 * w * w * std::sin(w * x[0]) * std::sin(w * x[1]);
  };
  return f;
}

ScalarField product_cosine() {
  const double w = M_PI;
  ScalarField f;
  f.value = [w](const Eigen::Vector2d& x) { return std::cos(w * x[0]) * std::cos(w * x[1]); };
  f.grad = [w](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(-w * std::sin(w * x[0]) * std::cos(w * x[1]),
                           -w * std::cos(w * x[0]) * std::sin(w * x[1]));
  };
  f.lap = [w](const Eigen::Vector2d& x) {
    return -2.0 * w * w * std::cos(w * x[0]) * std::cos(w * x[1]);
  };
  return f;
}

}  // namespace

ScalarField field_from_model(const MlpModel& m) {
  auto model = std::make_shared<MlpModel>(m);
  ScalarField f;
  f.value = [model](const Eigen::Vector2d& x) { return ad::eval(*model, to_dyn(x)); };
  f.grad = [model](const Eigen::Vector2d& x) {
    const Eigen::VectorXd g = ad::input_gradient(*model, to_dyn(x));
    return Eigen::Vector2d(g[0], g[1]);
  };
  f.lap = [model](const Eigen::Vector2d& x) { return ad::input_laplacian(*model, to_dyn(x)); };
  return f;
}

ScalarField field_sum(const ScalarField& a, double scale, const ScalarField& b) {
  ScalarField f;
  f.value = [a, scale, b](const Eigen::Vector2d& x) { return a.value(x) + scale * b.value(x); };
  f.grad = [a, scale, b](const Eigen::Vector2d& x) {
    return (a.grad(x) + scale * b.grad(x)).eval();
  };
  f.lap = [a, scale, b](const Eigen::Vector2d& x) { return a.lap(x) + scale * b.lap(x); };
  return f;
}

ScalarField constant_field(double c) {
  ScalarField f;
  f.value = [c](const Eigen::Vector2d&) { return c; };
  f.grad = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  f.lap = [](const Eigen::Vector2d&) { return 0.0; };
  return f;
}

PdeProblem PdeProblem::by_name(const std::string& name) {
  PdeProblem p;
  if (name == "poisson_sin_dirichlet") {
    const ScalarField u = product_sine(1.0);
    p.domain = Domain::unit_square;
    p.bc = BoundaryKind::dirichlet_zero;
    p.exact = u;
    p.rhs = field_sum(constant_field(0.0), 2.0 * M_PI * M_PI, u);  // f = 2 pi^2 u*
    return p;
  }
  if (name == "poisson_cos_neumann") {
    const ScalarField u = product_cosine();
    p.domain = Domain::unit_square;
    p.bc = BoundaryKind::neumann_zero;
    p.exact = u;
    p.rhs = field_sum(constant_field(0.0), 2.0 * M_PI * M_PI, u);
    return p;
  }
  throw std::invalid_argument("unknown PDE problem: " + name);
}

bool contains(Domain dom, const Eigen::Vector2d& x) {
  if (dom == Domain::unit_square)
    return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 && x[1] <= 1.0;
  const double dx = x[0] - kDiskCx, dy = x[1] - kDiskCy;
  return std::sqrt(dx * dx + dy * dy) <= kDiskR + 1e-12;
}

std::vector<Eigen::Vector2d> sample_interior(Domain dom, std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("interior sample count must be >= 1");
  Rng rng(seed);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    if (dom == Domain::unit_square) {
      pts.emplace_back(rng.uniform01(), rng.uniform01());
    } else {
      // area-uniform in the disk
      const double r = kDiskR * std::sqrt(rng.uniform01());
      const double th = 2.0 * M_PI * rng.uniform01();
      pts.emplace_back(kDiskCx + r * std::cos(th), kDiskCy + r * std::sin(th));
    }
  }
  return pts;
}

std::vector<Eigen::Vector2d> sample_boundary(Domain dom, std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("boundary sample count must be >= 1");
  Rng rng(seed);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    if (dom == Domain::unit_square) {
      // perimeter-uniform: position along the unrolled perimeter of length 4
      const double s = 4.0 * rng.uniform01();
      if (s < 1.0)
        pts.emplace_back(s, 0.0);
      else if (s < 2.0)
        pts.emplace_back(1.0, s - 1.0);
      else if (s < 3.0)
        pts.emplace_back(3.0 - s, 1.0);
      else
        pts.emplace_back(0.0, 4.0 - s);
    } else {
      const double th = 2.0 * M_PI * rng.uniform01();
      pts.emplace_back(kDiskCx + kDiskR * std::cos(th), kDiskCy + kDiskR * std::sin(th));
    }
  }
  return pts;
}

double ritz_empirical(const ScalarField& phi, const PdeProblem& prob, const SamplePlan& plan,
                      bool half_interior_norm) {
  require_bc(prob, BoundaryKind::neumann_zero, "ritz loss");
  const auto xs = sample_interior(prob.domain, plan.m1, plan.seed);
  const auto ys = sample_boundary(prob.domain, plan.m2, Rng::mix(plan.seed, 0xb0));
  const double interior = parallel_sum(xs.size(), 512, [&](std::size_t i) {
    const Eigen::Vector2d& x = xs[i];
    return 0.5 * phi.grad(x).squaredNorm() - prob.rhs.value(x) * phi.value(x);
  });
  const double bmean = parallel_sum(ys.size(), 512, [&](std::size_t i) { return phi.value(ys[i]); }) /
                       static_cast<double>(ys.size());
  const double norm = half_interior_norm ? 2.0 : 1.0;
  return interior / (norm * static_cast<double>(xs.size())) + bmean * bmean;
}

double ritz_empirical(const MlpModel& m, const PdeProblem& prob, const SamplePlan& plan,
                      bool half_interior_norm) {
  return ritz_empirical(field_from_model(m), prob, plan, half_interior_norm);
}

double ritz_continuous(const ScalarField& phi, const PdeProblem& prob, const QuadratureSpec& spec) {
  require_bc(prob, BoundaryKind::neumann_zero, "ritz loss");
  const double interior = integrate_domain(prob.domain, spec, [&](const Eigen::Vector2d& x) {
    return 0.5 * phi.grad(x).squaredNorm() - prob.rhs.value(x) * phi.value(x);
  });
  const double bmean =
      integrate_boundary(prob.domain, spec, phi.value) / boundary_length(prob.domain);
  return interior + bmean * bmean;
}

double ritz_continuous(const MlpModel& m, const PdeProblem& prob, const QuadratureSpec& spec) {
  return ritz_continuous(field_from_model(m), prob, spec);
}

double pinn_empirical(const ScalarField& phi, const PdeProblem& prob, const SamplePlan& plan) {
  require_bc(prob, BoundaryKind::dirichlet_zero, "pinn loss");
  const auto xs = sample_interior(prob.domain, plan.m1, plan.seed);
  const auto ys = sample_boundary(prob.domain, plan.m2, Rng::mix(plan.seed, 0xb0));
  const double interior = parallel_sum(xs.size(), 512, [&](std::size_t i) {
    const double r = phi.lap(xs[i]) + prob.rhs.value(xs[i]);
    return r * r;
  });
  const double boundary = parallel_sum(ys.size(), 512, [&](std::size_t i) {
    const double v = phi.value(ys[i]);
    return v * v;
  });
  return interior / static_cast<double>(xs.size()) +
         prob.lambda * boundary / static_cast<double>(ys.size());
}

double pinn_empirical(const MlpModel& m, const PdeProblem& prob, const SamplePlan& plan) {
  return pinn_empirical(field_from_model(m), prob, plan);
}

double pinn_continuous(const ScalarField& phi, const PdeProblem& prob, const QuadratureSpec& spec) {
  require_bc(prob, BoundaryKind::dirichlet_zero, "pinn loss");
  const double interior = integrate_domain(prob.domain, spec, [&](const Eigen::Vector2d& x) {
    const double r = phi.lap(x) + prob.rhs.value(x);
    return r * r;
  });
  // arclength mean, the quantity the boundary-point estimator targets
  const double boundary = integrate_boundary(prob.domain, spec, [&](const Eigen::Vector2d& x) {
    const double v = phi.value(x);
    return v * v;
  }) / boundary_length(prob.domain);
  return interior + prob.lambda * boundary;
}

double pinn_continuous(const MlpModel& m, const PdeProblem& prob, const QuadratureSpec& spec) {
  return pinn_continuous(field_from_model(m), prob, spec);
}

double solution_error(const ScalarField& phi, const PdeProblem& prob, ErrorNorm norm,
                      const QuadratureSpec& spec) {
  if (!prob.exact) throw std::invalid_argument("solution_error needs a manufactured exact solution");
  const ScalarField diff = field_sum(phi, -1.0, *prob.exact);
  double sq = integrate_domain(prob.domain, spec, [&](const Eigen::Vector2d& x) {
    const double v = diff.value(x);
    return v * v;
  });
  if (norm != ErrorNorm::L2)
    sq += integrate_domain(prob.domain, spec,
                           [&](const Eigen::Vector2d& x) { return diff.grad(x).squaredNorm(); });
  if (norm == ErrorNorm::H2)
    sq += integrate_domain(prob.domain, spec, [&](const Eigen::Vector2d& x) {
      const double l = diff.lap(x);
      return l * l;
    });
  return std::sqrt(sq);
}

double solution_error(const MlpModel& m, const PdeProblem& prob, ErrorNorm norm,
                      const QuadratureSpec& spec) {
  return solution_error(field_from_model(m), prob, norm, spec);
}

namespace {

// Per-sample tape gradients for the two empirical losses. Each chunk owns a
// tape; results are combined in chunk order.
struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

LossGrad pinn_loss_gradient(const MlpModel& m, const PdeProblem& prob,
                            const std::vector<Eigen::Vector2d>& xs,
                            const std::vector<std::size_t>* subset,
                            const std::vector<Eigen::Vector2d>& ys) {
  const std::int64_t P = param_count(m);
  const std::size_t n_int = subset ? subset->size() : xs.size();
  const std::size_t chunk = 256;

  const std::size_t ci = (n_int + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> gi(ci);
  std::vector<double> li(ci, 0.0);
  parallel_chunks(n_int, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    ad::Tape tape;
    tape.reserve(16384);
    ad::TapedModel tm = ad::register_params(tape, m);
    const std::size_t np = tape.size();
    ad::JetWorkspace<ad::Var> wk;
    std::vector<double> adj;
    gi[c] = Eigen::VectorXd::Zero(P);
    for (std::size_t t = b; t < e; ++t) {
      const Eigen::Vector2d& x = xs[subset ? (*subset)[t] : t];
      tape.rewind(np);
      ad::TapedJet jet = ad::taped_laplacian(tape, tm, to_dyn(x), wk);
      ad::Var res = jet.lap + prob.rhs.value(x);
      ad::Var loss = ad::square(res);
      li[c] += tape.value(loss);
      tape.gradient(loss, adj);
      for (std::int64_t p = 0; p < P; ++p) gi[c][p] += adj[static_cast<std::size_t>(p)];
    }
  });

  const std::size_t cb = (ys.size() + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> gb(cb);
  std::vector<double> lb(cb, 0.0);
  parallel_chunks(ys.size(), chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    ad::Tape tape;
    tape.reserve(8192);
    ad::TapedModel tm = ad::register_params(tape, m);
    const std::size_t np = tape.size();
    ad::JetWorkspace<ad::Var> wk;
    std::vector<double> adj;
    gb[c] = Eigen::VectorXd::Zero(P);
    for (std::size_t t = b; t < e; ++t) {
      tape.rewind(np);
      ad::Var v = ad::taped_value(tape, tm, to_dyn(ys[t]), wk);
      ad::Var loss = ad::square(v);
      lb[c] += tape.value(loss);
      tape.gradient(loss, adj);
      for (std::int64_t p = 0; p < P; ++p) gb[c][p] += adj[static_cast<std::size_t>(p)];
    }
  });

  LossGrad out;
  out.grad = Eigen::VectorXd::Zero(P);
  double loss_i = 0.0, loss_b = 0.0;
  Eigen::VectorXd grad_i = Eigen::VectorXd::Zero(P), grad_b = Eigen::VectorXd::Zero(P);
  for (std::size_t c = 0; c < ci; ++c) {
    loss_i += li[c];
    grad_i += gi[c];
  }
  for (std::size_t c = 0; c < cb; ++c) {
    loss_b += lb[c];
    grad_b += gb[c];
  }
  const double m1 = static_cast<double>(n_int), m2 = static_cast<double>(ys.size());
  out.loss = loss_i / m1 + prob.lambda * loss_b / m2;
  out.grad = grad_i / m1 + (prob.lambda / m2) * grad_b;
  return out;
}

LossGrad ritz_loss_gradient(const MlpModel& m, const PdeProblem& prob,
                            const std::vector<Eigen::Vector2d>& xs,
                            const std::vector<std::size_t>* subset,
                            const std::vector<Eigen::Vector2d>& ys) {
  const std::int64_t P = param_count(m);
  const std::size_t n_int = subset ? subset->size() : xs.size();
  const std::size_t chunk = 256;

  const std::size_t ci = (n_int + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> gi(ci);
  std::vector<double> li(ci, 0.0);
  parallel_chunks(n_int, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    ad::Tape tape;
    tape.reserve(16384);
    ad::TapedModel tm = ad::register_params(tape, m);
    const std::size_t np = tape.size();
    ad::JetWorkspace<ad::Var> wk;
    std::vector<double> adj;
    gi[c] = Eigen::VectorXd::Zero(P);
    for (std::size_t t = b; t < e; ++t) {
      const Eigen::Vector2d& x = xs[subset ? (*subset)[t] : t];
      tape.rewind(np);
      ad::TapedJet jet = ad::taped_gradient(tape, tm, to_dyn(x), wk);
      ad::Var gn2 = ad::square(jet.grad[0]);
      for (std::size_t cidx = 1; cidx < jet.grad.size(); ++cidx)
        gn2 = gn2 + ad::square(jet.grad[cidx]);
      ad::Var g = 0.5 * gn2 - prob.rhs.value(x) * jet.value;
      li[c] += tape.value(g);
      tape.gradient(g, adj);
      for (std::int64_t p = 0; p < P; ++p) gi[c][p] += adj[static_cast<std::size_t>(p)];
    }
  });

  // boundary mean first, then the chain rule through the square
  const double bmean = parallel_sum(ys.size(), 512, [&](std::size_t i) {
    return ad::eval(m, to_dyn(ys[i]));
  }) / static_cast<double>(ys.size());

  const std::size_t cb = (ys.size() + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> gb(cb);
  parallel_chunks(ys.size(), chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    ad::Tape tape;
    tape.reserve(8192);
    ad::TapedModel tm = ad::register_params(tape, m);
    const std::size_t np = tape.size();
    ad::JetWorkspace<ad::Var> wk;
    std::vector<double> adj;
    gb[c] = Eigen::VectorXd::Zero(P);
    for (std::size_t t = b; t < e; ++t) {
      tape.rewind(np);
      ad::Var v = ad::taped_value(tape, tm, to_dyn(ys[t]), wk);
      tape.gradient(v, adj);
      for (std::int64_t p = 0; p < P; ++p) gb[c][p] += adj[static_cast<std::size_t>(p)];
    }
  });

  LossGrad out;
  double loss_i = 0.0;
  Eigen::VectorXd grad_i = Eigen::VectorXd::Zero(P), grad_b = Eigen::VectorXd::Zero(P);
  for (std::size_t c = 0; c < ci; ++c) {
    loss_i += li[c];
    grad_i += gi[c];
  }
  for (std::size_t c = 0; c < cb; ++c) grad_b += gb[c];
  const double m1 = static_cast<double>(n_int), m2 = static_cast<double>(ys.size());
  out.loss = loss_i / m1 + bmean * bmean;
  out.grad = grad_i / m1 + (2.0 * bmean / m2) * grad_b;
  return out;
}

}  // namespace

PdeTrainResult train_pde(const MlpModel& init, const PdeProblem& prob, const SamplePlan& plan,
                         PdeMethod method, const TrainConfig& config) {
  if (config.step <= 0.0) throw std::invalid_argument("step size must be positive");
  if (method == PdeMethod::pinn)
    require_bc(prob, BoundaryKind::dirichlet_zero, "pinn training");
  else
    require_bc(prob, BoundaryKind::neumann_zero, "ritz training");

  const auto xs = sample_interior(prob.domain, plan.m1, plan.seed);
  const auto ys = sample_boundary(prob.domain, plan.m2, Rng::mix(plan.seed, 0xb0));

  const std::size_t M = xs.size();
  int batch = config.batch;
  if (batch == 0) batch = M < 4096 ? static_cast<int>(M) : 1024;
  batch = std::min<int>(batch, static_cast<int>(M));
  const bool full_batch = static_cast<std::size_t>(batch) == M;

  PdeTrainResult result;
  result.model = init;
  MlpModel current = init;
  Eigen::VectorXd theta = flatten_params(current);
  AdamState adam(theta.size());
  Rng rng(Rng::mix(config.seed, 0x7a));
  std::vector<std::size_t> index(static_cast<std::size_t>(batch));

  auto full_loss = [&](const MlpModel& mm) {
    return method == PdeMethod::pinn ? pinn_empirical(mm, prob, plan)
                                     : ritz_empirical(mm, prob, plan);
  };

  double best = full_loss(current);
  result.final_loss = best;
  result.trace.reserve(static_cast<std::size_t>(config.iters));

  for (int it = 0; it < config.iters; ++it) {
    LossGrad lg;
    const std::vector<std::size_t>* subset = nullptr;
    if (!full_batch) {
      for (auto& id : index) id = static_cast<std::size_t>(rng.next_u64() % M);
      subset = &index;
    }
    lg = method == PdeMethod::pinn ? pinn_loss_gradient(current, prob, xs, subset, ys)
                                   : ritz_loss_gradient(current, prob, xs, subset, ys);
    result.trace.push_back(lg.loss);
    if (!std::isfinite(lg.loss)) {
      result.diverged_at = it;
      break;
    }
    if (full_batch) {
      if (lg.loss < best) {
        best = lg.loss;
        result.model = current;
      }
    } else if (it % config.full_eval_every == 0) {
      const double l = full_loss(current);
      if (l < best) {
        best = l;
        result.model = current;
      }
    }
    adam.step(theta, lg.grad, config);
    unflatten_params(current, theta);
  }
  if (!result.diverged_at) {
    const double l = full_loss(current);
    if (l < best) {
      best = l;
      result.model = current;
    }
  }
  result.final_loss = best;
  return result;
}

}  // namespace sobench::pde
