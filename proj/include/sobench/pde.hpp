#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sobench/model.hpp"
#include "sobench/quadrature.hpp"
#include "sobench/train.hpp"

namespace sobench::pde {

/// A function on the plane with the derivatives the losses need.
struct ScalarField {
  std::function<double(const Eigen::Vector2d&)> value;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> grad;
  std::function<double(const Eigen::Vector2d&)> lap;
};

ScalarField field_from_model(const MlpModel& m);
ScalarField field_sum(const ScalarField& a, double scale, const ScalarField& b);  // a + scale*b
ScalarField constant_field(double c);

enum class Domain { unit_square, unit_disk_in_square };
enum class BoundaryKind { dirichlet_zero, neumann_zero };

/// Poisson problem -lap u = f on the domain, with the boundary condition and
/// (for PINN) the boundary penalty lambda.
struct PdeProblem {
  Domain domain = Domain::unit_square;
  ScalarField rhs;
  BoundaryKind bc = BoundaryKind::dirichlet_zero;
  double lambda = 100.0;
  std::optional<ScalarField> exact;

  static PdeProblem by_name(const std::string& name);  // poisson_sin_dirichlet, poisson_cos_neumann
};

struct SamplePlan {
  std::int64_t m1 = 1;  // interior points
  std::int64_t m2 = 1;  // boundary points
  std::uint64_t seed = 1;
};

bool contains(Domain dom, const Eigen::Vector2d& x);
std::vector<Eigen::Vector2d> sample_interior(Domain dom, std::int64_t m, std::uint64_t seed);
std::vector<Eigen::Vector2d> sample_boundary(Domain dom, std::int64_t m, std::uint64_t seed);

/// Monte Carlo Ritz energy over the plan's points:
///   (1/M1) sum g(x_i) + ((1/M2) sum phi(y_i))^2,  g = |grad phi|^2/2 - f phi.
/// The default 1/M1 normalization is the unbiased estimator of the quadrature
/// energy; half_interior_norm switches to the 1/(2 M1) variant.
double ritz_empirical(const ScalarField& phi, const PdeProblem& prob, const SamplePlan& plan,
                      bool half_interior_norm = false);
double ritz_empirical(const MlpModel& m, const PdeProblem& prob, const SamplePlan& plan,
                      bool half_interior_norm = false);

/// Quadrature Ritz energy: integral of g over the domain plus the squared
/// boundary mean of phi.
double ritz_continuous(const ScalarField& phi, const PdeProblem& prob, const QuadratureSpec& spec);
double ritz_continuous(const MlpModel& m, const PdeProblem& prob, const QuadratureSpec& spec);

/// Monte Carlo PINN loss: mean |lap phi + f|^2 over interior points plus
/// lambda * mean phi^2 over boundary points.
double pinn_empirical(const ScalarField& phi, const PdeProblem& prob, const SamplePlan& plan);
double pinn_empirical(const MlpModel& m, const PdeProblem& prob, const SamplePlan& plan);

/// Quadrature PINN loss: integral of the squared residual plus lambda times
/// the arclength boundary integral of phi^2.
double pinn_continuous(const ScalarField& phi, const PdeProblem& prob, const QuadratureSpec& spec);
double pinn_continuous(const MlpModel& m, const PdeProblem& prob, const QuadratureSpec& spec);

enum class ErrorNorm { L2, H1, H2 };

/// Sobolev norm of phi - exact over the domain (H2 adds the Laplacian
/// seminorm on top of H1). Throws when the problem has no exact solution.
double solution_error(const ScalarField& phi, const PdeProblem& prob, ErrorNorm norm,
                      const QuadratureSpec& spec);
double solution_error(const MlpModel& m, const PdeProblem& prob, ErrorNorm norm,
                      const QuadratureSpec& spec);

enum class PdeMethod { ritz, pinn };

struct PdeTrainResult {
  MlpModel model;
  std::vector<double> trace;
  double final_loss = 0.0;
  std::optional<int> diverged_at;
};

/// Minimizes the empirical PDE loss over the plan's fixed collocation points
/// with adaptive-moment descent; deterministic per (config, plan).
PdeTrainResult train_pde(const MlpModel& init, const PdeProblem& prob, const SamplePlan& plan,
                         PdeMethod method, const TrainConfig& config);

}  // namespace sobench::pde
