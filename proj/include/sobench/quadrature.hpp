#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sobench {

/// Quadrature over [0,1]^d: tensor Gauss-Legendre grids for d <= 3, Monte
/// Carlo with a declared size and seed otherwise. Defaults follow the
/// module conventions: 64^d tensor nodes for d <= 2, 2^16 MC points beyond.
struct QuadratureSpec {
  enum class Kind { tensor, monte_carlo };
  Kind kind = Kind::tensor;
  int points_per_axis = 64;     // tensor
  std::int64_t count = 1 << 16; // monte carlo
  std::uint64_t seed = 20240601;

  static QuadratureSpec default_for(int d) {
    QuadratureSpec q;
    if (d <= 2) {
      q.kind = Kind::tensor;
      q.points_per_axis = 64;
    } else {
      q.kind = Kind::monte_carlo;
    }
    return q;
  }

  std::int64_t node_count(int d) const {
    if (kind == Kind::monte_carlo) return count;
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= points_per_axis;
    return n;
  }
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// integral of f over [0,1]^d per the spec; deterministic for a fixed spec.
double integrate_unit_cube(int d, const QuadratureSpec& spec,
                           const std::function<double(const Eigen::VectorXd&)>& f);

/// Gauss-Legendre integral of f over [a, b].
double integrate_segment(double a, double b, int n,
                         const std::function<double(double)>& f);

}  // namespace sobench
