#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sobench/model.hpp"
#include "sobench/quadrature.hpp"

namespace sobench {

/// One supervised sample: x in [0,1]^d, f(x), and the derivative targets the
/// declared loss order needs (grad for k >= 1, lap for k = 2).
struct SobolevSample {
  Eigen::VectorXd x;
  double value = 0.0;
  std::optional<Eigen::VectorXd> grad;
  std::optional<double> lap;
};

/// A target with analytic derivatives, used by continuous risks and sample
/// generators.
struct TargetField {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;    // needed for k >= 1
  std::function<double(const Eigen::VectorXd&)> lap;              // needed for k = 2
};

struct RiskValue {
  int k = 0;
  double value = 0.0;
  std::int64_t m = 0;  // sample count or quadrature size
};

/// Pointwise Sobolev loss:
///   k=0: |f(x) - phi(x)|^2
///   k=1: h0 + |grad f(x) - grad phi(x)|^2   (Euclidean norm)
///   k=2: h0 + |lap f(x) - lap phi(x)|^2
/// Throws when the sample lacks the derivative target the order needs.
double h_k(const MlpModel& m, const SobolevSample& s, int k);

/// Mean of h_k over the samples; throws on an empty set.
RiskValue empirical_risk(const MlpModel& m, const std::vector<SobolevSample>& samples, int k);

/// Quadrature estimate of the integral of h_k over [0,1]^d.
RiskValue continuous_risk(const MlpModel& m, const TargetField& f, int k,
                          const QuadratureSpec& spec);

/// Draws samples of the target on [0,1]^d with the derivative fields order k
/// requires.
std::vector<SobolevSample> sample_target(const TargetField& f, int d, int k, std::int64_t count,
                                         std::uint64_t seed);

/// Dataset CSV: header x1..xd,f[,g1..gd][,lap]; round-trips through %.17g.
void save_dataset(const std::vector<SobolevSample>& samples, int k, const std::string& path);
std::vector<SobolevSample> load_dataset(const std::string& path);

}  // namespace sobench
