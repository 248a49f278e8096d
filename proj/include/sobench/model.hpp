#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sobench/activation.hpp"

namespace sobench {

/// One affine transform plus its nonlinearity. The output layer of a model
/// carries ActivationKind::identity.
struct Layer {
  Eigen::MatrixXd weight;  // rows x cols
  Eigen::VectorXd bias;    // rows
  ActivationKind act = ActivationKind::relu;
};

/// Layered fully connected network, scalar output. Layer dimensions chain
/// from input_dim to 1; the final layer is affine.
struct MlpModel {
  int input_dim = 0;
  std::vector<Layer> layers;

  int output_dim() const { return layers.empty() ? input_dim : static_cast<int>(layers.back().weight.rows()); }
};

void validate(const MlpModel& m);

/// Max hidden-layer width; the number of hidden layers.
int width(const MlpModel& m);
int depth(const MlpModel& m);

/// Exact parameter count: sum over layers of rows*cols + rows.
std::int64_t param_count(const MlpModel& m);
std::int64_t param_count_from_dims(const std::vector<int>& dims);

Eigen::VectorXd flatten_params(const MlpModel& m);
void unflatten_params(MlpModel& m, const Eigen::VectorXd& theta);

/// Builds a model with the given layer dimensions (dims = {d, n1, ..., nk, 1})
/// and hidden activation, weights uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)].
MlpModel make_mlp(const std::vector<int>& dims, ActivationKind hidden_act, std::uint64_t seed);

/// Same but with an explicit per-layer activation list (size dims.size()-1,
/// last entry must be identity).
MlpModel make_mlp(const std::vector<int>& dims, const std::vector<ActivationKind>& acts,
                  std::uint64_t seed);

bool relu_only(const MlpModel& m);

/// Checkpoint round-trip: JSON document
/// {d, layers:[{rows, cols, activation, weights:[row-major], bias:[...]}]}.
/// Doubles survive save/load bit-exactly.
std::string to_json(const MlpModel& m);
MlpModel model_from_json(const std::string& text);
void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace sobench
