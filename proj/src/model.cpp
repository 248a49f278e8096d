#include "sobench/model.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "sobench/rng.hpp"

namespace sobench {

using nlohmann::json;

void validate(const MlpModel& m) {
  if (m.input_dim < 1) throw std::invalid_argument("model input dimension must be >= 1");
  if (m.layers.empty()) throw std::invalid_argument("model must have at least one layer");
  int prev = m.input_dim;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const Layer& layer = m.layers[l];
    if (layer.weight.cols() != prev)
      throw std::invalid_argument("layer " + std::to_string(l) + " expects input " +
                                  std::to_string(layer.weight.cols()) + ", got " + std::to_string(prev));
    if (layer.bias.size() != layer.weight.rows())
      throw std::invalid_argument("layer " + std::to_string(l) + " bias/weight row mismatch");
    prev = static_cast<int>(layer.weight.rows());
  }
  if (prev != 1) throw std::invalid_argument("model output dimension must be 1");
  if (m.layers.back().act != ActivationKind::identity)
    throw std::invalid_argument("final layer must be affine");
}

int width(const MlpModel& m) {
  int w = 0;
  for (std::size_t l = 0; l + 1 < m.layers.size(); ++l)
    w = std::max(w, static_cast<int>(m.layers[l].weight.rows()));
  return w;
}

int depth(const MlpModel& m) { return static_cast<int>(m.layers.size()) - 1; }

std::int64_t param_count(const MlpModel& m) {
  std::int64_t n = 0;
  for (const Layer& l : m.layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::int64_t param_count_from_dims(const std::vector<int>& dims) {
  std::int64_t n = 0;
  for (std::size_t l = 1; l < dims.size(); ++l)
    n += static_cast<std::int64_t>(dims[l]) * dims[l - 1] + dims[l];
  return n;
}

Eigen::VectorXd flatten_params(const MlpModel& m) {
  Eigen::VectorXd theta(param_count(m));
  Eigen::Index k = 0;
  for (const Layer& l : m.layers) {
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) theta[k++] = l.weight(i, j);
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) theta[k++] = l.bias(i);
  }
  return theta;
}

void unflatten_params(MlpModel& m, const Eigen::VectorXd& theta) {
  if (theta.size() != param_count(m))
    throw std::invalid_argument("parameter vector length mismatch");
  Eigen::Index k = 0;
  for (Layer& l : m.layers) {
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) l.weight(i, j) = theta[k++];
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = theta[k++];
  }
}

MlpModel make_mlp(const std::vector<int>& dims, ActivationKind hidden_act, std::uint64_t seed) {
  std::vector<ActivationKind> acts(dims.size() - 1, hidden_act);
  acts.back() = ActivationKind::identity;
  return make_mlp(dims, acts, seed);
}

MlpModel make_mlp(const std::vector<int>& dims, const std::vector<ActivationKind>& acts,
                  std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("need at least input and output dims");
  if (acts.size() != dims.size() - 1) throw std::invalid_argument("one activation per layer");
  MlpModel m;
  m.input_dim = dims.front();
  Rng rng(seed);
  for (std::size_t l = 1; l < dims.size(); ++l) {
    Layer layer;
    layer.weight.resize(dims[l], dims[l - 1]);
    layer.bias.resize(dims[l]);
    layer.act = acts[l - 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l - 1]));
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) layer.weight(i, j) = rng.uniform_sym(bound);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = rng.uniform_sym(bound);
    m.layers.push_back(std::move(layer));
  }
  validate(m);
  return m;
}

bool relu_only(const MlpModel& m) {
  for (const Layer& l : m.layers)
    if (l.act == ActivationKind::relu_squared) return false;
  return true;
}

std::string to_json(const MlpModel& m) {
  json doc;
  doc["d"] = m.input_dim;
  json layers = json::array();
  for (const Layer& l : m.layers) {
    json jl;
    jl["rows"] = l.weight.rows();
    jl["cols"] = l.weight.cols();
    jl["activation"] = to_string(l.act);
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.weight.size()));
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) w.push_back(l.weight(i, j));
    jl["weights"] = w;
    std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
    jl["bias"] = b;
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2);
}

MlpModel model_from_json(const std::string& text) {
  json doc = json::parse(text);
  MlpModel m;
  m.input_dim = doc.at("d").get<int>();
  for (const auto& jl : doc.at("layers")) {
    Layer l;
    const Eigen::Index rows = jl.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = jl.at("cols").get<Eigen::Index>();
    l.act = activation_from_string(jl.at("activation").get<std::string>());
    const auto w = jl.at("weights").get<std::vector<double>>();
    const auto b = jl.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
        static_cast<Eigen::Index>(b.size()) != rows)
      throw std::invalid_argument("checkpoint layer size mismatch");
    l.weight.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) l.weight(i, j) = w[static_cast<std::size_t>(i * cols + j)];
    l.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    m.layers.push_back(std::move(l));
  }
  validate(m);
  return m;
}

void save_model(const MlpModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json(m) << "\n";
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace sobench
