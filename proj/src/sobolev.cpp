#include "sobench/sobolev.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sobench/autodiff.hpp"
#include "sobench/csv.hpp"
#include "sobench/rng.hpp"
#include "sobench/threads.hpp"

namespace sobench {

double h_k(const MlpModel& m, const SobolevSample& s, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("loss order k must be 0, 1 or 2");
  if (k == 0) {
    const double gap = s.value - ad::eval(m, s.x);
    return gap * gap;
  }
  if (k == 1) {
    if (!s.grad) throw std::invalid_argument("h_1 needs the sample field 'grad'");
    const double gap = s.value - ad::eval(m, s.x);
    const Eigen::VectorXd ggap = *s.grad - ad::input_gradient(m, s.x);
    return gap * gap + ggap.squaredNorm();
  }
  if (!s.lap) throw std::invalid_argument("h_2 needs the sample field 'lap'");
  const double gap = s.value - ad::eval(m, s.x);
  const double lgap = *s.lap - ad::input_laplacian(m, s.x);
  return gap * gap + lgap * lgap;
}

RiskValue empirical_risk(const MlpModel& m, const std::vector<SobolevSample>& samples, int k) {
  if (samples.empty()) throw std::invalid_argument("empirical risk over an empty sample set");
  const double sum =
      parallel_sum(samples.size(), 256, [&](std::size_t i) { return h_k(m, samples[i], k); });
  return RiskValue{k, sum / static_cast<double>(samples.size()),
                   static_cast<std::int64_t>(samples.size())};
}

RiskValue continuous_risk(const MlpModel& m, const TargetField& f, int k,
                          const QuadratureSpec& spec) {
  auto integrand = [&](const Eigen::VectorXd& x) {
    SobolevSample s;
    s.x = x;
    s.value = f.value(x);
    if (k >= 1) s.grad = f.grad(x);
    if (k == 2) s.lap = f.lap(x);
    return h_k(m, s, k);
  };
  const double val = integrate_unit_cube(m.input_dim, spec, integrand);
  return RiskValue{k, val, spec.node_count(m.input_dim)};
}

std::vector<SobolevSample> sample_target(const TargetField& f, int d, int k, std::int64_t count,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SobolevSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    SobolevSample s;
    s.x.resize(d);
    for (int c = 0; c < d; ++c) s.x[c] = rng.uniform01();
    s.value = f.value(s.x);
    if (k >= 1) s.grad = f.grad(s.x);
    if (k == 2) s.lap = f.lap(s.x);
    out.push_back(std::move(s));
  }
  return out;
}

void save_dataset(const std::vector<SobolevSample>& samples, int k, const std::string& path) {
  if (samples.empty()) throw std::invalid_argument("cannot save an empty dataset");
  const int d = static_cast<int>(samples.front().x.size());
  CsvWriter csv(path);
  std::vector<std::string> header;
  for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c + 1));
  header.push_back("f");
  if (k >= 1)
    for (int c = 0; c < d; ++c) header.push_back("g" + std::to_string(c + 1));
  if (k == 2) header.push_back("lap");
  csv.header(header);
  for (const SobolevSample& s : samples) {
    csv.begin_row();
    for (int c = 0; c < d; ++c) csv.field(s.x[c]);
    csv.field(s.value);
    if (k >= 1) {
      if (!s.grad) throw std::invalid_argument("dataset row lacks 'grad' for k >= 1");
      for (int c = 0; c < d; ++c) csv.field((*s.grad)[c]);
    }
    if (k == 2) {
      if (!s.lap) throw std::invalid_argument("dataset row lacks 'lap' for k = 2");
      csv.field(*s.lap);
    }
    csv.end_row();
  }
}

std::vector<SobolevSample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset " + path);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  int d = 0;
  while (d < static_cast<int>(cols.size()) && cols[static_cast<std::size_t>(d)] == "x" + std::to_string(d + 1)) ++d;
  if (d == 0 || static_cast<std::size_t>(d) >= cols.size() || cols[static_cast<std::size_t>(d)] != "f")
    throw std::runtime_error("dataset header must start with x1..xd,f");
  bool has_grad = cols.size() > static_cast<std::size_t>(d) + 1 && cols[static_cast<std::size_t>(d) + 1] == "g1";
  bool has_lap = !cols.empty() && cols.back() == "lap";

  std::vector<SobolevSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (row.size() != cols.size()) throw std::runtime_error("dataset row width mismatch");
    SobolevSample s;
    s.x = Eigen::Map<Eigen::VectorXd>(row.data(), d);
    s.value = row[static_cast<std::size_t>(d)];
    std::size_t at = static_cast<std::size_t>(d) + 1;
    if (has_grad) {
      s.grad = Eigen::Map<Eigen::VectorXd>(row.data() + at, d);
      at += static_cast<std::size_t>(d);
    }
    if (has_lap) s.lap = row[at];
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sobench
