#include "sobench/families.hpp"

#include <cmath>
#include <stdexcept>

#include "sobench/autodiff.hpp"
#include "sobench/rng.hpp"

namespace sobench {

namespace {

int ceil_log2(int n) { return n <= 1 ? 0 : static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))); }

}  // namespace

DsrnShape dsrn_shape(int l) {
  DsrnShape s;
  const double ltot = 10.0 * (l + 1) * std::log2(4.0 * l);
  s.depth_budget = ltot;
  s.head_budget = 6.0 * std::log(ltot);
  s.depth_body = l;
  s.depth_head = std::max(1, std::min(ceil_log2(l), static_cast<int>(std::floor(s.head_budget))));
  if (s.depth_body + s.depth_head > static_cast<int>(std::floor(ltot)))
    s.depth_body = static_cast<int>(std::floor(ltot)) - s.depth_head;
  return s;
}

std::vector<int> family_dims(const ArchitectureFamily& family, int d) {
  if (family.size < 1) throw std::invalid_argument("family size parameter must be >= 1");
  if (d < 1) throw std::invalid_argument("input dimension must be >= 1");

  int width = 0, depth = 0;
  switch (family.tag) {
    case ArchitectureFamily::Tag::wenn:
      width = family.size;
      depth = std::max(1, ceil_log2(family.size));
      break;
    case ArchitectureFamily::Tag::denn: {
      const int l = family.size;
      width = std::max(2, static_cast<int>(std::ceil(family.c1 * std::log2(std::max(2, l)))));
      depth = std::max(1, static_cast<int>(std::floor(family.c2 * l * std::log2(std::max(2, l)))));
      break;
    }
    case ArchitectureFamily::Tag::dsrn: {
      const DsrnShape s = dsrn_shape(family.size);
      width = std::max(2, ceil_log2(family.size));
      depth = s.depth_body + s.depth_head;
      break;
    }
  }
  if (family.width_override) width = *family.width_override;
  if (family.depth_override) depth = *family.depth_override;
  if (width < 1 || depth < 1) throw std::invalid_argument("family produced an empty shape");

  std::vector<int> dims;
  dims.push_back(d);
  for (int i = 0; i < depth; ++i) dims.push_back(width);
  dims.push_back(1);
  return dims;
}

std::vector<ActivationKind> family_activations(const ArchitectureFamily& family, int d) {
  const std::vector<int> dims = family_dims(family, d);
  std::vector<ActivationKind> acts(dims.size() - 1, ActivationKind::relu);
  acts.back() = ActivationKind::identity;
  if (family.tag == ArchitectureFamily::Tag::dsrn) {
    const DsrnShape s = dsrn_shape(family.size);
    // sigma_2 head sits on top of the sigma_1 body
    for (int i = 0; i < s.depth_head; ++i)
      acts[static_cast<std::size_t>(s.depth_body + i)] = ActivationKind::relu_squared;
  }
  return acts;
}

MlpModel build(const ArchitectureFamily& family, int d, std::uint64_t seed) {
  return make_mlp(family_dims(family, d), family_activations(family, d), seed);
}

SupNormEstimate sup_norm_estimate(const MlpModel& m, int k, int resolution, std::uint64_t mc_seed) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  const int d = m.input_dim;
  SupNormEstimate est;

  auto probe = [&](const Eigen::VectorXd& x) {
    double v = std::abs(ad::eval(m, x));
    if (k >= 1) {
      const Eigen::VectorXd g = ad::input_gradient(m, x);
      v = std::max(v, g.cwiseAbs().maxCoeff());
    }
    if (k >= 2) v = std::max(v, std::abs(ad::input_laplacian(m, x)));
    est.value = std::max(est.value, v);
    ++est.points;
  };

  if (d <= 3) {
    // endpoint-including uniform grid; doubling the resolution nests
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd x(d);
    while (true) {
      for (int c = 0; c < d; ++c) x[c] = static_cast<double>(idx[static_cast<std::size_t>(c)]) / resolution;
      probe(x);
      int c = 0;
      while (c < d && ++idx[static_cast<std::size_t>(c)] > resolution) {
        idx[static_cast<std::size_t>(c)] = 0;
        ++c;
      }
      if (c == d) break;
    }
  } else {
    est.monte_carlo = true;
    Rng rng(mc_seed);
    const std::int64_t count = static_cast<std::int64_t>(resolution) * resolution;
    Eigen::VectorXd x(d);
    for (std::int64_t i = 0; i < count; ++i) {
      for (int c = 0; c < d; ++c) x[c] = rng.uniform01();
      probe(x);
    }
  }
  return est;
}

MembershipReport check_membership(const MlpModel& m, const BoundBox& box, int k, int resolution) {
  if (box.B < 1.0) throw std::invalid_argument("norm budget B must be >= 1");
  MembershipReport r;
  r.estimate = sup_norm_estimate(m, k, resolution);
  r.within = r.estimate.value <= box.B;
  return r;
}

}  // namespace sobench
