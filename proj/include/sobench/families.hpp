#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sobench/model.hpp"

namespace sobench {

/// The three architecture families. The size parameter is N for wenn and the
/// depth scale L for denn/dsrn; derived (width, depth) follow the class
/// scalings unless the harness pins them with explicit overrides.
struct ArchitectureFamily {
  enum class Tag { wenn, denn, dsrn };
  Tag tag = Tag::wenn;
  int size = 1;
  double c1 = 1.0;  // width scale
  double c2 = 1.0;  // depth scale
  std::optional<int> width_override;
  std::optional<int> depth_override;

  static ArchitectureFamily wenn(int n) { return {Tag::wenn, n, 1.0, 1.0, {}, {}}; }
  static ArchitectureFamily denn(int l) { return {Tag::denn, l, 1.0, 1.0, {}, {}}; }
  static ArchitectureFamily dsrn(int l) { return {Tag::dsrn, l, 1.0, 1.0, {}, {}}; }
  static ArchitectureFamily explicit_shape(int depth, int width) {
    ArchitectureFamily f{Tag::wenn, width, 1.0, 1.0, width, depth};
    return f;
  }
};

/// Layer dimensions {d, n1, ..., nk, 1} for the family instance, without
/// allocating a model. Throws on size < 1.
std::vector<int> family_dims(const ArchitectureFamily& family, int d);

/// Per-layer activations matching family_dims; dsrn mixes relu bodies with a
/// relu_squared head.
std::vector<ActivationKind> family_activations(const ArchitectureFamily& family, int d);

/// Deterministic initialized instance; equal seeds give bit-identical
/// parameter vectors.
MlpModel build(const ArchitectureFamily& family, int d, std::uint64_t seed);

/// Depths (psi1, psi2) used for a dsrn instance plus the class budget
/// L_total = 10(L+1) log2(4L); exposed so tests can check the class bounds.
struct DsrnShape {
  int depth_body = 0;   // sigma_1 part
  int depth_head = 0;   // sigma_2 part
  double depth_budget = 0.0;
  double head_budget = 0.0;
};
DsrnShape dsrn_shape(int l);

/// Sup-norm budget ||phi||_{W^{k,inf}} <= B.
struct BoundBox {
  double B = 1.0;
};

/// Grid (d <= 3) or Monte Carlo estimate of the W^{k,inf} norm: max over
/// evaluation points of |phi|, |grad phi|_inf and |lap phi| as the order
/// requires. A lower bound on the true sup-norm.
struct SupNormEstimate {
  double value = 0.0;
  std::int64_t points = 0;
  bool monte_carlo = false;
};
SupNormEstimate sup_norm_estimate(const MlpModel& m, int k, int resolution,
                                  std::uint64_t mc_seed = 7);

/// Membership report for the hypothesis ball: checked, not enforced.
struct MembershipReport {
  SupNormEstimate estimate;
  bool within = false;
};
MembershipReport check_membership(const MlpModel& m, const BoundBox& box, int k, int resolution);

}  // namespace sobench
