#pragma once

#include <stdexcept>
#include <string>

#include "sobench/tape.hpp"

namespace sobench {

/// Layer nonlinearity. relu is sigma_1, relu_squared is sigma_2; identity
/// marks the affine output layer. Kink conventions (measure-zero set, makes
/// tests deterministic): relu'(0) = 0 and relu_squared''(0) = 0.
enum class ActivationKind { identity, relu, relu_squared };

inline const char* to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::identity: return "identity";
    case ActivationKind::relu: return "relu";
    case ActivationKind::relu_squared: return "relu_squared";
  }
  return "?";
}

inline ActivationKind activation_from_string(const std::string& s) {
  if (s == "identity") return ActivationKind::identity;
  if (s == "relu") return ActivationKind::relu;
  if (s == "relu_squared") return ActivationKind::relu_squared;
  throw std::invalid_argument("unknown activation tag: " + s);
}

// --- double rules ------------------------------------------------------

inline double act_value(ActivationKind k, double z) {
  switch (k) {
    case ActivationKind::identity: return z;
    case ActivationKind::relu: return z > 0.0 ? z : 0.0;
    case ActivationKind::relu_squared: return z > 0.0 ? z * z : 0.0;
  }
  return 0.0;
}

inline double act_prime(ActivationKind k, double z) {
  switch (k) {
    case ActivationKind::identity: return 1.0;
    case ActivationKind::relu: return z > 0.0 ? 1.0 : 0.0;
    case ActivationKind::relu_squared: return z > 0.0 ? 2.0 * z : 0.0;
  }
  return 0.0;
}

inline double act_second(ActivationKind k, double z) {
  switch (k) {
    case ActivationKind::identity: return 0.0;
    case ActivationKind::relu: return 0.0;  // a.e.; piecewise linear
    case ActivationKind::relu_squared: return z > 0.0 ? 2.0 : 0.0;
  }
  return 0.0;
}

// --- tape rules ---------------------------------------------------------
// act_prime / act_second recorded as values in their own right so that a
// reverse sweep differentiates through them (their local partials are the
// next derivative order, zero a.e. where that order is piecewise constant).

inline ad::Var act_value(ActivationKind k, ad::Var z) {
  const double v = z.tape->value(z);
  switch (k) {
    case ActivationKind::identity: return z;
    case ActivationKind::relu: return z.tape->unary(v > 0.0 ? v : 0.0, z, v > 0.0 ? 1.0 : 0.0);
    case ActivationKind::relu_squared:
      return z.tape->unary(v > 0.0 ? v * v : 0.0, z, v > 0.0 ? 2.0 * v : 0.0);
  }
  return z;
}

inline ad::Var act_prime(ActivationKind k, ad::Var z) {
  const double v = z.tape->value(z);
  switch (k) {
    case ActivationKind::identity: return z.tape->unary(1.0, z, 0.0);
    case ActivationKind::relu: return z.tape->unary(v > 0.0 ? 1.0 : 0.0, z, 0.0);
    case ActivationKind::relu_squared:
      return z.tape->unary(v > 0.0 ? 2.0 * v : 0.0, z, v > 0.0 ? 2.0 : 0.0);
  }
  return z;
}

inline ad::Var act_second(ActivationKind k, ad::Var z) {
  const double v = z.tape->value(z);
  switch (k) {
    case ActivationKind::identity:
    case ActivationKind::relu: return z.tape->unary(0.0, z, 0.0);
    case ActivationKind::relu_squared: return z.tape->unary(v > 0.0 ? 2.0 : 0.0, z, 0.0);
  }
  return z;
}

// Whether the second derivative vanishes identically (a.e.), so Laplacian
// propagation can skip the curvature term.
inline bool act_curvature_free(ActivationKind k) { return k != ActivationKind::relu_squared; }

}  // namespace sobench
