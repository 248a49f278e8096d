#pragma once

#include "sobench/activation.hpp"

namespace sobench::ad {

/// First-order dual number: primal value plus the directional derivative
/// with respect to one input coordinate. Arithmetic follows the product and
/// chain rules exactly.
template <class S>
struct Dual {
  S v;  // primal
  S d;  // tangent
};

template <class S> Dual<S> operator+(const Dual<S>& a, const Dual<S>& b) { return {a.v + b.v, a.d + b.d}; }
template <class S> Dual<S> operator-(const Dual<S>& a, const Dual<S>& b) { return {a.v - b.v, a.d - b.d}; }
template <class S> Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class S> Dual<S> operator*(double c, const Dual<S>& a) { return {c * a.v, c * a.d}; }
template <class S> Dual<S> operator+(const Dual<S>& a, double c) { return {a.v + c, a.d}; }

template <class S>
Dual<S> activate(ActivationKind k, const Dual<S>& z) {
  return {act_value(k, z.v), act_prime(k, z.v) * z.d};
}

/// Second-order dual along a single direction t: carries value, d/dt and
/// d^2/dt^2 of the computation at t = 0.
template <class S>
struct Dual2 {
  S v, d1, d2;
};

template <class S> Dual2<S> operator+(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
template <class S> Dual2<S> operator-(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
template <class S> Dual2<S> operator*(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v * b.v,
          a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * (a.d1 * b.d1) + a.v * b.d2};
}
template <class S> Dual2<S> operator*(double c, const Dual2<S>& a) { return {c * a.v, c * a.d1, c * a.d2}; }
template <class S> Dual2<S> operator+(const Dual2<S>& a, double c) { return {a.v + c, a.d1, a.d2}; }

template <class S>
Dual2<S> activate(ActivationKind k, const Dual2<S>& z) {
  const S p = act_prime(k, z.v);
  const S q = act_second(k, z.v);
  return {act_value(k, z.v), p * z.d1, q * (z.d1 * z.d1) + p * z.d2};
}

}  // namespace sobench::ad
