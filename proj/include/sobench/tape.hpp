#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sobench::ad {

class Tape;

/// Handle to a scalar recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::int32_t id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
};

/// Record of elementary operations with local partials. One reverse sweep
/// over the record yields derivatives of a root scalar with respect to every
/// earlier node. The tape is rebuilt (or rewound) per evaluation; it is never
/// shared between threads.
class Tape {
 public:
  Tape() = default;

  void reserve(std::size_t n) {
    val_.reserve(n);
    node_.reserve(n);
  }

  std::size_t size() const { return val_.size(); }

  void clear() {
    val_.clear();
    node_.clear();
  }

  // Drop every node recorded after position n. Used to reuse the leaf
  // prefix (model parameters) across per-sample evaluations.
  void rewind(std::size_t n) {
    assert(n <= val_.size());
    val_.resize(n);
    node_.resize(n);
  }

  Var leaf(double v) {
    val_.push_back(v);
    node_.push_back(Node{0.0, 0.0, -1, -1});
    return Var{this, static_cast<std::int32_t>(val_.size() - 1)};
  }

  Var unary(double v, Var a, double pa) {
    assert(a.tape == this);
    val_.push_back(v);
    node_.push_back(Node{pa, 0.0, a.id, -1});
    return Var{this, static_cast<std::int32_t>(val_.size() - 1)};
  }

  Var binary(double v, Var a, double pa, Var b, double pb) {
    assert(a.tape == this && b.tape == this);
    val_.push_back(v);
    node_.push_back(Node{pa, pb, a.id, b.id});
    return Var{this, static_cast<std::int32_t>(val_.size() - 1)};
  }

  double value(Var x) const {
    assert(x.tape == this);
    return val_[static_cast<std::size_t>(x.id)];
  }

  /// Reverse sweep from `root`. On return, adjoint[i] = d(root)/d(node i)
  /// for every node recorded at or before the root; each node is visited
  /// exactly once. `adjoint` is resized and zeroed here so callers can
  /// reuse the buffer.
  void gradient(Var root, std::vector<double>& adjoint) const {
    if (!root.valid() || root.tape != this)
      throw std::invalid_argument("tape gradient: root is not a scalar on this tape");
    adjoint.assign(val_.size(), 0.0);
    adjoint[static_cast<std::size_t>(root.id)] = 1.0;
    for (std::int32_t i = root.id; i >= 0; --i) {
      const double a = adjoint[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      const Node& nd = node_[static_cast<std::size_t>(i)];
      if (nd.a >= 0) adjoint[static_cast<std::size_t>(nd.a)] += nd.pa * a;
      if (nd.b >= 0) adjoint[static_cast<std::size_t>(nd.b)] += nd.pb * a;
    }
  }

 private:
  struct Node {
    double pa, pb;
    std::int32_t a, b;
  };

  std::vector<double> val_;
  std::vector<Node> node_;
};

// --- arithmetic on tape scalars ---------------------------------------

inline Var operator+(Var a, Var b) { return a.tape->binary(a.tape->value(a) + b.tape->value(b), a, 1.0, b, 1.0); }
inline Var operator-(Var a, Var b) { return a.tape->binary(a.tape->value(a) - b.tape->value(b), a, 1.0, b, -1.0); }
inline Var operator*(Var a, Var b) {
  const double va = a.tape->value(a), vb = b.tape->value(b);
  return a.tape->binary(va * vb, a, vb, b, va);
}
inline Var operator/(Var a, Var b) {
  const double va = a.tape->value(a), vb = b.tape->value(b);
  return a.tape->binary(va / vb, a, 1.0 / vb, b, -va / (vb * vb));
}

inline Var operator+(Var a, double c) { return a.tape->unary(a.tape->value(a) + c, a, 1.0); }
inline Var operator+(double c, Var a) { return a + c; }
inline Var operator-(Var a, double c) { return a + (-c); }
inline Var operator-(double c, Var a) { return a.tape->unary(c - a.tape->value(a), a, -1.0); }
inline Var operator*(Var a, double c) { return a.tape->unary(a.tape->value(a) * c, a, c); }
inline Var operator*(double c, Var a) { return a * c; }
inline Var operator/(Var a, double c) { return a * (1.0 / c); }
inline Var operator-(Var a) { return a * -1.0; }

inline Var square(Var a) {
  const double v = a.tape->value(a);
  return a.tape->unary(v * v, a, 2.0 * v);
}

inline double value_of(Var a) { return a.tape->value(a); }
inline double value_of(double a) { return a; }

inline Var sqrt(Var a) {
  const double s = std::sqrt(a.tape->value(a));
  return a.tape->unary(s, a, 0.5 / s);
}

}  // namespace sobench::ad
