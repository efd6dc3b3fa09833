#pragma once

#include "conf/signature.hpp"

namespace conf {

/// Second-order truncated Taylor expansion of a scalar function of m
/// coordinates: value, gradient, and (exactly symmetric) Hessian.
///
/// Propagation rules are the hyper-dual ones: for a univariate g applied to
/// a jet a,
///   value = g(a), grad = g'(a) * da, hess = g'(a) * Ha + g''(a) * da da^T.
/// Only the upper triangle is computed; the lower triangle is mirrored so the
/// Hessian equals its transpose bit for bit.
struct Jet2 {
  double value = 0.0;
  Vec grad;
  Mat hess;

  Jet2() = default;
  Jet2(double v, Vec g, Mat h) : value(v), grad(std::move(g)), hess(std::move(h)) {}

  int dim() const noexcept { return static_cast<int>(grad.size()); }

  static Jet2 constant(double c, int m);
  /// Coordinate function x_i.
  static Jet2 variable(double x, int i, int m);

  bool finite() const;
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);

/// Chain rule with a univariate function given by its value and first two
/// derivatives at a.value.
Jet2 chain(const Jet2& a, double g, double dg, double d2g);

}  // namespace conf
