#include "conf/jet.hpp"

#include <cmath>

namespace conf {

namespace {

void mirror_upper(Mat& h) {
  const auto m = h.rows();
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < i; ++j) h(i, j) = h(j, i);
}

}  // namespace

Jet2 Jet2::constant(double c, int m) {
  return {c, Vec::Zero(m), Mat::Zero(m, m)};
}

Jet2 Jet2::variable(double x, int i, int m) {
  Jet2 j = constant(x, m);
  j.grad[i] = 1.0;
  return j;
}

bool Jet2::finite() const {
  return std::isfinite(value) && grad.allFinite() && hess.allFinite();
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}

Jet2 operator-(const Jet2& a) { return {-a.value, -a.grad, -a.hess}; }

Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int m = a.dim();
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      r.hess(i, j) = a.value * b.hess(i, j) + b.value * a.hess(i, j) +
                     (a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j]);
    }
  }
  mirror_upper(r.hess);
  return r;
}

Jet2 chain(const Jet2& a, double g, double dg, double d2g) {
  const int m = a.dim();
  Jet2 r;
  r.value = g;
  r.grad = dg * a.grad;
  r.hess.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      r.hess(i, j) = dg * a.hess(i, j) + d2g * (a.grad[i] * a.grad[j]);
    }
  }
  mirror_upper(r.hess);
  return r;
}

}  // namespace conf
