#include "conf/signature.hpp"

#include "conf/error.hpp"

#include <cmath>

namespace conf {

Signature::Signature(int n, int nu) : n_(n), nu_(nu) {
  if (n < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "signature dimension must be positive, got " + std::to_string(n));
  }
  if (nu < 0 || nu > n) {
    throw Error(ErrorKind::InvalidArgument,
                "signature index must lie in [0, " + std::to_string(n) +
                    "], got " + std::to_string(nu));
  }
}

double Signature::epsilon(int i) const {
  if (i < 0 || i >= n_) {
    throw Error(ErrorKind::DimensionMismatch,
                "coordinate index " + std::to_string(i) + " out of range");
  }
  return i < n_ - nu_ ? 1.0 : -1.0;
}

Mat Signature::eta() const {
  Mat m = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) m(i, i) = epsilon(i);
  return m;
}

std::string Signature::to_string() const {
  return "(" + std::to_string(n_) + "," + std::to_string(nu_) + ")";
}

const char* to_string(CausalCharacter c) noexcept {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
  }
  return "?";
}

static void require_length(const Signature& sig, const Vec& v) {
  if (v.size() != sig.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) +
                    " does not match signature " + sig.to_string());
  }
}

double eta_inner(const Signature& sig, const Vec& a, const Vec& b) {
  require_length(sig, a);
  require_length(sig, b);
  double acc = 0.0;
  for (int i = 0; i < sig.n(); ++i) acc += sig.epsilon(i) * a[i] * b[i];
  return acc;
}

CausalCharacter causal_character(const Signature& sig, const Vec& v, double tol) {
  const double q = eta_inner(sig, v, v);
  const double scale = v.squaredNorm();
  if (std::abs(q) <= tol * scale) return CausalCharacter::Null;
  return q > 0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

}  // namespace conf
