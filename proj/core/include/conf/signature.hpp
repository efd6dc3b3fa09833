#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <string>

namespace conf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Signature of a flat semi-Euclidean space: dimension n and index nu (the
/// number of -1 entries of the diagonal metric). The first n - nu coordinates
/// are spacelike, the last nu timelike.
class Signature {
 public:
  Signature(int n, int nu);

  int n() const noexcept { return n_; }
  int nu() const noexcept { return nu_; }

  /// +1 or -1 for the zero-based coordinate index i.
  double epsilon(int i) const;

  /// True for nu == 0 or nu == n (no causal structure).
  bool definite() const noexcept { return nu_ == 0 || nu_ == n_; }

  Mat eta() const;
  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int n_;
  int nu_;
};

enum class CausalCharacter { Spacelike, Timelike, Null };

const char* to_string(CausalCharacter c) noexcept;

inline constexpr double kDefaultNullTolerance = 1e-10;

double eta_inner(const Signature& sig, const Vec& a, const Vec& b);

/// Classifies v by the sign of eta(v, v). The null test is relative:
/// |eta(v, v)| <= tol * |v|^2 counts as null, so the cone is scale invariant.
CausalCharacter causal_character(const Signature& sig, const Vec& v,
                                 double tol = kDefaultNullTolerance);

}  // namespace conf
