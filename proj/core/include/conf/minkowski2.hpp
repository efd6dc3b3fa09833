#pragma once

#include "conf/conformal.hpp"
#include "conf/null_coords.hpp"
#include "conf/sampling.hpp"

#include <span>
#include <string>
#include <vector>

// Conformal maps of two-dimensional Minkowski space. In null coordinates
// (u, v) = (x + t, x - t) every conformal map is one of
//   F(u, v) = (psi(u), chi(v))   (direct)
//   F(u, v) = (psi(v), chi(u))   (swapped)
// with psi and chi diffeomorphisms that are both increasing or both
// decreasing.

namespace conf {

enum class Pattern { BothIncreasing, BothDecreasing };
enum class Branch { Direct, Swapped };

const char* to_string(Pattern p) noexcept;
const char* to_string(Branch b) noexcept;

/// Name of the coordinate of the one-variable functions in a MonotonePair.
inline constexpr const char* kPairVar = "s";

/// Parses a one-variable function of `s`.
ScalarExpr parse_univariate(std::string_view src);

struct MonotonePair {
  ScalarExpr chi;
  ScalarExpr psi;
  Pattern pattern = Pattern::BothIncreasing;
  Branch branch = Branch::Direct;
};

/// Open rectangle (a1, a2) x (b1, b2) in null coordinates.
class NullRectangle {
 public:
  NullRectangle(double a1, double a2, double b1, double b2);

  /// (-1, 1) x (-1, 1), i.e. the diamond |x| + |t| < 1.
  static NullRectangle diamond() { return {-1.0, 1.0, -1.0, 1.0}; }

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double b1() const noexcept { return b1_; }
  double b2() const noexcept { return b2_; }
  Interval u() const noexcept { return {a1_, a2_}; }
  Interval v() const noexcept { return {b1_, b2_}; }
  Null2 center() const noexcept { return {0.5 * (a1_ + a2_), 0.5 * (b1_ + b2_)}; }
  Box box() const { return {u(), v()}; }
  bool contains(Null2 q) const noexcept {
    return a1_ < q.u && q.u < a2_ && b1_ < q.v && q.v < b2_;
  }

 private:
  double a1_, a2_, b1_, b2_;
};

inline constexpr int kMonotoneSamples = 256;
inline constexpr double kMinDerivative = 1e-12;

/// Samples psi' and chi' over their domains (the rectangle side each one is
/// applied to, per branch) and returns the observed pattern. Throws
/// ZeroDerivative or MixedMonotonicity.
Pattern detect_pattern(const ScalarExpr& psi, const ScalarExpr& chi, Branch branch,
                       const NullRectangle& domain);

/// Builds the null-frame map of a pair after checking that its declared
/// pattern holds on `domain`.
SmoothMap build_map_from_pair(const MonotonePair& pair, const NullRectangle& domain);

/// Same map written as F(x, t) = (X, T).
SmoothMap cartesian_form(const MonotonePair& pair, const NullRectangle& domain);

struct Factorization {
  MonotonePair pair;
  /// max |rebuilt F - F| over the check grid, relative to max(1, |F|)
  double reconstruction_error = 0.0;
};

/// Splits a conformal map of a null rectangle into its monotone pair. psi and
/// chi are the slices of F along the rectangle's midlines. Throws
/// NotSeparable (neither partial of U vanishes, or the rebuilt map does not
/// match) or NotConformal.
Factorization factor_map(const SmoothMap& F, const NullRectangle& rect,
                         double tol = kDefaultTolerance, int grid = 17);

struct DalembertSplit {
  ScalarExpr f;  // of u = x + t
  ScalarExpr g;  // of v = x - t
  Null2 base;
  /// max |f(u) + g(v) - X(u, v)| over the grid
  double reconstruction_error = 0.0;
  /// max |X_xx - X_tt| over the grid, relative to max(1, |X_xx| + |X_tt|)
  double wave_residual = 0.0;
};

/// X(x, t) = f(x + t) + g(x - t) for a solution of the wave equation on the
/// rectangle. The additive constant is split evenly: f(u0) = g(v0) =
/// X(u0, v0) / 2 at the rectangle centre. Throws NotWaveSolution.
DalembertSplit dalembert_decompose(const ScalarExpr& X, const NullRectangle& rect,
                                   double tol = kDefaultTolerance, int grid = 17);

/// chi = psi = (2/pi) atan: sends the whole plane onto the diamond.
MonotonePair compactification();
/// Its inverse pair tan(pi s / 2), defined on (-1, 1).
MonotonePair compactification_inverse();

/// Tightest null rectangle containing the points. Throws DegenerateRectangle.
NullRectangle bounding_null_rectangle(std::span<const Event2> points);

/// Increasing affine pair mapping src onto dst side by side, endpoints to
/// endpoints.
MonotonePair rectangle_equivalence(const NullRectangle& src, const NullRectangle& dst);

enum class TimeOrientation { Causal, AntiCausal, Mixed };

const char* to_string(TimeOrientation o) noexcept;

struct LineImage {
  bool u_line = true;  // u = const (else v = const)
  double coordinate = 0.0;
  double image_value = 0.0;  // the image coordinate that should stay constant
  double variation = 0.0;    // relative spread of that coordinate along the line
};

struct NullLineReport {
  bool pass = false;
  bool lines_preserved = false;
  Branch branch = Branch::Direct;
  double max_variation = 0.0;
  bool causal_character_preserved = false;
  TimeOrientation orientation = TimeOrientation::Causal;
  std::vector<LineImage> lines;
};

/// Image of the null line u = c (or v = c) sampled at `points` parameters in
/// `range`.
std::vector<Null2> line_image(const SmoothMap& F, bool u_line, double c, Interval range,
                              int points = 64);

/// Checks that coordinate lines map to coordinate lines (u-lines to U-lines
/// for the direct branch, to V-lines for the swapped one) and that tangent
/// vectors keep their causal character.
NullLineReport null_line_check(const SmoothMap& F, const NullRectangle& rect,
                               double tol = kDefaultTolerance, int lines = 9,
                               int points_per_line = 64);

}  // namespace conf
