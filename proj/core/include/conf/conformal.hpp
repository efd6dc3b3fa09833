#pragma once

#include "conf/diffops.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace conf {

inline constexpr double kDefaultTolerance = 1e-8;
/// Below this |lambda| the pulled-back metric is treated as degenerate.
inline constexpr double kFactorFloor = 1e-300;
/// |det J| below this times the product of row norms counts as singular.
inline constexpr double kSingularRatio = 1e-12;

/// Where and why a check failed.
struct Witness {
  Vec point;
  Mat matrix;
  std::string reason;
};

/// Pointwise Jacobian verdict: G = J^T M J is compared with lambda * M, where
/// M is the frame metric and lambda = tr(M^-1 G) / n.
struct ConformalVerdict {
  bool conformal = false;
  double factor = 0.0;
  /// max |G - lambda M| / max(|lambda|, floor)
  double residual = std::numeric_limits<double>::infinity();
  /// J^T M J matches lambda M with lambda < 0: the map swaps the signature.
  bool anti_signature = false;
  bool singular = false;
  std::optional<Witness> witness;
};

ConformalVerdict conformality_at(const SmoothMap& F, const Vec& p,
                                 double tol = kDefaultTolerance);

/// A target-coordinate function with vanishing Laplacian.
struct Probe {
  std::string id;
  ScalarExpr phi;  // over target coordinates y1..yn
};

/// The harmonic probe family for a signature: every y_j, every y_j y_k
/// (j < k), and then
///   - indefinite: y_k^2 + y_n^2 for spacelike k, y_1^2 + y_k^2 for timelike k;
///   - definite:   y_1^2 - y_k^2 for k >= 2.
/// Duplicate probes (same id) appear once.
std::vector<Probe> harmonic_probes(const Signature& sig);

struct ProbeResidual {
  std::string id;
  std::string expression;
  double max_residual = 0.0;  // max over samples of |Laplacian(phi o F)|
};

struct ProbeReport {
  std::vector<ProbeResidual> probes;
  bool suite_pass = false;
  /// eta(grad y_1, grad y_1) > eta(grad y_n, grad y_n) at every sample;
  /// vacuously true for definite signatures.
  bool gradient_condition = false;
  std::optional<Vec> gradient_witness;
  std::size_t sample_count = 0;
  double tolerance = kDefaultTolerance;

  double max_residual() const;
};

/// Samples are in F's frame. Probes are evaluated on the Cartesian form of F.
ProbeReport probe_suite(const SmoothMap& F, const std::vector<Vec>& samples,
                        double tol = kDefaultTolerance);

struct SampleAgreement {
  Vec point;
  bool probe_path = false;     // all probes vanish and the gradient condition holds here
  bool jacobian_path = false;  // conformality_at says conformal
  bool agree() const noexcept { return probe_path == jacobian_path; }
};

/// Side-by-side run of the probe criterion and the Jacobian criterion. For
/// n == 2 the two must agree at every sample; for n >= 3 a disagreement is
/// reported, not raised.
struct EquivalenceReport {
  ProbeReport probes;
  std::vector<ConformalVerdict> verdicts;
  std::vector<SampleAgreement> samples;
  bool probe_conformal = false;
  bool jacobian_conformal = false;
  std::size_t disagreements = 0;
  bool agree() const noexcept { return disagreements == 0; }
};

EquivalenceReport check_equivalence(const SmoothMap& F, const std::vector<Vec>& samples,
                                    double tol = kDefaultTolerance);

struct SamplePair {
  Vec x;
  Vec y;
};

/// y = alpha A x + b with A eta-orthogonal.
struct AffineModel {
  double alpha = 0.0;
  Mat A;
  Vec b;
  /// max |M x + b - y| over samples, relative to max(1, max |y|)
  double fit_residual = 0.0;
  /// max |A^T eta A - eta|
  double orthogonality_residual = 0.0;
};

/// Least-squares affine fit through the normal equations (on centred data),
/// followed by the split M = alpha A with alpha = |det M|^(1/n).
/// Throws InsufficientSamples, NotAffine or NotEtaOrthogonal.
AffineModel liouville_fit(const std::vector<SamplePair>& samples, const Signature& sig,
                          double tol = kDefaultTolerance);

struct ScalingReport {
  AffineModel model;
  /// max |Lap(phi o F)(p) - alpha^2 Lap'(phi)(F(p))|, relative to max(1, |rhs|)
  double max_deviation = 0.0;
  /// Lap(phi o F) / Lap'(phi)(F(p)) at the first sample where the target
  /// Laplacian is nonzero; 0 when vacuous.
  double ratio = 0.0;
  /// True when both sides vanish at every sample (e.g. linear phi).
  bool vacuous = false;
  bool pass = false;
};

/// Fits F on the samples, then compares both sides of the alpha^2 identity.
ScalingReport scaling_check(const SmoothMap& F, const ScalarExpr& phi,
                            const std::vector<Vec>& samples, double tol = kDefaultTolerance);

enum class CRKind { Holomorphic, AntiHolomorphic, Neither };

const char* to_string(CRKind k) noexcept;

struct CRClass {
  CRKind kind = CRKind::Neither;
  /// Residual of the chosen orientation; the smaller of the two for Neither.
  double residual = 0.0;
  double holomorphic_residual = 0.0;
  double antiholomorphic_residual = 0.0;
  std::optional<Witness> witness;
};

/// Cauchy-Riemann classification of a map of the Euclidean plane (2,0).
CRClass classify_cr(const SmoothMap& F, const std::vector<Vec>& samples,
                    double tol = kDefaultTolerance);

}  // namespace conf
