#pragma once

#include "conf/expr.hpp"
#include "conf/null_coords.hpp"
#include "conf/signature.hpp"

#include <string>
#include <vector>

namespace conf {

/// Coordinates a map is written in. Null is only meaningful for signature
/// (2,1): source and target both use (u, v) = (x + t, x - t), where the metric
/// is du dv, i.e. the matrix [[0, 1/2], [1/2, 0]].
enum class Frame { Cartesian, Null };

const char* to_string(Frame f) noexcept;

/// A map of R^n_nu into itself written as n component expressions over the n
/// source coordinates.
class SmoothMap {
 public:
  SmoothMap(Signature sig, std::vector<ScalarExpr> comps, Frame frame = Frame::Cartesian);

  /// Parses each component over `vars` (default coordinate names when empty:
  /// (u, v) in the null frame, default_coordinate_names otherwise).
  static SmoothMap parse(Signature sig, const std::vector<std::string>& comps,
                         Frame frame = Frame::Cartesian, std::vector<std::string> vars = {});

  static SmoothMap identity(Signature sig, Frame frame = Frame::Cartesian);

  const Signature& signature() const noexcept { return sig_; }
  Frame frame() const noexcept { return frame_; }
  int dim() const noexcept { return sig_.n(); }
  const std::vector<ScalarExpr>& components() const noexcept { return comps_; }
  const std::vector<std::string>& vars() const noexcept { return comps_.front().vars(); }

  Vec eval(const Vec& p) const;

  /// Metric matrix of the frame: eta for Cartesian, du dv for null.
  Mat frame_metric() const;

  /// The same map conjugated into Cartesian coordinates (x, t). Identity
  /// when already Cartesian.
  SmoothMap to_cartesian() const;
  /// The same map conjugated into null coordinates. Requires signature (2,1).
  SmoothMap to_null_frame() const;

  /// Converts a source point of this map's frame to Cartesian coordinates.
  Vec point_to_cartesian(const Vec& p) const;
  /// Converts a Cartesian point to this map's frame.
  Vec point_from_cartesian(const Vec& p) const;

 private:
  Signature sig_;
  std::vector<ScalarExpr> comps_;
  Frame frame_;
};

/// Jet data of every component at one point.
struct PointJet {
  Vec point;
  Vec values;
  Mat jac;                    // row j = gradient of component j
  Vec laps;                   // wave operator of component j in the map's frame
  std::vector<Mat> hessians;  // per component
};

PointJet point_jet(const SmoothMap& F, const Vec& p);

/// Entry (j, i) = d y_j / d x_i.
Mat jacobian(const SmoothMap& F, const Vec& p);

/// sum_i eps_i d^2 phi / dx_i^2 for the flat Cartesian metric of `sig`.
double laplacian(const Signature& sig, const ScalarExpr& phi, const Vec& p);

/// Gradient with the index raised by eta: component i is eps_i d phi / dx_i,
/// so eta_inner(grad, grad) = sum_i eps_i (d phi / dx_i)^2.
Vec eta_gradient(const Signature& sig, const ScalarExpr& phi, const Vec& p);

/// J^T M J with M the frame metric of F.
Mat pullback_metric(const SmoothMap& F, const Vec& p);

/// phi o F by substituting the components of F for phi's coordinates. phi's
/// coordinate count must equal F's dimension; the result is over F's source
/// coordinates.
ScalarExpr compose(const ScalarExpr& phi, const SmoothMap& F);

}  // namespace conf
