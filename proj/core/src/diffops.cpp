#include "conf/diffops.hpp"

#include "conf/error.hpp"

namespace conf {

const char* to_string(Frame f) noexcept {
  return f == Frame::Null ? "null" : "cartesian";
}

namespace {

const std::vector<std::string> kNullVars{"u", "v"};
const std::vector<std::string> kLorentzVars{"x", "t"};

void require_lorentz2(const Signature& sig, const char* what) {
  if (sig != Signature(2, 1)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " requires signature (2,1), got " + sig.to_string());
  }
}

}  // namespace

SmoothMap::SmoothMap(Signature sig, std::vector<ScalarExpr> comps, Frame frame)
    : sig_(sig), comps_(std::move(comps)), frame_(frame) {
  if (static_cast<int>(comps_.size()) != sig_.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                "map has " + std::to_string(comps_.size()) + " components, signature " +
                    sig_.to_string() + " needs " + std::to_string(sig_.n()));
  }
  for (const auto& c : comps_) {
    if (c.arity() != sig_.n())
      throw Error(ErrorKind::DimensionMismatch, "component '" + c.to_string() + "' has " +
                                                    std::to_string(c.arity()) + " coordinates");
    if (c.vars() != comps_.front().vars())
      throw Error(ErrorKind::InvalidArgument, "components use different coordinate lists");
  }
  if (frame_ == Frame::Null) require_lorentz2(sig_, "null frame");
}

SmoothMap SmoothMap::parse(Signature sig, const std::vector<std::string>& comps, Frame frame,
                           std::vector<std::string> vars) {
  if (vars.empty())
    vars = frame == Frame::Null ? kNullVars : default_coordinate_names(sig.n(), sig.nu());
  std::vector<ScalarExpr> parsed;
  parsed.reserve(comps.size());
  for (const auto& c : comps) parsed.push_back(ScalarExpr::parse(c, vars));
  return {sig, std::move(parsed), frame};
}

SmoothMap SmoothMap::identity(Signature sig, Frame frame) {
  const auto vars = frame == Frame::Null ? kNullVars : default_coordinate_names(sig.n(), sig.nu());
  std::vector<ScalarExpr> comps;
  for (const auto& v : vars) comps.push_back(ScalarExpr::variable(v, vars));
  return {sig, std::move(comps), frame};
}

Vec SmoothMap::eval(const Vec& p) const {
  Vec y(dim());
  for (int j = 0; j < dim(); ++j) y[j] = comps_[j].eval(p);
  return y;
}

Mat SmoothMap::frame_metric() const {
  if (frame_ == Frame::Cartesian) return sig_.eta();
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = m(1, 0) = 0.5;
  return m;
}

SmoothMap SmoothMap::to_cartesian() const {
  if (frame_ == Frame::Cartesian) return *this;
  const auto x = ScalarExpr::variable("x", kLorentzVars);
  const auto t = ScalarExpr::variable("t", kLorentzVars);
  const ScalarExpr U = comps_[0].substitute({x + t, x - t});
  const ScalarExpr V = comps_[1].substitute({x + t, x - t});
  return {sig_, {0.5 * (U + V), 0.5 * (U - V)}, Frame::Cartesian};
}

SmoothMap SmoothMap::to_null_frame() const {
  if (frame_ == Frame::Null) return *this;
  require_lorentz2(sig_, "null frame");
  const auto u = ScalarExpr::variable("u", kNullVars);
  const auto v = ScalarExpr::variable("v", kNullVars);
  const ScalarExpr X = comps_[0].substitute({0.5 * (u + v), 0.5 * (u - v)});
  const ScalarExpr T = comps_[1].substitute({0.5 * (u + v), 0.5 * (u - v)});
  return {sig_, {X + T, X - T}, Frame::Null};
}

Vec SmoothMap::point_to_cartesian(const Vec& p) const {
  if (frame_ == Frame::Cartesian) return p;
  const Event2 e = from_null({p[0], p[1]});
  return make_vec({e.x, e.t});
}

Vec SmoothMap::point_from_cartesian(const Vec& p) const {
  if (frame_ == Frame::Cartesian) return p;
  const Null2 q = to_null({p[0], p[1]});
  return make_vec({q.u, q.v});
}

PointJet point_jet(const SmoothMap& F, const Vec& p) {
  const int n = F.dim();
  PointJet pj;
  pj.point = p;
  pj.values.resize(n);
  pj.jac.resize(n, n);
  pj.laps.resize(n);
  pj.hessians.reserve(n);
  for (int j = 0; j < n; ++j) {
    Jet2 jet = F.components()[j].eval_jet(p);
    pj.values[j] = jet.value;
    pj.jac.row(j) = jet.grad.transpose();
    if (F.frame() == Frame::Null) {
      pj.laps[j] = 4.0 * jet.hess(0, 1);
    } else {
      double lap = 0.0;
      for (int i = 0; i < n; ++i) lap += F.signature().epsilon(i) * jet.hess(i, i);
      pj.laps[j] = lap;
    }
    pj.hessians.push_back(std::move(jet.hess));
  }
  return pj;
}

Mat jacobian(const SmoothMap& F, const Vec& p) {
  const int n = F.dim();
  Mat J(n, n);
  for (int j = 0; j < n; ++j) J.row(j) = F.components()[j].eval_jet(p).grad.transpose();
  return J;
}

static void require_arity(const Signature& sig, const ScalarExpr& phi) {
  if (phi.arity() != sig.n()) {
    throw Error(ErrorKind::DimensionMismatch, "function has " + std::to_string(phi.arity()) +
                                                  " coordinates, signature " + sig.to_string());
  }
}

double laplacian(const Signature& sig, const ScalarExpr& phi, const Vec& p) {
  require_arity(sig, phi);
  const Jet2 j = phi.eval_jet(p);
  double acc = 0.0;
  for (int i = 0; i < sig.n(); ++i) acc += sig.epsilon(i) * j.hess(i, i);
  return acc;
}

Vec eta_gradient(const Signature& sig, const ScalarExpr& phi, const Vec& p) {
  require_arity(sig, phi);
  Vec g = phi.eval_jet(p).grad;
  for (int i = 0; i < sig.n(); ++i) g[i] *= sig.epsilon(i);
  return g;
}

Mat pullback_metric(const SmoothMap& F, const Vec& p) {
  const Mat J = jacobian(F, p);
  Mat G = J.transpose() * F.frame_metric() * J;
  // J^T M J is symmetric in exact arithmetic; enforce it bit for bit.
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < i; ++j) G(i, j) = G(j, i);
  return G;
}

ScalarExpr compose(const ScalarExpr& phi, const SmoothMap& F) {
  if (phi.arity() != F.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot compose a function of " +
                                                  std::to_string(phi.arity()) +
                                                  " coordinates with a map of dimension " +
                                                  std::to_string(F.dim()));
  }
  return phi.substitute(F.components());
}

}  // namespace conf
