#include "conf/conformal.hpp"

#include "conf/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <set>

namespace conf {

namespace {

std::vector<std::string> target_names(int n) {
  std::vector<std::string> names;
  for (int j = 1; j <= n; ++j) names.push_back("y" + std::to_string(j));
  return names;
}

Mat symmetrized(Mat g) {
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

bool singular_jacobian(const Mat& J) {
  double scale = 1.0;
  for (int j = 0; j < J.rows(); ++j) scale *= J.row(j).norm();
  if (!(scale > 0.0)) return true;
  return std::abs(J.determinant()) < kSingularRatio * scale;
}

double gradient_norm(const Signature& sig, const ScalarExpr& phi, const Vec& p) {
  const Vec g = eta_gradient(sig, phi, p);
  return eta_inner(sig, g, g);
}

// Cartesian form of a map together with its probes composed into it.
class ProbeEvaluator {
 public:
  explicit ProbeEvaluator(const SmoothMap& F)
      : source_(F), cart_(F.to_cartesian()), probes_(harmonic_probes(F.signature())) {
    for (const auto& pr : probes_) composed_.push_back(compose(pr.phi, cart_));
  }

  const std::vector<Probe>& probes() const { return probes_; }
  const Signature& sig() const { return cart_.signature(); }

  Vec cartesian(const Vec& p) const { return source_.point_to_cartesian(p); }

  // |Lap(phi_k o F)| for every probe at a Cartesian point.
  std::vector<double> residuals(const Vec& xc) const {
    std::vector<double> r;
    r.reserve(composed_.size());
    for (const auto& c : composed_) r.push_back(std::abs(laplacian(sig(), c, xc)));
    return r;
  }

  bool gradient_condition(const Vec& xc) const {
    if (sig().definite()) return true;
    const auto& comps = cart_.components();
    return gradient_norm(sig(), comps.front(), xc) > gradient_norm(sig(), comps.back(), xc);
  }

 private:
  const SmoothMap& source_;
  SmoothMap cart_;
  std::vector<Probe> probes_;
  std::vector<ScalarExpr> composed_;
};

}  // namespace

ConformalVerdict conformality_at(const SmoothMap& F, const Vec& p, double tol) {
  const int n = F.dim();
  const Mat J = jacobian(F, p);
  const Mat M = F.frame_metric();
  const Mat G = symmetrized(J.transpose() * M * J);
  const double lambda = (M.inverse() * G).trace() / n;

  ConformalVerdict v;
  v.factor = lambda;
  v.residual = (G - lambda * M).cwiseAbs().maxCoeff() / std::max(std::abs(lambda), kFactorFloor);
  v.singular = singular_jacobian(J);

  const bool shape_ok = v.residual <= tol;
  if (v.singular) {
    v.witness = Witness{p, J, "singular Jacobian"};
  } else if (std::abs(lambda) <= kFactorFloor) {
    v.witness = Witness{p, G, "degenerate conformal factor"};
  } else if (shape_ok && lambda > 0) {
    v.conformal = true;
  } else if (shape_ok) {
    v.anti_signature = true;
    v.witness = Witness{p, G, "anti-conformal (λ<0)"};
  } else {
    v.witness = Witness{p, G, "pullback metric not proportional to the metric"};
  }
  return v;
}

std::vector<Probe> harmonic_probes(const Signature& sig) {
  const int n = sig.n();
  const int space = n - sig.nu();
  const auto names = target_names(n);
  auto y = [&](int j) { return ScalarExpr::variable(names[j - 1], names); };
  auto label = [&](int j) { return names[j - 1]; };

  std::vector<Probe> out;
  std::set<std::string> seen;
  auto add = [&](std::string id, ScalarExpr phi) {
    if (seen.insert(id).second) out.push_back({std::move(id), std::move(phi)});
  };

  for (int j = 1; j <= n; ++j) add(label(j), y(j));
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) add(label(j) + "*" + label(k), y(j) * y(k));

  if (!sig.definite()) {
    for (int k = 1; k <= space; ++k)
      add(label(k) + "^2+" + label(n) + "^2", y(k) * y(k) + y(n) * y(n));
    for (int k = space + 1; k <= n; ++k)
      add(label(1) + "^2+" + label(k) + "^2", y(1) * y(1) + y(k) * y(k));
  } else {
    for (int k = 2; k <= n; ++k)
      add(label(1) + "^2-" + label(k) + "^2", y(1) * y(1) - y(k) * y(k));
  }
  return out;
}

double ProbeReport::max_residual() const {
  double m = 0.0;
  for (const auto& p : probes) m = std::max(m, p.max_residual);
  return m;
}

ProbeReport probe_suite(const SmoothMap& F, const std::vector<Vec>& samples, double tol) {
  ProbeEvaluator ev(F);
  ProbeReport rep;
  rep.tolerance = tol;
  rep.sample_count = samples.size();
  for (const auto& pr : ev.probes()) rep.probes.push_back({pr.id, pr.phi.to_string(), 0.0});

  rep.gradient_condition = true;
  for (const auto& s : samples) {
    const Vec xc = ev.cartesian(s);
    const auto r = ev.residuals(xc);
    for (std::size_t k = 0; k < r.size(); ++k)
      rep.probes[k].max_residual = std::max(rep.probes[k].max_residual, r[k]);
    if (rep.gradient_condition && !ev.gradient_condition(xc)) {
      rep.gradient_condition = false;
      rep.gradient_witness = s;
    }
  }
  rep.suite_pass = std::all_of(rep.probes.begin(), rep.probes.end(),
                               [&](const ProbeResidual& p) { return p.max_residual <= tol; });
  return rep;
}

EquivalenceReport check_equivalence(const SmoothMap& F, const std::vector<Vec>& samples,
                                    double tol) {
  ProbeEvaluator ev(F);
  EquivalenceReport rep;
  rep.probes.tolerance = tol;
  rep.probes.sample_count = samples.size();
  rep.probes.gradient_condition = true;
  for (const auto& pr : ev.probes()) rep.probes.probes.push_back({pr.id, pr.phi.to_string(), 0.0});

  rep.jacobian_conformal = true;
  for (const auto& s : samples) {
    const Vec xc = ev.cartesian(s);
    const auto r = ev.residuals(xc);
    bool probes_ok = true;
    for (std::size_t k = 0; k < r.size(); ++k) {
      rep.probes.probes[k].max_residual = std::max(rep.probes.probes[k].max_residual, r[k]);
      probes_ok = probes_ok && r[k] <= tol;
    }
    const bool grad_ok = ev.gradient_condition(xc);
    if (!grad_ok && rep.probes.gradient_condition) {
      rep.probes.gradient_condition = false;
      rep.probes.gradient_witness = s;
    }
    ConformalVerdict v = conformality_at(F, s, tol);
    SampleAgreement a{s, probes_ok && grad_ok, v.conformal};
    if (!a.agree()) ++rep.disagreements;
    rep.jacobian_conformal = rep.jacobian_conformal && v.conformal;
    rep.samples.push_back(std::move(a));
    rep.verdicts.push_back(std::move(v));
  }
  rep.probes.suite_pass =
      std::all_of(rep.probes.probes.begin(), rep.probes.probes.end(),
                  [&](const ProbeResidual& p) { return p.max_residual <= tol; });
  rep.probe_conformal = rep.probes.suite_pass && rep.probes.gradient_condition;
  return rep;
}

AffineModel liouville_fit(const std::vector<SamplePair>& samples, const Signature& sig,
                          double tol) {
  const int n = sig.n();
  const auto count = static_cast<Eigen::Index>(samples.size());
  if (count < n + 1) {
    throw Error(ErrorKind::InsufficientSamples,
                "affine fit in dimension " + std::to_string(n) + " needs at least " +
                    std::to_string(n + 1) + " samples, got " + std::to_string(count));
  }
  Mat X(count, n), Y(count, n);
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto& s = samples[k];
    if (s.x.size() != n || s.y.size() != n)
      throw Error(ErrorKind::DimensionMismatch, "sample pair does not match signature " + sig.to_string());
    X.row(k) = s.x.transpose();
    Y.row(k) = s.y.transpose();
  }
  const Eigen::RowVectorXd xbar = X.colwise().mean();
  const Eigen::RowVectorXd ybar = Y.colwise().mean();
  const Mat Xc = X.rowwise() - xbar;
  const Mat Yc = Y.rowwise() - ybar;

  // Affine independence of the samples is full column rank of the centred data.
  const Mat normal = Xc.transpose() * Xc;
  Eigen::FullPivLU<Mat> lu(normal);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) {
    throw Error(ErrorKind::InsufficientSamples,
                "samples are not affinely independent (rank " + std::to_string(lu.rank()) + " < " +
                    std::to_string(n) + ")");
  }
  const Mat Mt = normal.ldlt().solve(Xc.transpose() * Yc);  // n x n, equals M^T

  AffineModel model;
  const Mat M = Mt.transpose();
  model.b = ybar.transpose() - M * xbar.transpose();

  const double yscale = std::max(1.0, Y.cwiseAbs().maxCoeff());
  const Mat pred = (X * Mt).rowwise() + model.b.transpose();
  model.fit_residual = (pred - Y).cwiseAbs().maxCoeff() / yscale;
  if (!(model.fit_residual <= tol)) {
    throw Error(ErrorKind::NotAffine,
                "affine fit residual " + std::to_string(model.fit_residual) + " exceeds tolerance");
  }

  const double det = M.determinant();
  if (!(std::abs(det) > 0.0))
    throw Error(ErrorKind::NotEtaOrthogonal, "fitted linear part is singular");
  model.alpha = std::pow(std::abs(det), 1.0 / n);
  model.A = M / model.alpha;
  const Mat eta = sig.eta();
  model.orthogonality_residual = (model.A.transpose() * eta * model.A - eta).cwiseAbs().maxCoeff();
  if (!(model.orthogonality_residual <= tol)) {
    throw Error(ErrorKind::NotEtaOrthogonal,
                "A^T eta A deviates from eta by " + std::to_string(model.orthogonality_residual));
  }
  return model;
}

ScalingReport scaling_check(const SmoothMap& F, const ScalarExpr& phi,
                            const std::vector<Vec>& samples, double tol) {
  const SmoothMap cart = F.to_cartesian();
  const Signature& sig = cart.signature();
  std::vector<SamplePair> pairs;
  std::vector<Vec> points;
  for (const auto& s : samples) {
    Vec xc = F.point_to_cartesian(s);
    pairs.push_back({xc, cart.eval(xc)});
    points.push_back(std::move(xc));
  }

  ScalingReport rep;
  rep.model = liouville_fit(pairs, sig, tol);
  const double a2 = rep.model.alpha * rep.model.alpha;
  const ScalarExpr pulled = compose(phi, cart);

  rep.vacuous = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double lhs = laplacian(sig, pulled, points[k]);
    const double target = laplacian(sig, phi, pairs[k].y);
    const double rhs = a2 * target;
    const double dev = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (std::abs(target) > tol && rep.vacuous) {
      rep.vacuous = false;
      rep.ratio = lhs / target;
    }
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

const char* to_string(CRKind k) noexcept {
  switch (k) {
    case CRKind::Holomorphic: return "holomorphic";
    case CRKind::AntiHolomorphic: return "anti-holomorphic";
    case CRKind::Neither: return "neither";
  }
  return "?";
}

CRClass classify_cr(const SmoothMap& F, const std::vector<Vec>& samples, double tol) {
  if (F.signature() != Signature(2, 0) || F.frame() != Frame::Cartesian) {
    throw Error(ErrorKind::InvalidArgument,
                "Cauchy-Riemann classification needs a Cartesian map of signature (2,0)");
  }
  CRClass out;
  for (const auto& p : samples) {
    const Mat J = jacobian(F, p);
    const double ux = J(0, 0), uy = J(0, 1), vx = J(1, 0), vy = J(1, 1);
    const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    const double holo = std::max(std::abs(ux - vy), std::abs(uy + vx)) / scale;
    const double anti = std::max(std::abs(ux + vy), std::abs(uy - vx)) / scale;
    out.holomorphic_residual = std::max(out.holomorphic_residual, holo);
    out.antiholomorphic_residual = std::max(out.antiholomorphic_residual, anti);
    if (!out.witness && singular_jacobian(J)) out.witness = Witness{p, J, "singular Jacobian"};
  }
  if (out.witness) {
    out.kind = CRKind::Neither;
    out.residual = std::min(out.holomorphic_residual, out.antiholomorphic_residual);
    return out;
  }
  if (out.holomorphic_residual <= tol) {
    out.kind = CRKind::Holomorphic;
    out.residual = out.holomorphic_residual;
  } else if (out.antiholomorphic_residual <= tol) {
    out.kind = CRKind::AntiHolomorphic;
    out.residual = out.antiholomorphic_residual;
  } else {
    out.kind = CRKind::Neither;
    out.residual = std::min(out.holomorphic_residual, out.antiholomorphic_residual);
  }
  return out;
}

}  // namespace conf
