#include "conf/minkowski2.hpp"

#include "conf/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conf {

namespace {

const std::vector<std::string> kPairVars{kPairVar};
const std::vector<std::string> kNullVars{"u", "v"};
constexpr double kGridMargin = 0.01;
// Offset, as a fraction of the side, of the sampled limits at each endpoint.
constexpr double kEndpointOffset = 1e-6;

ScalarExpr pair_var() { return ScalarExpr::variable(kPairVar, kPairVars); }

double derivative_at(const ScalarExpr& f, double s) {
  return f.eval_jet(make_vec({s})).grad[0];
}

// Sign (+1/-1) of f' over the interval; throws when it vanishes or changes.
int monotone_sign(const ScalarExpr& f, Interval dom, const char* name) {
  std::vector<double> pts;
  pts.reserve(kMonotoneSamples + 2);
  pts.push_back(dom.lo + kEndpointOffset * dom.width());
  for (int i = 0; i < kMonotoneSamples; ++i)
    pts.push_back(dom.lo + dom.width() * (i + 0.5) / kMonotoneSamples);
  pts.push_back(dom.hi - kEndpointOffset * dom.width());

  int sign = 0;
  for (double s : pts) {
    const double d = derivative_at(f, s);
    if (!(std::abs(d) > kMinDerivative)) {
      throw Error(ErrorKind::ZeroDerivative,
                  std::string(name) + "' vanishes at s = " + std::to_string(s), f.to_string());
    }
    const int sg = d > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    if (sg != sign) {
      throw Error(ErrorKind::MixedMonotonicity,
                  std::string(name) + " is not monotone: derivative changes sign near s = " +
                      std::to_string(s),
                  f.to_string());
    }
  }
  return sign;
}

std::string point_text(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

SmoothMap as_null_frame(const SmoothMap& F) {
  if (F.frame() == Frame::Null) return F;
  return F.to_null_frame();
}

std::vector<Vec> rectangle_grid(const NullRectangle& rect, int grid) {
  return sample_box(rect.box(), grid, kGridMargin, 0);
}

}  // namespace

const char* to_string(Pattern p) noexcept {
  return p == Pattern::BothIncreasing ? "both-increasing" : "both-decreasing";
}

const char* to_string(Branch b) noexcept { return b == Branch::Direct ? "direct" : "swapped"; }

const char* to_string(TimeOrientation o) noexcept {
  switch (o) {
    case TimeOrientation::Causal: return "causal";
    case TimeOrientation::AntiCausal: return "anti-causal";
    case TimeOrientation::Mixed: return "mixed";
  }
  return "?";
}

ScalarExpr parse_univariate(std::string_view src) { return ScalarExpr::parse(src, kPairVars); }

NullRectangle::NullRectangle(double a1, double a2, double b1, double b2)
    : a1_(a1), a2_(a2), b1_(b1), b2_(b2) {
  const bool finite = std::isfinite(a1) && std::isfinite(a2) && std::isfinite(b1) && std::isfinite(b2);
  if (!finite || !(a1 < a2) || !(b1 < b2)) {
    throw Error(ErrorKind::DegenerateRectangle,
                "null rectangle needs finite bounds with a1 < a2 and b1 < b2");
  }
}

Pattern detect_pattern(const ScalarExpr& psi, const ScalarExpr& chi, Branch branch,
                       const NullRectangle& domain) {
  if (psi.arity() != 1 || chi.arity() != 1)
    throw Error(ErrorKind::InvalidArgument, "monotone pair functions take one coordinate");
  const Interval psi_dom = branch == Branch::Direct ? domain.u() : domain.v();
  const Interval chi_dom = branch == Branch::Direct ? domain.v() : domain.u();
  const int sp = monotone_sign(psi, psi_dom, "psi");
  const int sc = monotone_sign(chi, chi_dom, "chi");
  if (sp != sc) {
    throw Error(ErrorKind::MixedMonotonicity,
                std::string("psi is ") + (sp > 0 ? "increasing" : "decreasing") + " but chi is " +
                    (sc > 0 ? "increasing" : "decreasing"));
  }
  return sp > 0 ? Pattern::BothIncreasing : Pattern::BothDecreasing;
}

SmoothMap build_map_from_pair(const MonotonePair& pair, const NullRectangle& domain) {
  const Pattern seen = detect_pattern(pair.psi, pair.chi, pair.branch, domain);
  if (seen != pair.pattern) {
    throw Error(ErrorKind::MixedMonotonicity, std::string("pair declared ") + to_string(pair.pattern) +
                                                  " but is " + to_string(seen) + " on the domain");
  }
  const auto u = ScalarExpr::variable("u", kNullVars);
  const auto v = ScalarExpr::variable("v", kNullVars);
  const bool direct = pair.branch == Branch::Direct;
  return {Signature(2, 1),
          {pair.psi.substitute({direct ? u : v}), pair.chi.substitute({direct ? v : u})},
          Frame::Null};
}

SmoothMap cartesian_form(const MonotonePair& pair, const NullRectangle& domain) {
  return build_map_from_pair(pair, domain).to_cartesian();
}

Factorization factor_map(const SmoothMap& Fin, const NullRectangle& rect, double tol, int grid) {
  const SmoothMap F = as_null_frame(Fin);
  const auto points = rectangle_grid(rect, grid);

  double max_uu = 0.0, max_uv = 0.0;
  Vec worst_uv;
  for (const auto& p : points) {
    const Mat J = jacobian(F, p);
    max_uu = std::max(max_uu, std::abs(J(0, 0)));
    if (std::abs(J(0, 1)) >= max_uv) {
      max_uv = std::abs(J(0, 1));
      worst_uv = p;
    }
  }
  Branch branch;
  if (max_uv <= tol * std::max(1.0, max_uu)) {
    branch = Branch::Direct;
  } else if (max_uu <= tol * std::max(1.0, max_uv)) {
    branch = Branch::Swapped;
  } else {
    throw Error(ErrorKind::NotSeparable,
                "U depends on both null coordinates (|dU/dv| = " + std::to_string(max_uv) + " at " +
                    point_text(worst_uv) + ")",
                point_text(worst_uv));
  }

  for (const auto& p : points) {
    const ConformalVerdict v = conformality_at(F, p, tol);
    if (!v.conformal) {
      const std::string why = v.witness ? v.witness->reason : "not conformal";
      throw Error(ErrorKind::NotConformal, "map is not conformal at " + point_text(p) + ": " + why,
                  point_text(p));
    }
  }

  const Null2 mid = rect.center();
  const ScalarExpr s = pair_var();
  const auto c = [](double x) { return ScalarExpr::constant(x, kPairVars); };
  const ScalarExpr& U = F.components()[0];
  const ScalarExpr& V = F.components()[1];

  const bool direct = branch == Branch::Direct;
  ScalarExpr psi = direct ? U.substitute({s, c(mid.v)}) : U.substitute({c(mid.u), s});
  ScalarExpr chi = direct ? V.substitute({c(mid.u), s}) : V.substitute({s, c(mid.v)});
  MonotonePair pair{std::move(chi), std::move(psi), Pattern::BothIncreasing, branch};
  pair.pattern = detect_pattern(pair.psi, pair.chi, branch, rect);

  const SmoothMap rebuilt = build_map_from_pair(pair, rect);
  Factorization out{pair, 0.0};
  for (const auto& p : points) {
    const Vec want = F.eval(p);
    const Vec got = rebuilt.eval(p);
    const double err = (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
    out.reconstruction_error = std::max(out.reconstruction_error, err);
  }
  if (!(out.reconstruction_error <= tol)) {
    throw Error(ErrorKind::NotSeparable, "rebuilt map deviates from F by " +
                                             std::to_string(out.reconstruction_error));
  }
  return out;
}

DalembertSplit dalembert_decompose(const ScalarExpr& X, const NullRectangle& rect, double tol,
                                   int grid) {
  if (X.arity() != 2)
    throw Error(ErrorKind::DimensionMismatch, "wave solution must be a function of (x, t)");
  const auto u = ScalarExpr::variable("u", kNullVars);
  const auto v = ScalarExpr::variable("v", kNullVars);
  const ScalarExpr Xn = X.substitute({0.5 * (u + v), 0.5 * (u - v)});
  const auto points = rectangle_grid(rect, grid);

  DalembertSplit out{X, X, rect.center(), 0.0, 0.0};
  for (const auto& q : points) {
    const Event2 e = from_null({q[0], q[1]});
    const Jet2 j = X.eval_jet(make_vec({e.x, e.t}));
    const double res =
        std::abs(j.hess(0, 0) - j.hess(1, 1)) / std::max(1.0, std::abs(j.hess(0, 0)) + std::abs(j.hess(1, 1)));
    if (res > out.wave_residual) {
      out.wave_residual = res;
      if (res > tol) {
        throw Error(ErrorKind::NotWaveSolution,
                    "wave operator residual " + std::to_string(res) + " at (x, t) = (" +
                        std::to_string(e.x) + ", " + std::to_string(e.t) + ")",
                    point_text(make_vec({e.x, e.t})));
      }
    }
  }

  const Null2 b = out.base;
  const double half = 0.5 * Xn.eval(make_vec({b.u, b.v}));
  const ScalarExpr s = pair_var();
  const auto c = [](double x) { return ScalarExpr::constant(x, kPairVars); };
  out.f = Xn.substitute({s, c(b.v)}) + (-half);
  out.g = Xn.substitute({c(b.u), s}) + (-half);

  double scale = 1.0;
  for (const auto& q : points) {
    const double want = Xn.eval(q);
    const double got = out.f.eval(make_vec({q[0]})) + out.g.eval(make_vec({q[1]}));
    out.reconstruction_error = std::max(out.reconstruction_error, std::abs(got - want));
    scale = std::max(scale, std::abs(want));
  }
  if (!(out.reconstruction_error <= tol * scale)) {
    throw Error(ErrorKind::NotWaveSolution, "f(u) + g(v) misses X by " +
                                                std::to_string(out.reconstruction_error));
  }
  return out;
}

MonotonePair compactification() {
  const ScalarExpr f = parse_univariate("2/pi*atan(s)");
  return {f, f, Pattern::BothIncreasing, Branch::Direct};
}

MonotonePair compactification_inverse() {
  const ScalarExpr f = parse_univariate("tan(pi*s/2)");
  return {f, f, Pattern::BothIncreasing, Branch::Direct};
}

NullRectangle bounding_null_rectangle(std::span<const Event2> points) {
  if (points.empty()) throw Error(ErrorKind::DegenerateRectangle, "no points to bound");
  double a1 = INFINITY, a2 = -INFINITY, b1 = INFINITY, b2 = -INFINITY;
  for (const Event2& p : points) {
    const Null2 q = to_null(p);
    a1 = std::min(a1, q.u);
    a2 = std::max(a2, q.u);
    b1 = std::min(b1, q.v);
    b2 = std::max(b2, q.v);
  }
  if (!(a1 < a2) || !(b1 < b2)) {
    throw Error(ErrorKind::DegenerateRectangle,
                "points span zero width in " + std::string(!(a1 < a2) ? "u" : "v"));
  }
  return {a1, a2, b1, b2};
}

MonotonePair rectangle_equivalence(const NullRectangle& src, const NullRectangle& dst) {
  auto affine = [](Interval from, Interval to) {
    const double slope = to.width() / from.width();
    const double offset = 0.5 * (to.lo + to.hi) - slope * 0.5 * (from.lo + from.hi);
    return slope * pair_var() + offset;
  };
  return {affine(src.v(), dst.v()), affine(src.u(), dst.u()), Pattern::BothIncreasing,
          Branch::Direct};
}

std::vector<Null2> line_image(const SmoothMap& Fin, bool u_line, double c, Interval range,
                              int points) {
  const SmoothMap F = as_null_frame(Fin);
  std::vector<Null2> out;
  out.reserve(points);
  for (double s : linspace(range.lo, range.hi, points)) {
    const Vec y = F.eval(u_line ? make_vec({c, s}) : make_vec({s, c}));
    out.push_back({y[0], y[1]});
  }
  return out;
}

NullLineReport null_line_check(const SmoothMap& Fin, const NullRectangle& rect, double tol,
                               int lines, int points_per_line) {
  const SmoothMap F = as_null_frame(Fin);
  const SmoothMap cart = F.to_cartesian();
  const Signature sig(2, 1);
  const Box inner = {{rect.a1() + kGridMargin * rect.u().width(), rect.a2() - kGridMargin * rect.u().width()},
                     {rect.b1() + kGridMargin * rect.v().width(), rect.b2() - kGridMargin * rect.v().width()}};

  // Spread of each image coordinate along a line, relative to its magnitude.
  auto spread = [](const std::vector<Null2>& img, bool first) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& q : img) {
      const double w = first ? q.u : q.v;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    return std::pair{(hi - lo) / std::max({1.0, std::abs(lo), std::abs(hi)}), 0.5 * (lo + hi)};
  };

  NullLineReport rep;
  bool branch_set = false;
  rep.lines_preserved = true;
  for (int pass = 0; pass < 2; ++pass) {
    const bool u_line = pass == 0;
    const Interval along = u_line ? inner[1] : inner[0];
    const Interval across = u_line ? inner[0] : inner[1];
    for (double c : linspace(across.lo, across.hi, lines)) {
      const auto img = line_image(F, u_line, c, along, points_per_line);
      const auto [var_u, mid_u] = spread(img, true);
      const auto [var_v, mid_v] = spread(img, false);
      if (!branch_set) {
        rep.branch = var_u <= var_v ? Branch::Direct : Branch::Swapped;
        branch_set = true;
      }
      // Direct: u-lines keep U, v-lines keep V. Swapped: the other way round.
      const bool keep_u = (rep.branch == Branch::Direct) == u_line;
      LineImage li{u_line, c, keep_u ? mid_u : mid_v, keep_u ? var_u : var_v};
      rep.max_variation = std::max(rep.max_variation, li.variation);
      rep.lines_preserved = rep.lines_preserved && li.variation <= tol;
      rep.lines.push_back(li);
    }
  }

  const Vec probes[4] = {make_vec({1, 0}), make_vec({0, 1}), make_vec({1, 1}), make_vec({1, -1})};
  bool causal = true, anticausal = true;
  rep.causal_character_preserved = true;
  for (const auto& q : sample_box(rect.box(), lines, kGridMargin, 0)) {
    const Vec xc = F.point_to_cartesian(q);
    const Mat J = jacobian(cart, xc);
    for (const auto& w : probes) {
      if (causal_character(sig, J * w) != causal_character(sig, w))
        rep.causal_character_preserved = false;
    }
    const double dt = (J * probes[1])[1];
    causal = causal && dt > 0;
    anticausal = anticausal && dt < 0;
  }
  rep.orientation = causal       ? TimeOrientation::Causal
                    : anticausal ? TimeOrientation::AntiCausal
                                 : TimeOrientation::Mixed;
  rep.pass = rep.lines_preserved && rep.causal_character_preserved;
  return rep;
}

}  // namespace conf
