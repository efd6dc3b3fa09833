#include "doctest.h"

#include "conf/diffops.hpp"
#include "conf/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace conf;

namespace {
const std::vector<std::string> XT{"x", "t"};
const double kTwoOverPi = 2.0 / std::numbers::pi;
}  // namespace

TEST_CASE("jacobian examples") {
  const Signature L(2, 1);
  const auto F = SmoothMap::parse(L, {"x + t", "x - t"});
  const Mat J = jacobian(F, make_vec({0.3, 4.0}));
  CHECK(J(0, 0) == 1);
  CHECK(J(0, 1) == 1);
  CHECK(J(1, 0) == 1);
  CHECK(J(1, 1) == -1);

  for (int n = 1; n <= 4; ++n) {
    const auto I = SmoothMap::identity(Signature(n, 0));
    CHECK(jacobian(I, Vec::Constant(n, 0.7)) == Mat::Identity(n, n));
  }

  // d/dx atan = 1 / (1 + x^2), so the Jacobian at the origin is 2/pi I.
  const auto C = SmoothMap::parse(L, {"2/pi*atan(x)", "2/pi*atan(t)"});
  const Mat Jc = jacobian(C, make_vec({0, 0}));
  CHECK(Jc(0, 0) == doctest::Approx(kTwoOverPi).epsilon(1e-15));
  CHECK(Jc(1, 1) == doctest::Approx(kTwoOverPi).epsilon(1e-15));
  CHECK(Jc(0, 1) == 0);
  CHECK(Jc(1, 0) == 0);
}

TEST_CASE("laplacian examples") {
  const Vec p = make_vec({0.4, -1.3});
  CHECK(laplacian(Signature(2, 1), ScalarExpr::parse("x^2 + t^2", XT), p) == 0.0);
  CHECK(laplacian(Signature(2, 1), ScalarExpr::parse("x*t", XT), p) == 0.0);
  CHECK(laplacian(Signature(2, 0), ScalarExpr::parse("x^2 + t^2", XT), p) == 4.0);
  CHECK_THROWS_AS(laplacian(Signature(3, 1), ScalarExpr::parse("x", XT), make_vec({0, 0, 0})),
                  Error);
}

TEST_CASE("eta_gradient examples") {
  const Signature L(2, 1);
  const Vec p = make_vec({0.2, 0.9});
  const Vec gt = eta_gradient(L, ScalarExpr::parse("t", XT), p);
  CHECK(gt == make_vec({0, -1}));
  CHECK(eta_inner(L, gt, gt) == -1.0);
  const Vec gx = eta_gradient(L, ScalarExpr::parse("x", XT), p);
  CHECK(gx == make_vec({1, 0}));
  CHECK(eta_inner(L, gx, gx) == 1.0);
  const Vec gn = eta_gradient(L, ScalarExpr::parse("x + t", XT), p);
  CHECK(eta_inner(L, gn, gn) == 0.0);
}

TEST_CASE("pullback metric examples") {
  const Signature L(2, 1);
  CHECK(pullback_metric(SmoothMap::identity(L), make_vec({1, 2})) == L.eta());

  // J = [[0,1],[1,0]]: J^T eta J = diag(-1, 1).
  const auto swap = SmoothMap::parse(L, {"t", "x"});
  const Mat G = pullback_metric(swap, make_vec({0.5, 0.5}));
  CHECK(G == Mat(-L.eta()));

  // Cartesian compactification at the origin: (2/pi)^2 eta.
  const auto compact = SmoothMap::parse(L, {"2/pi*atan(u)", "2/pi*atan(v)"}, Frame::Null);
  const Mat Gc = pullback_metric(compact.to_cartesian(), make_vec({0, 0}));
  const Mat want = kTwoOverPi * kTwoOverPi * L.eta();
  CHECK((Gc - want).cwiseAbs().maxCoeff() <= 1e-15);
  // In the null frame the same factor multiplies du dv.
  const Mat Gn = pullback_metric(compact, make_vec({0, 0}));
  CHECK(Gn(0, 1) == doctest::Approx(0.5 * kTwoOverPi * kTwoOverPi).epsilon(1e-15));
  CHECK(Gn(0, 0) == 0.0);
}

TEST_CASE("pullback metric is symmetric") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> P(-1, 1);
  const auto F = SmoothMap::parse(Signature(3, 1),
                                  {"x1 + sin(x2*x3)", "x2^3 - x1*x3", "exp(0.2*x1) + x3"});
  for (int k = 0; k < 20; ++k) {
    const Mat G = pullback_metric(F, make_vec({P(rng), P(rng), P(rng)}));
    CHECK(G == G.transpose());
  }
}

TEST_CASE("products of distinct coordinates are harmonic") {
  const Signature s(4, 2);
  const auto vars = default_coordinate_names(4, 2);
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      const auto phi = ScalarExpr::variable(vars[j], vars) * ScalarExpr::variable(vars[k], vars);
      CHECK(laplacian(s, phi, make_vec({0.1, -2, 3, 0.5})) == 0.0);
    }
}

TEST_CASE("chain rule for linear probes") {
  // Lap(phi o F) = sum_j dphi/dy_j Lap(y_j) for linear phi.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> P(-1, 1);
  const Signature s(3, 1);
  const auto F = SmoothMap::parse(s, {"x1^2*x2 + cos(x3)", "tanh(x1 - x3) + x2^3", "x1*x2*x3"});
  const std::vector<std::string> Y{"y1", "y2", "y3"};
  const Vec a = make_vec({0.7, -1.1, 2.5});
  const auto phi = ScalarExpr::parse("0.7*y1 - 1.1*y2 + 2.5*y3 + 4", Y);
  for (int k = 0; k < 20; ++k) {
    const Vec p = make_vec({P(rng), P(rng), P(rng)});
    const PointJet pj = point_jet(F, p);
    const double direct = laplacian(s, compose(phi, F), p);
    CHECK(direct == doctest::Approx(a.dot(pj.laps)).epsilon(1e-12));
  }
}

TEST_CASE("null frame and Cartesian frame describe the same map") {
  const Signature L(2, 1);
  const auto N = SmoothMap::parse(L, {"u^3 + u", "tanh(v)"}, Frame::Null);
  const auto C = N.to_cartesian();
  CHECK(C.frame() == Frame::Cartesian);
  CHECK(C.vars() == XT);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> P(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const Vec q = make_vec({P(rng), P(rng)});
    const Vec xc = N.point_to_cartesian(q);
    const Vec yn = N.eval(q);
    const Vec yc = C.eval(xc);
    const Event2 e = from_null({yn[0], yn[1]});
    CHECK(yc[0] == doctest::Approx(e.x).epsilon(1e-14));
    CHECK(yc[1] == doctest::Approx(e.t).epsilon(1e-14));
    // Round trip through both frames.
    const auto back = C.to_null_frame();
    const Vec yb = back.eval(q);
    CHECK(yb[0] == doctest::Approx(yn[0]).epsilon(1e-13));
    CHECK(yb[1] == doctest::Approx(yn[1]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(SmoothMap::parse(Signature(2, 0), {"u", "v"}, Frame::Null), Error);
}

TEST_CASE("map construction validates components") {
  CHECK_THROWS_AS(SmoothMap::parse(Signature(2, 1), {"x"}), Error);
  CHECK_THROWS_AS(SmoothMap(Signature(2, 1), {ScalarExpr::parse("x", XT),
                                              ScalarExpr::parse("y", {"x", "y"})}),
                  Error);
  CHECK_THROWS_AS(compose(ScalarExpr::parse("x", {"x"}), SmoothMap::identity(Signature(2, 1))),
                  Error);
}
