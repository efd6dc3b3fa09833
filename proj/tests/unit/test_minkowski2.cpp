#include "doctest.h"

#include "conf/error.hpp"
#include "conf/minkowski2.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace conf;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

double f1(const ScalarExpr& f, double s) { return f.eval(make_vec({s})); }

MonotonePair pair_of(const char* psi, const char* chi, Pattern p = Pattern::BothIncreasing,
                     Branch b = Branch::Direct) {
  return {parse_univariate(chi), parse_univariate(psi), p, b};
}

const NullRectangle kUnit = NullRectangle::diamond();

}  // namespace

TEST_CASE("null coordinates") {
  CHECK(to_null({1, 0}) == Null2{1, 1});
  CHECK(to_null({0, 1}) == Null2{1, -1});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> P(-100, 100);
  for (int k = 0; k < 100; ++k) {
    const Event2 e{P(rng), P(rng)};
    const Event2 back = from_null(to_null(e));
    CHECK(back.x == doctest::Approx(e.x).epsilon(1e-15));
    CHECK(back.t == doctest::Approx(e.t).epsilon(1e-15));
  }
}

TEST_CASE("build_map_from_pair") {
  const auto id = build_map_from_pair(pair_of("s", "s"), kUnit);
  CHECK(id.frame() == Frame::Null);
  CHECK(id.eval(make_vec({0.3, -0.4})) == make_vec({0.3, -0.4}));

  const auto sw = build_map_from_pair(pair_of("2*s", "s^3 + s", Pattern::BothIncreasing, Branch::Swapped), kUnit);
  CHECK(sw.eval(make_vec({0.5, 0.25})) == make_vec({0.5, 0.625}));

  const auto dec = build_map_from_pair(pair_of("-s", "-exp(s)", Pattern::BothDecreasing), kUnit);
  CHECK(conformality_at(dec, make_vec({0.1, 0.2})).conformal);

  CHECK(kind_of([] { build_map_from_pair(pair_of("s", "-s"), kUnit); }) == ErrorKind::MixedMonotonicity);
  CHECK(kind_of([] { build_map_from_pair(pair_of("s^2", "s"), kUnit); }) == ErrorKind::MixedMonotonicity);
  CHECK(kind_of([] { build_map_from_pair(pair_of("s", "s", Pattern::BothDecreasing), kUnit); }) ==
        ErrorKind::MixedMonotonicity);
  CHECK(kind_of([] { build_map_from_pair(pair_of("0*s + 1", "s"), kUnit); }) == ErrorKind::ZeroDerivative);
}

TEST_CASE("built maps are conformal with factor psi' chi'") {
  const auto pair = pair_of("s^3 + s", "tanh(s)");
  const auto F = build_map_from_pair(pair, kUnit);
  for (const auto& p : sample_box(kUnit.box(), 9)) {
    const auto v = conformality_at(F, p, 1e-10);
    CHECK(v.conformal);
    const double want = (3 * p[0] * p[0] + 1) * (1 - std::tanh(p[1]) * std::tanh(p[1]));
    CHECK(v.factor == doctest::Approx(want).epsilon(1e-12));
  }
  // Cartesian form: X = (psi(x+t) + chi(x-t)) / 2, T = (psi(x+t) - chi(x-t)) / 2.
  const auto C = cartesian_form(pair, kUnit);
  const Vec y = C.eval(make_vec({0.2, 0.1}));
  const double U = std::pow(0.3, 3) + 0.3, V = std::tanh(0.1);
  CHECK(y[0] == doctest::Approx(0.5 * (U + V)).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(0.5 * (U - V)).epsilon(1e-15));
}

TEST_CASE("factor_map examples") {
  const auto F = build_map_from_pair(pair_of("s^3 + s", "tanh(s)"), kUnit);
  const auto fac = factor_map(F, kUnit);
  CHECK(fac.pair.branch == Branch::Direct);
  CHECK(fac.pair.pattern == Pattern::BothIncreasing);
  for (double s = -0.99; s < 1; s += 0.01) {
    CHECK(std::abs(f1(fac.pair.psi, s) - (s * s * s + s)) <= 1e-10);
    CHECK(std::abs(f1(fac.pair.chi, s) - std::tanh(s)) <= 1e-10);
  }

  const auto sw = factor_map(SmoothMap::parse(Signature(2, 1), {"tanh(v)", "u"}, Frame::Null), kUnit);
  CHECK(sw.pair.branch == Branch::Swapped);
  CHECK(sw.pair.pattern == Pattern::BothIncreasing);

  CHECK(kind_of([] {
          factor_map(SmoothMap::parse(Signature(2, 1), {"u + v", "v"}, Frame::Null), NullRectangle::diamond());
        }) == ErrorKind::NotSeparable);
  // Separable U but a V that mixes both coordinates is not conformal.
  CHECK(kind_of([] {
          factor_map(SmoothMap::parse(Signature(2, 1), {"u", "u + v"}, Frame::Null), NullRectangle::diamond());
        }) == ErrorKind::NotConformal);
  // Anti-conformal maps fail the pre-check too.
  CHECK(kind_of([] {
          factor_map(SmoothMap::parse(Signature(2, 1), {"u", "-v"}, Frame::Null), NullRectangle::diamond());
        }) == ErrorKind::NotConformal);
}

TEST_CASE("factor_map accepts Cartesian input") {
  const auto pair = pair_of("-s^3 - 2*s", "-atan(s)", Pattern::BothDecreasing, Branch::Swapped);
  const NullRectangle rect(-0.5, 2, -1, 1.5);
  const auto fac = factor_map(cartesian_form(pair, rect), rect);
  CHECK(fac.pair.branch == Branch::Swapped);
  CHECK(fac.pair.pattern == Pattern::BothDecreasing);
  CHECK(fac.reconstruction_error <= 1e-12);
}

TEST_CASE("dalembert_decompose examples") {
  const std::vector<std::string> XT{"x", "t"};
  const NullRectangle rect(-1, 1.5, -2, 0.5);
  const auto d = dalembert_decompose(ScalarExpr::parse("(x+t)^2 + sin(x-t)", XT), rect);
  CHECK(d.reconstruction_error <= 1e-10);
  // f(s) - s^2 and g(s) - sin(s) are opposite constants.
  const double cf = f1(d.f, 0.3) - 0.09;
  const double cg = f1(d.g, 0.3) - std::sin(0.3);
  CHECK(cf + cg == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  for (double s = -1; s <= 1; s += 0.25) {
    CHECK(f1(d.f, s) - s * s == doctest::Approx(cf).epsilon(1e-12));
    CHECK(f1(d.g, s) - std::sin(s) == doctest::Approx(cg).epsilon(1e-12));
  }
  // Base point invariant: f(u0) + g(v0) = X(u0, v0), split evenly.
  CHECK(f1(d.f, d.base.u) == doctest::Approx(f1(d.g, d.base.v)));

  const auto x = dalembert_decompose(ScalarExpr::parse("x", XT), kUnit);
  CHECK(f1(x.f, 0.8) - f1(x.f, 0.0) == doctest::Approx(0.4));
  CHECK(f1(x.g, 0.8) - f1(x.g, 0.0) == doctest::Approx(0.4));
  CHECK(f1(x.f, 0) == doctest::Approx(0.0).scale(1));

  try {
    dalembert_decompose(ScalarExpr::parse("x^2*t", XT), kUnit);
    FAIL("expected NotWaveSolution");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWaveSolution);
    CHECK_FALSE(e.subject().empty());
  }
}

TEST_CASE("compactification") {
  const auto pair = compactification();
  CHECK(pair.branch == Branch::Direct);
  CHECK(pair.pattern == Pattern::BothIncreasing);
  const auto C = cartesian_form(pair, NullRectangle(-10, 10, -10, 10));
  CHECK(C.eval(make_vec({0, 0})) == make_vec({0, 0}));
  const Vec far = C.eval(make_vec({1e6, 0}));
  CHECK(std::abs(far[0]) + std::abs(far[1]) < 1.0);

  const auto inv = compactification_inverse();
  for (double x = -50; x <= 50; x += 0.37) {
    const double y = f1(inv.psi, f1(pair.psi, x));
    CHECK(std::abs(y - x) <= 1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("bounding_null_rectangle") {
  const Event2 two[] = {{0, 0}, {1, 0}};
  const auto r = bounding_null_rectangle(two);
  CHECK(r.a1() == 0);
  CHECK(r.a2() == 1);
  CHECK(r.b1() == 0);
  CHECK(r.b2() == 1);

  // u = cos + sin on the unit circle ranges over [-sqrt 2, sqrt 2].
  std::vector<Event2> circle;
  for (int k = 0; k < 4096; ++k) {
    const double th = 2 * std::numbers::pi * k / 4096;
    circle.push_back({std::cos(th), std::sin(th)});
  }
  const auto d = bounding_null_rectangle(circle);
  const double s2 = std::sqrt(2.0);
  CHECK(d.a1() == doctest::Approx(-s2).epsilon(1e-6));
  CHECK(d.a2() == doctest::Approx(s2).epsilon(1e-6));
  CHECK(d.b1() == doctest::Approx(-s2).epsilon(1e-6));
  CHECK(d.b2() == doctest::Approx(s2).epsilon(1e-6));

  const Event2 one[] = {{0.5, 0.5}};
  CHECK(kind_of([&] { bounding_null_rectangle(one); }) == ErrorKind::DegenerateRectangle);
  const Event2 null_line[] = {{0, 0}, {1, 1}};
  CHECK(kind_of([&] { bounding_null_rectangle(null_line); }) == ErrorKind::DegenerateRectangle);
  CHECK(kind_of([] { NullRectangle(1, 1, 0, 2); }) == ErrorKind::DegenerateRectangle);
}

TEST_CASE("rectangle_equivalence") {
  const NullRectangle dst(1, 3, 0, 4);
  const auto p = rectangle_equivalence(NullRectangle::diamond(), dst);
  for (double s : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
    CHECK(f1(p.psi, s) == s + 2);
    CHECK(f1(p.chi, s) == 2 * s + 2);
  }
  CHECK(f1(p.psi, -1) == 1.0);
  CHECK(f1(p.psi, 1) == 3.0);
  CHECK(f1(p.chi, -1) == 0.0);
  CHECK(f1(p.chi, 1) == 4.0);

  const auto same = rectangle_equivalence(dst, dst);
  for (double s : {1.0, 1.7, 3.0}) CHECK(f1(same.psi, s) == s);

  // Forward then inverse is the identity to rounding.
  const NullRectangle a(-2.5, 0.75, 3, 9), b(0.1, 0.2, -7, 11);
  const auto fwd = rectangle_equivalence(a, b);
  const auto inv = rectangle_equivalence(b, a);
  for (double s = -2.5; s <= 0.75; s += 0.05)
    CHECK(std::abs(f1(inv.psi, f1(fwd.psi, s)) - s) <= 1e-12 * std::max(1.0, std::abs(s)));
  for (double s = 3; s <= 9; s += 0.1)
    CHECK(std::abs(f1(inv.chi, f1(fwd.chi, s)) - s) <= 1e-12 * std::max(1.0, std::abs(s)));
}

TEST_CASE("null_line_check") {
  const auto compact = build_map_from_pair(compactification(), NullRectangle(-5, 5, -5, 5));
  const auto img = line_image(compact, true, 0.5, {-3, 3});
  REQUIRE(img.size() == 64);
  for (const auto& q : img) CHECK(q.u == doctest::Approx(0.2951672353).epsilon(1e-10));

  const auto rep = null_line_check(compact, NullRectangle(-5, 5, -5, 5));
  CHECK(rep.pass);
  CHECK(rep.branch == Branch::Direct);
  CHECK(rep.causal_character_preserved);
  CHECK(rep.orientation == TimeOrientation::Causal);
  CHECK(rep.lines.size() == 18);

  const auto id = null_line_check(SmoothMap::identity(Signature(2, 1), Frame::Null), kUnit);
  CHECK(id.pass);
  CHECK(id.max_variation == 0.0);
  for (const auto& l : id.lines) CHECK(l.image_value == doctest::Approx(l.coordinate));

  const auto shear = null_line_check(SmoothMap::parse(Signature(2, 1), {"u + v", "v"}, Frame::Null), kUnit);
  CHECK_FALSE(shear.pass);
  CHECK_FALSE(shear.lines_preserved);

  const auto flip = null_line_check(SmoothMap::parse(Signature(2, 1), {"v", "u"}, Frame::Null), kUnit);
  CHECK(flip.pass);
  CHECK(flip.branch == Branch::Swapped);
  CHECK(flip.orientation == TimeOrientation::AntiCausal);

  const auto dec = null_line_check(SmoothMap::parse(Signature(2, 1), {"-u", "-v^3 - v"}, Frame::Null), kUnit);
  CHECK(dec.pass);
  CHECK(dec.orientation == TimeOrientation::AntiCausal);
}
