#include "doctest.h"

#include "conf/error.hpp"
#include "conf/signature.hpp"

#include <random>

using namespace conf;

TEST_CASE("signature epsilon and eta") {
  const Signature s(4, 2);
  CHECK(s.epsilon(0) == 1.0);
  CHECK(s.epsilon(1) == 1.0);
  CHECK(s.epsilon(2) == -1.0);
  CHECK(s.epsilon(3) == -1.0);
  CHECK(s.eta().diagonal() == make_vec({1, 1, -1, -1}));
  CHECK_FALSE(s.definite());
  CHECK(Signature(3, 0).definite());
  CHECK(Signature(3, 3).definite());
  CHECK_THROWS_AS(Signature(2, 3), Error);
  CHECK_THROWS_AS(Signature(0, 0), Error);
}

TEST_CASE("eta_inner examples") {
  const Signature s(2, 1);
  CHECK(eta_inner(s, make_vec({1, 0}), make_vec({1, 0})) == 1.0);
  CHECK(eta_inner(s, make_vec({0, 1}), make_vec({0, 1})) == -1.0);
  CHECK(eta_inner(s, make_vec({1, 1}), make_vec({1, 1})) == 0.0);

  try {
    eta_inner(s, make_vec({1, 0, 0}), make_vec({1, 0}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("causal_character examples") {
  const Signature s(2, 1);
  CHECK(causal_character(s, make_vec({1, 1}), 1e-12) == CausalCharacter::Null);
  CHECK(causal_character(s, make_vec({2, 1})) == CausalCharacter::Spacelike);
  CHECK(causal_character(s, make_vec({0, 3})) == CausalCharacter::Timelike);
  CHECK_THROWS_AS(causal_character(s, make_vec({1})), Error);
}

TEST_CASE("eta_inner is symmetric and bilinear") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int n = 1; n <= 5; ++n) {
    for (int nu = 0; nu <= n; ++nu) {
      const Signature s(n, nu);
      for (int rep = 0; rep < 20; ++rep) {
        Vec a(n), b(n), c(n);
        for (int i = 0; i < n; ++i) a[i] = U(rng), b[i] = U(rng), c[i] = U(rng);
        CHECK(eta_inner(s, a, b) == eta_inner(s, b, a));
        CHECK(eta_inner(s, a + c, b) ==
              doctest::Approx(eta_inner(s, a, b) + eta_inner(s, c, b)).epsilon(1e-12));
        const double k = U(rng);
        CHECK(eta_inner(s, k * a, b) == doctest::Approx(k * eta_inner(s, a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("definite signature is positive definite") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  const Signature s(4, 0);
  for (int rep = 0; rep < 100; ++rep) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = N(rng);
    CHECK(eta_inner(s, v, v) > 0);
  }
  CHECK(eta_inner(s, Vec::Zero(4), Vec::Zero(4)) == 0.0);
}

TEST_CASE("causal character is invariant under nonzero scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  const Signature s(3, 1);
  for (int rep = 0; rep < 200; ++rep) {
    Vec v(3);
    for (int i = 0; i < 3; ++i) v[i] = U(rng);
    double k = U(rng);
    if (std::abs(k) < 1e-3) k = 1.5;
    CHECK(causal_character(s, k * v) == causal_character(s, v));
    CHECK(causal_character(s, 1e6 * v) == causal_character(s, v));
  }
  // The null cone is detected at any scale.
  CHECK(causal_character(s, make_vec({3e8, 4e8, 5e8})) == CausalCharacter::Null);
  CHECK(causal_character(s, make_vec({3e-8, 4e-8, 5e-8})) == CausalCharacter::Null);
}
