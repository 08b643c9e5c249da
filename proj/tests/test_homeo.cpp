#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linewalk/pl_homeo.hpp"
#include "test_support.hpp"

using namespace linewalk;
using linewalk::testing::q;
using R = Rational;

namespace {

const auto kBreak01 = PLHomeo<R>::piecewise({q(0)}, {q(1), q(2)}, q(0));

}  // namespace

TEST_CASE("eval on identity, affine and piecewise maps") {
  CHECK(PLHomeo<double>::identity()(3.7) == 3.7);
  CHECK(PLHomeo<R>::affine(q(2), q(0))(q(3)) == q(6));
  CHECK(kBreak01(q(1)) == q(2));
  CHECK(kBreak01(q(-3)) == q(-3));
  CHECK(kBreak01.inverse_value(q(2)) == q(1));
}

TEST_CASE("canonical form merges equal slopes") {
  const auto g = PLHomeo<R>::piecewise({q(0), q(1), q(2)}, {q(1), q(2), q(2), q(1)}, q(5));
  CHECK(g.breakpoints().size() == 2);
  CHECK(g(q(2)) == q(9));
  const auto affine = PLHomeo<R>::piecewise({q(0), q(1)}, {q(3), q(3), q(3)}, q(1));
  CHECK(affine.is_affine());
  CHECK(affine == PLHomeo<R>::affine(q(3), q(1)));
  CHECK_THROWS_AS(PLHomeo<R>::piecewise({q(1), q(0)}, {q(1), q(1), q(2)}, q(0)), std::invalid_argument);
  CHECK_THROWS_AS(PLHomeo<R>::piecewise({q(0)}, {q(1), q(0)}, q(0)), std::invalid_argument);
}

TEST_CASE("compose examples") {
  const auto t1 = PLHomeo<R>::translation(q(1));
  const auto t2 = PLHomeo<R>::translation(q(2));
  CHECK(compose(t1, t2) == PLHomeo<R>::translation(q(3)));
  const auto dbl = PLHomeo<R>::affine(q(2), q(0));
  const auto half = PLHomeo<R>::affine(q(1, 2), q(0));
  CHECK(compose(dbl, half).is_identity());
  const auto c = compose(dbl, t1);
  for (long x : {-1L, 0L, 1L}) CHECK(c(q(x)) == q(2 * x + 2));
}

TEST_CASE("invert examples") {
  CHECK(invert(PLHomeo<R>::affine(q(2), q(0))) == PLHomeo<R>::affine(q(1, 2), q(0)));
  CHECK(invert(PLHomeo<R>::translation(q(7, 3))) == PLHomeo<R>::translation(q(-7, 3)));
  CHECK(invert(kBreak01) == PLHomeo<R>::piecewise({q(0)}, {q(1), q(1, 2)}, q(0)));
}

TEST_CASE("fixed point examples") {
  const auto f2 = fixed_points(PLHomeo<R>::affine(q(2), q(0)));
  REQUIRE(f2.components.size() == 1);
  CHECK(f2.components[0].is_point());
  CHECK(*f2.components[0].lo == 0);
  CHECK(fixed_points(PLHomeo<R>::translation(q(1))).empty());
  CHECK(fixed_points(PLHomeo<R>::identity()).is_whole_line());
  // identity left of 0, doubling right of 0
  const auto ray = fixed_points(kBreak01);
  REQUIRE(ray.components.size() == 1);
  CHECK(!ray.components[0].lo);
  CHECK(*ray.components[0].hi == 0);
}

TEST_CASE("phi matches the region-area oracle") {
  const auto shift = PLHomeo<R>::translation(q(1));
  const auto dbl = PLHomeo<R>::affine(q(2), q(0));
  // Oracle first; then the exact values it confirms.
  {
    const auto g = shift.cast<double>();
    const auto gi = invert(shift).cast<double>();
    const auto [area, se] = testing::region_area_oracle(g, gi, 0.0, 2.0, 400000, 11);
    CHECK(std::abs(area - 0.5) < 4 * se);
  }
  {
    const auto g = dbl.cast<double>();
    const auto gi = invert(dbl).cast<double>();
    const auto [area, se] = testing::region_area_oracle(g, gi, 1.0, 2.0, 400000, 12);
    CHECK(std::abs(area - 0.25) < 4 * se);
  }
  CHECK(phi(PLHomeo<R>::identity(), q(5)) == 0);
  CHECK(phi(shift, q(0)) == q(1, 2));
  CHECK(phi(dbl, q(1)) == q(1, 4));
  CHECK(phi(invert(dbl), q(1)) == q(1, 4));
}

TEST_CASE("phi increment residual examples") {
  CHECK(phi_increment_residual(PLHomeo<R>::translation(q(5)), q(0), q(1)) == 0);
  const auto dbl = PLHomeo<R>::affine(q(2), q(0));
  CHECK(phi_increment_residual(dbl, q(0), q(1)) == 0);
  CHECK(phi(dbl, q(1)) - phi(dbl, q(0)) == q(1, 4));
  CHECK(integral(dbl, q(0), q(1)) + integral(invert(dbl), q(0), q(1)) - q(1) == q(1, 4));
  CHECK(phi_increment_residual(PLHomeo<R>::identity(), q(-3), q(8)) == 0);
  CHECK_THROWS(phi_increment_residual(dbl, q(1), q(0)));
}

TEST_CASE("property: random rational PL maps") {
  RandomStream rng(2024, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = testing::random_pl(rng);
    const auto g = testing::random_pl(rng);
    const auto h = testing::random_pl(rng);
    const auto fi = invert(f);
    CHECK(compose(fi, f).is_identity());
    CHECK(compose(f, fi).is_identity());
    CHECK(invert(fi) == f);
    const auto fg = compose(f, g);
    const auto left = compose(fg, h);
    const auto right = compose(f, compose(g, h));
    CHECK(left == right);
    for (int k = -40; k <= 40; ++k) {
      const R x(k, 7);
      CHECK(fg(x) == f(g(x)));
      CHECK(fi(f(x)) == x);
      CHECK(f(x) < f(x + R(1, 1000)));
    }
    // breakpoints of f o g lie in bps(g) U g^{-1}(bps(f))
    for (const auto& b : fg.breakpoints()) {
      bool found = std::find(g.breakpoints().begin(), g.breakpoints().end(), b) != g.breakpoints().end();
      for (const auto& c : f.breakpoints()) found = found || g.inverse_value(c) == b;
      CHECK(found);
    }
    const R a(static_cast<long>(rng.next_u64() % 21) - 10, 3);
    const R b = a + R(1 + static_cast<long>(rng.next_u64() % 17), 2);
    CHECK(phi_increment_residual(f, a, b) == 0);
    CHECK(phi(f, a) == phi(fi, a));
    CHECK(phi(f, a) >= 0);
  }
}

TEST_CASE("property: triangle lower bound for (1/lambda)-Lipschitz maps") {
  RandomStream rng(77, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_pl(rng);
    // lambda <= 1 with both g and g^{-1} (1/lambda)-Lipschitz
    const R lambda = std::min({R(1), g.min_slope(), R(1) / g.max_slope()});
    for (int k = -12; k <= 12; ++k) {
      const R x(k, 3);
      const R gap = g(x) - x;
      CHECK(phi(g, x) >= lambda / 2 * gap * gap);
    }
  }
}

TEST_CASE("periodic lifts") {
  // fixes 0 and 1/2, attracting at 0
  const auto lift = PLHomeo<R>::periodic(q(1), {q(0), q(1, 4), q(1, 2), q(3, 4)},
                                          {q(1, 2), q(3, 2), q(3, 2), q(1, 2)}, q(0));
  const auto t = PLHomeo<R>::translation(q(1));
  CHECK(compose(lift, t) == compose(t, lift));
  CHECK(lift(q(1, 4)) == q(1, 8));
  CHECK(lift(q(-3, 4)) == q(-7, 8));
  CHECK(lift(q(5, 4)) == q(9, 8));
  const auto inv = invert(lift);
  CHECK(compose(inv, lift).is_identity());
  for (int k = -20; k <= 20; ++k) CHECK(inv(lift(R(k, 6))) == R(k, 6));

  const auto fix = fixed_points(lift);
  CHECK(fix.is_periodic());
  CHECK(fix.contains(q(0)));
  CHECK(fix.contains(q(1, 2)));
  CHECK(fix.contains(q(-7, 2)));
  CHECK(!fix.contains(q(1, 4)));
  CHECK(phi_increment_residual(lift, q(-1, 3), q(5, 2)) == 0);
  CHECK_THROWS_AS(compose(lift, PLHomeo<R>::affine(q(2), q(0))), std::domain_error);

  RandomStream rng(5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::random_periodic(rng);
    const auto b = testing::random_periodic(rng);
    const auto ab = compose(a, b);
    CHECK(compose(ab, invert(ab)).is_identity());
    for (int k = -10; k <= 10; ++k) CHECK(ab(R(k, 3)) == a(b(R(k, 3))));
    CHECK(phi_increment_residual(ab, q(-1), q(2)) == 0);
    CHECK(compose(ab, t) == compose(t, ab));
  }
}

TEST_CASE("common fixed sets") {
  const auto dbl = fixed_points(PLHomeo<R>::affine(q(2), q(0)));
  const auto half = fixed_points(PLHomeo<R>::affine(q(1, 2), q(0)));
  const auto shift = fixed_points(PLHomeo<R>::translation(q(1)));
  auto both = common_fixed_set<R>({dbl, half});
  REQUIRE(both.witness());
  CHECK(*both.witness() == 0);
  CHECK(common_fixed_set<R>({dbl, half, shift}).empty());

  const auto lift = PLHomeo<R>::periodic(q(1), {q(0), q(1, 2)}, {q(1, 2), q(3, 2)}, q(0));
  const auto lift_fix = fixed_points(lift);
  const auto with_ray = common_fixed_set<R>({lift_fix, fixed_points(kBreak01)});
  REQUIRE(!with_ray.empty());
  CHECK(lift_fix.contains(*with_ray.witness()));
  CHECK(*with_ray.witness() <= 0);
  CHECK(common_fixed_set<R>({lift_fix, shift}).empty());
}

TEST_CASE("double cast evaluates like the exact map") {
  RandomStream rng(9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_pl(rng);
    const auto gd = g.cast<double>();
    for (int k = -30; k <= 30; ++k) {
      const R x(k, 4);
      CHECK(gd(to_double(x)) == doctest::Approx(to_double(g(x))).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: increment equals the difference of values") {
  RandomStream rng(10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = trial % 2 == 0 ? testing::random_pl(rng) : testing::random_periodic(rng);
    for (int k = 0; k < 20; ++k) {
      const R x(static_cast<long>(rng.next_u64() % 81) - 40, 1 + static_cast<long>(rng.next_u64() % 6));
      const R h(static_cast<long>(rng.next_u64() % 60), 1 + static_cast<long>(rng.next_u64() % 7));
      CHECK(g.increment(x, h) == g(x + h) - g(x));
    }
  }
  CHECK(PLHomeo<R>::affine(q(2), q(1)).increment(q(3), q(-1)) == 0);
}

TEST_CASE("increment keeps relative precision for tiny gaps") {
  const auto g = PLHomeo<R>::piecewise({q(0), q(1)}, {q(1), q(1, 2), q(3)}, q(0)).cast<double>();
  CHECK(g.increment(0.25, 1e-30) == doctest::Approx(0.5e-30).epsilon(1e-15));
  CHECK(g.increment(0.75, 0.5) == doctest::Approx(0.25 * 0.5 + 0.25 * 3).epsilon(1e-15));
  CHECK(g(1e5 + 1e-30) - g(1e5) == 0.0);  // the naive difference cancels
  CHECK(g.increment(1e5, 1e-30) == doctest::Approx(3e-30).epsilon(1e-15));
}
