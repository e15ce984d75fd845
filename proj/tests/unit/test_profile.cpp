#include <doctest.h>

#include <cmath>

#include "invfrac/errors.hpp"
#include "invfrac/profile.hpp"
#include "oracles.hpp"

using namespace invfrac;

TEST_CASE("profile solves the equipartition ODE") {
  const auto lj = builtin_lj();
  const TransitionProfile q(lj);
  CHECK(q(q.left_end() - 1.0) == 0.0);
  CHECK(q(q.right_end() + 1.0) == 1.0);
  for (double s = q.left_end() + 0.5; s < q.right_end() - 0.5; s += 0.37) {
    const double v = q(s);
    const double slope = (q(s + 1e-4) - q(s - 1e-4)) / 2e-4;
    CHECK(slope == doctest::Approx(std::sqrt(2.0 * lj.wstar(v))).epsilon(1e-4));
  }
  double prev = 0.0;
  for (double s = q.left_end(); s <= q.right_end(); s += 0.01) {
    CHECK(q(s) >= prev);
    prev = q(s);
  }
}

TEST_CASE("profile is centred by equal area and carries the surface energy") {
  const auto lj = builtin_lj();
  const TransitionProfile q(lj);
  const double a = q.left_end() - 1.0;
  const double b = q.right_end() + 1.0;
  const double area = oracle::simpson([&](double s) { return q(s) - (s > 0.0 ? 1.0 : 0.0); }, a, 0.0, 20000) +
                      oracle::simpson([&](double s) { return q(s) - 1.0; }, 0.0, b, 20000);
  CHECK(std::abs(area) < 1e-4);
  const double energy = oracle::simpson(
      [&](double s) {
        const double d = (q(s + 1e-5) - q(s - 1e-5)) / 2e-5;
        return 0.5 * d * d + lj.wstar(q(s));
      },
      // stay clear of the clamps to the wells at both table ends
      q.left_end() + 1e-4, q.right_end() - 1e-4, 20000);
  CHECK(energy == doctest::Approx(oracle::c_wstar_lj()).epsilon(2e-3));
}

TEST_CASE("flat model has no transition") {
  CHECK_THROWS_AS(TransitionProfile{builtin_zero()}, NonConvergence);
}

TEST_CASE("mollified inverse stretch keeps unit mass and its jumps") {
  const auto lj = builtin_lj();
  const TransitionProfile q(lj);
  const PiecewiseConstantField one{1.4, {1.0}, {1.0, 0.0}};
  const auto m = mollify_sharp_candidate(one, 0.02, q, 2000);
  CHECK(trapezoid_integral(m.field) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(transition_count(m.field) == 1);
  CHECK_FALSE(m.overlap_warning);

  const PiecewiseConstantField two{1.4, {0.2, 0.6}, {1.0, 0.0, 1.0}};
  const auto m2 = mollify_sharp_candidate(two, 0.01, q, 2000);
  CHECK(transition_count(m2.field) == 2);
  CHECK(trapezoid_integral(m2.field) == doctest::Approx(1.0).epsilon(1e-13));

  const PiecewiseConstantField close{1.4, {0.5, 0.9}, {1.0, 0.0, 1.0}};
  CHECK(mollify_sharp_candidate(close, 0.05, q, 2000).overlap_warning);
  CHECK_FALSE(mollify_sharp_candidate(close, 0.02, q, 2000).overlap_warning);
}

TEST_CASE("mollified inverse deformation meets the boundary conditions") {
  const auto lj = builtin_lj();
  const TransitionProfile q(lj);
  const auto sharp = build_sharp_minimizer(4, 1.5, Variant::A, oracle::c_wstar_lj(), 200.0);
  const auto m = mollify_sharp_candidate(sharp.field, 0.01, q, 4000);
  CHECK(m.field.kind == FieldKind::InverseDeformation);
  CHECK(m.field.values.front() == 0.0);
  CHECK(m.field.values.back() == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t j = 1; j < m.field.values.size(); ++j) CHECK(m.field.values[j] >= m.field.values[j - 1]);
  CHECK(transition_count(m.field) == 4);

  const PiecewiseLinearField id{1.0, {0.0, 1.0}, {0.0, 1.0}};
  const auto flat = mollify_sharp_candidate(id, 0.01, q, 100);
  CHECK(flat.field.values[50] == doctest::Approx(0.5));
}

TEST_CASE("slope field of a sharp minimiser") {
  const auto sharp = build_sharp_minimizer(2, 1.5, Variant::B, oracle::c_wstar_lj(), 10.0);
  const auto s = slope_field(sharp.field);
  CHECK(s.jump_count() == 2);
  CHECK(s.value_at(0.01) == 0.0);
  CHECK(s.measure_where(1.0) == doctest::Approx(1.0));
}
