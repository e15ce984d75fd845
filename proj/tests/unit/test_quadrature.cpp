#include <doctest.h>

#include <cmath>

#include "invfrac/errors.hpp"
#include "invfrac/quadrature.hpp"

using invfrac::integrate_adaptive;

TEST_CASE("polynomials integrate to their closed forms") {
  const auto r = integrate_adaptive([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0, 1e-12);
  CHECK(r.value == doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
  CHECK(r.intervals >= 1);
  CHECK(r.evaluations == 15 * (2 * r.intervals - 1));
}

TEST_CASE("square-root endpoint behaviour is refined to tolerance") {
  const auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-11);
  CHECK(r.error_estimate <= 1e-12);
  CHECK(r.intervals > 1);
}

TEST_CASE("inverse square-root blow-up is integrable") {
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9,
                                    200000);
  CHECK(std::abs(r.value - 2.0) < 1e-8);
}

TEST_CASE("tightening the tolerance never moves away from the finest result") {
  auto f = [](double x) { return std::sqrt(2.0 * x) * (1.0 - x); };
  const double finest = integrate_adaptive(f, 0.0, 1.0, 1e-14, 200000).value;
  double previous = INFINITY;
  for (double tol = 1e-4; tol >= 1e-12; tol *= 0.5) {
    const double d = std::abs(integrate_adaptive(f, 0.0, 1.0, tol, 200000).value - finest);
    CHECK(d <= previous);
    previous = d;
  }
}

TEST_CASE("zero-width interval and reversed bounds") {
  CHECK(integrate_adaptive([](double) { return 1.0; }, 0.5, 0.5, 1e-12).value == 0.0);
  const auto r = integrate_adaptive([](double x) { return x; }, 1.0, 0.0, 1e-12);
  CHECK(r.value == doctest::Approx(-0.5));
}

TEST_CASE("budget exhaustion raises NonConvergence") {
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-15, 3),
                  invfrac::NonConvergence);
}
