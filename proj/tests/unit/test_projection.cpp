#include <doctest.h>

#include <cmath>
#include <random>

#include "invfrac/discrete.hpp"
#include "invfrac/errors.hpp"
#include "invfrac/projection.hpp"
#include "oracles.hpp"

using namespace invfrac;

TEST_CASE("weighted simplex projection matches QP enumeration") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> raw(-1.0, 2.0);
  std::uniform_real_distribution<double> wt(0.1, 2.0);
  std::uniform_real_distribution<double> mass(0.1, 3.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 8;
    std::vector<double> z(n), w(n);
    for (auto& v : z) v = raw(rng);
    for (auto& v : w) v = wt(rng);
    const double m = mass(rng);
    const auto got = project_weighted_simplex(z, w, m);
    const auto want = oracle::qp_simplex(z, w, m);
    REQUIRE(got.size() == want.size());
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(got[j] >= 0.0);
      CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-10).scale(1.0));
      total += w[j] * got[j];
    }
    CHECK(total == doctest::Approx(m).epsilon(1e-13));
  }
}

TEST_CASE("projection is idempotent and invariant along the weights") {
  std::vector<double> z{0.3, -0.2, 1.5, 0.7, 0.0};
  std::vector<double> w{0.5, 1.0, 1.0, 1.0, 0.5};
  const auto p = project_weighted_simplex(z, w, 1.0);
  const auto pp = project_weighted_simplex(p, w, 1.0);
  for (std::size_t j = 0; j < z.size(); ++j) CHECK(pp[j] == doctest::Approx(p[j]).epsilon(1e-14));
  for (std::size_t j = 0; j < z.size(); ++j) z[j] += 3.7 * w[j];
  const auto shifted = project_weighted_simplex(z, w, 1.0);
  for (std::size_t j = 0; j < z.size(); ++j) CHECK(shifted[j] == doctest::Approx(p[j]).epsilon(1e-12));
}

TEST_CASE("projection rejects empty constraint sets") {
  std::vector<double> z{1.0, 2.0};
  CHECK_THROWS_AS(project_weighted_simplex(z, std::vector<double>{1.0, 0.0}, 1.0), Infeasible);
  CHECK_THROWS_AS(project_weighted_simplex(z, std::vector<double>{1.0, 1.0}, 0.0), Infeasible);
  CHECK_THROWS_AS(project_H(std::vector<double>(5, 0.0), 0.0), Infeasible);
}

TEST_CASE("project_H of a zero field follows the clipped-affine formula") {
  // With all raw values equal the projection is proportional to the
  // trapezoid weights [dy/2, dy, dy, dy, dy/2]; unit mass fixes the scale.
  const auto h = project_H(std::vector<double>(5, 0.0), 2.0);
  const auto w = trapezoid_weights(2.0, 4);
  const auto want = oracle::qp_simplex(std::vector<double>(5, 0.0), w, 1.0);
  const double expected[] = {2.0 / 7, 4.0 / 7, 4.0 / 7, 4.0 / 7, 2.0 / 7};
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(h.values[j] == doctest::Approx(want[j]).epsilon(1e-13));
    CHECK(h.values[j] == doctest::Approx(expected[j]).epsilon(1e-13));
  }
  CHECK(trapezoid_integral(h) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("project_H keeps admissible fields") {
  const auto id = DiscreteField::constant(FieldKind::InverseStretch, 1.25, 64, 0.8);
  const auto p = project_H(id.values, 1.25);
  for (std::size_t j = 0; j < p.values.size(); ++j) CHECK(p.values[j] == doctest::Approx(0.8));
}

TEST_CASE("isotonic regression matches block enumeration") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> wt(0.2, 3.0);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + t % 10;
    std::vector<double> v(n), w(n);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = 0.3 * static_cast<double>(j) + noise(rng);
      w[j] = wt(rng);
    }
    const auto got = isotonic_regression(v, w);
    const auto want = oracle::isotonic_brute(v, w);
    for (std::size_t j = 0; j < n; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-10));
  }
}

TEST_CASE("project_h pins endpoints and enforces monotonicity") {
  std::vector<double> raw{0.4, -0.2, 0.5, 0.3, 1.4, 0.9, 0.8, 1.1, 0.2, 0.5, 0.6, 0.7, 0.9, 0.95,
                          1.2, 0.99, 0.3};
  const auto h = project_h(raw, 1.5);
  CHECK(h.values.front() == 0.0);
  CHECK(h.values.back() == 1.0);
  for (std::size_t j = 1; j < h.values.size(); ++j) CHECK(h.values[j] >= h.values[j - 1]);
  for (double v : h.values) CHECK((v >= 0.0 && v <= 1.0));

  // Interior: PAV of the interior samples clamped to [0, 1].
  std::vector<double> interior(raw.begin() + 1, raw.end() - 1);
  auto fit = oracle::isotonic_brute(interior, std::vector<double>(interior.size(), 1.0));
  for (std::size_t j = 0; j < fit.size(); ++j) {
    CHECK(h.values[j + 1] == doctest::Approx(std::clamp(fit[j], 0.0, 1.0)).epsilon(1e-12));
  }
}
