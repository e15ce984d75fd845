#include <doctest.h>

#include <cmath>
#include <random>

#include "invfrac/errors.hpp"
#include "invfrac/sharp_interface.hpp"
#include "oracles.hpp"

using namespace invfrac;

namespace {

const double kC = oracle::c_wstar_lj();

// Misfit integral mu/2 int h' (y - lambda h)^2 by Simpson on every piece.
double misfit_simpson(const PiecewiseLinearField& f, double mu) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
    const double a = f.knots[i];
    const double b = f.knots[i + 1];
    const double slope = (f.values[i + 1] - f.values[i]) / (b - a);
    total += oracle::simpson(
        [&](double y) {
          const double h = f.values[i] + slope * (y - a);
          const double g = y - f.load * h;
          return slope * g * g;
        },
        a, b, 64);
  }
  return 0.5 * mu * total;
}

}  // namespace

TEST_CASE("sharp I counts jumps of admissible fields") {
  const PiecewiseConstantField end_crack{1.4, {1.0}, {1.0, 0.0}};
  CHECK(eval_I(end_crack, kC) == doctest::Approx(kC));
  const PiecewiseConstantField interior{1.4, {0.2, 0.6}, {1.0, 0.0, 1.0}};
  CHECK(interior.measure_where(1.0) == doctest::Approx(1.0));
  CHECK(eval_I(interior, kC) == doctest::Approx(2 * kC));
  const PiecewiseConstantField unbroken{1.0, {}, {1.0}};
  CHECK(eval_I(unbroken, kC) == 0.0);
}

TEST_CASE("sharp I is infinite off the admissible set") {
  CHECK(std::isinf(eval_I(PiecewiseConstantField{1.4, {0.9}, {1.0, 0.0}}, kC)));
  CHECK(std::isinf(eval_I(PiecewiseConstantField{1.4, {1.0}, {1.0, 0.5}}, kC)));
  CHECK(std::isinf(eval_I(PiecewiseConstantField{2.0, {}, {0.5}}, kC)));
}

TEST_CASE("piecewise-constant field bookkeeping") {
  const PiecewiseConstantField f{2.0, {0.5, 1.0, 1.5}, {1.0, 1.0, 0.0, 1.0}};
  CHECK(f.jump_count() == 2);
  CHECK(f.value_at(0.75) == 1.0);
  CHECK(f.value_at(1.25) == 0.0);
  CHECK(f.measure_where(0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS((PiecewiseConstantField{1.0, {0.5, 0.5}, {1, 0, 1}}.validate()), DomainError);
  CHECK_THROWS_AS((PiecewiseConstantField{1.0, {0.5}, {1}}.validate()), DomainError);
}

TEST_CASE("sharp V of the identity is zero") {
  const PiecewiseLinearField id{1.0, {0.0, 1.0}, {0.0, 1.0}};
  CHECK(eval_V(id, kC, 200.0) == 0.0);
}

TEST_CASE("sharp V agrees with a Simpson evaluation of the misfit") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(1.05, 2.5);
  std::uniform_real_distribution<double> mus(0.0, 400.0);
  for (int t = 0; t < 30; ++t) {
    const double lambda = lam(rng);
    const double mu = mus(rng);
    const long n = 1 + t % 7;
    const auto m = build_sharp_minimizer(n, lambda, t % 2 ? Variant::A : Variant::B, kC, mu);
    const double expected = static_cast<double>(m.field.kink_count()) * kC + misfit_simpson(m.field, mu);
    CHECK(eval_V(m.field, kC, mu) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sharp V is infinite off the admissible set") {
  CHECK(std::isinf(eval_V(PiecewiseLinearField{1.5, {0.0, 1.5}, {0.0, 1.0}}, kC, 1.0)));
  CHECK(std::isinf(eval_V(PiecewiseLinearField{1.5, {0.0, 1.0, 1.5}, {0.0, 1.0, 1.2}}, kC, 1.0)));
}

TEST_CASE("segments carry one kink and the closed-form energy") {
  for (double ell : {0.1, 0.375, 0.9}) {
    for (const auto& seg : {segment_h1(ell, 1.5), segment_h2(ell, 1.5)}) {
      CHECK(seg.length() == doctest::Approx(ell));
      CHECK(seg.values.back() == doctest::Approx(ell / 1.5));
      CHECK(seg.kink_count() == 1);
      const double closed = kC + 200.0 * 0.25 * ell * ell * ell / (6.0 * 1.5 * 1.5 * 1.5);
      CHECK(segment_energy(ell, 1.5, kC, 200.0) == doctest::Approx(closed).epsilon(1e-14));
      CHECK(eval_V(seg, kC, 200.0) == doctest::Approx(closed).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(segment_h1(2.0, 1.5), DomainError);
  CHECK_THROWS_AS(segment_h2(0.5, 1.0), DomainError);
}

TEST_CASE("minimum energies for the worked example") {
  CHECK(std::abs(v_n(4, kC, 200.0, 1.5) - 2.0293) < 1e-3);
  CHECK(std::abs(v_n(3, kC, 200.0, 1.5) - 2.05730) < 1e-5);
  for (long n = 1; n < 12; ++n) {
    CHECK(v_n(n, kC, 200.0, 1.5) == doctest::Approx(oracle::v_n(n, kC, 200.0, 1.5)).epsilon(1e-15));
  }
  CHECK(v_n(1, kC, 0.0, 1.4) == doctest::Approx(kC));
  CHECK_THROWS_AS(v_n(0, kC, 1.0, 1.5), DomainError);
}

TEST_CASE("crack-count law") {
  CHECK(std::abs(crack_count_estimate(kC, 200.0, 1.5) - 3.5355) < 5e-4);
  CHECK(crack_count(kC, 200.0, 1.5) == 4);
  CHECK(crack_count(kC, 200.0, 1.0001) == 1);
  CHECK(crack_count(kC, 0.0, 1.4) == 1);
  CHECK_THROWS_AS(crack_count(kC, 200.0, 1.0), DomainError);
  CHECK_THROWS_AS(crack_count(kC, -1.0, 1.5), DomainError);
  CHECK_THROWS_AS(crack_count(0.0, 1.0, 1.5), DomainError);
}

TEST_CASE("crack count is the exhaustive argmin of V_n") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(1.0001, 3.0);
  std::uniform_real_distribution<double> mus(0.0, 2000.0);
  for (int t = 0; t < 300; ++t) {
    const double lambda = lam(rng);
    const double mu = mus(rng);
    CHECK(crack_count(kC, mu, lambda) == oracle::argmin_v_n(kC, mu, lambda));
  }
}

TEST_CASE("with mu = 3c the count brackets (lambda-1)^(2/3)") {
  for (double lambda = 1.05; lambda < 9.0; lambda += 0.37) {
    const double x = std::pow(lambda - 1.0, 2.0 / 3.0);
    long expected = 1;
    if (x >= 1.0) {
      const long m = static_cast<long>(std::floor(x));
      expected = oracle::v_n(m + 1, kC, 3 * kC, lambda) < oracle::v_n(m, kC, 3 * kC, lambda) ? m + 1 : m;
    }
    CHECK(crack_count(kC, 3.0 * kC, lambda) == expected);
  }
}

TEST_CASE("sharp minimisers: kinks, cracks and energies for n <= 10") {
  for (long n = 1; n <= 10; ++n) {
    const auto a = build_sharp_minimizer(n, 1.7, Variant::A, kC, 120.0);
    const auto b = build_sharp_minimizer(n, 1.7, Variant::B, kC, 120.0);
    CHECK(a.field.kink_count() == static_cast<std::size_t>(n));
    CHECK(b.field.kink_count() == static_cast<std::size_t>(n));
    CHECK(a.cracks.size() == static_cast<std::size_t>((n + 1) / 2));
    CHECK(b.cracks.size() == static_cast<std::size_t>(n / 2 + 1));
    CHECK(a.segment_length == doctest::Approx(1.7 / n));
    CHECK(a.energy == doctest::Approx(oracle::v_n(n, kC, 120.0, 1.7)).epsilon(1e-13));
    CHECK(eval_V(a.field, kC, 120.0) == doctest::Approx(a.energy).epsilon(1e-12));
    CHECK(eval_V(b.field, kC, 120.0) == doctest::Approx(b.energy).epsilon(1e-12));
  }
}

TEST_CASE("worked example crack table") {
  const auto a = build_sharp_minimizer(4, 1.5, Variant::A, kC, 200.0);
  REQUIRE(a.cracks.size() == 2);
  CHECK(a.cracks[0].material_position == doctest::Approx(0.25));
  CHECK(a.cracks[1].material_position == doctest::Approx(0.75));
  CHECK(a.cracks[0].opening == doctest::Approx(0.25));
  const auto b = build_sharp_minimizer(4, 1.5, Variant::B, kC, 200.0);
  REQUIRE(b.cracks.size() == 3);
  CHECK(b.cracks.front().material_position == 0.0);
  CHECK(b.cracks.back().material_position == doctest::Approx(1.0));
  CHECK(b.cracks.front().opening == doctest::Approx(0.125));
}

TEST_CASE("opening conservation and variant symmetry on random triples") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> ns(1, 8);
  std::uniform_real_distribution<double> lam(1.0 + 1e-9, 3.0);
  std::uniform_real_distribution<double> mus(0.0, 500.0);
  for (int t = 0; t < 50; ++t) {
    const long n = ns(rng);
    const double lambda = lam(rng);
    const double mu = mus(rng);
    const auto a = build_sharp_minimizer(n, lambda, Variant::A, kC, mu);
    const auto b = build_sharp_minimizer(n, lambda, Variant::B, kC, mu);
    for (const auto* m : {&a, &b}) {
      double opening = 0.0;
      for (const auto& c : m->cracks) opening += c.opening;
      CHECK(std::abs(opening - (lambda - 1.0)) <= 1e-12);
    }
    CHECK(std::abs(a.energy - b.energy) <= 1e-12);
  }
}

TEST_CASE("brute-force segment search recovers equal spacing") {
  for (long n : {2L, 3L}) {
    const auto r = brute_force_segments(n, 1.5, kC, 200.0);
    REQUIRE(r.lengths.size() == static_cast<std::size_t>(n));
    for (double l : r.lengths) CHECK(std::abs(l - 1.5 / n) < 1e-4);
    CHECK(std::abs(r.energy - oracle::v_n(n, kC, 200.0, 1.5)) < 1e-6);
  }
}

TEST_CASE("brute-force segment search: degenerate and invalid inputs") {
  const auto r = brute_force_segments(2, 1.5, kC, 0.0);
  CHECK(r.energy == doctest::Approx(2 * kC));
  CHECK_THROWS_AS(brute_force_segments(1, 1.5, kC, 1.0), DomainError);
  CHECK_THROWS_AS(brute_force_segments(7, 1.5, kC, 1.0), DomainError);
  SegmentSearchOptions tiny;
  tiny.max_evaluations = 10;
  CHECK_THROWS_AS(brute_force_segments(3, 1.5, kC, 200.0, tiny), BudgetExceeded);
}

TEST_CASE("piecewise-linear helpers") {
  const PiecewiseLinearField f{2.0, {0.0, 0.5, 1.0, 2.0}, {0.0, 0.25, 0.5, 1.0}};
  CHECK(f.kink_count() == 0);
  const auto s = f.simplified();
  CHECK(s.knots.size() == 2);
  CHECK(s.value_at(1.5) == doctest::Approx(0.75));
  const auto joined = segment_h1(0.5, 1.5).concatenated(segment_h2(0.5, 1.5));
  CHECK(joined.length() == doctest::Approx(1.0));
  CHECK(joined.values.back() == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS((PiecewiseLinearField{1.0, {0.0, 0.0}, {0.0, 1.0}}.validate()), DomainError);
  CHECK_THROWS_AS((PiecewiseLinearField{1.0, {0.1, 1.0}, {0.0, 1.0}}.validate()), DomainError);
}

TEST_CASE("deformation reconstruction inverts the elastic pieces") {
  for (long n = 1; n <= 6; ++n) {
    for (Variant v : {Variant::A, Variant::B}) {
      const auto m = build_sharp_minimizer(n, 1.6, v, kC, 50.0);
      const auto graph = reconstruct_deformation(m.field);
      double jumps = 0.0;
      for (const auto& j : graph.jumps) jumps += j.upper - j.lower;
      CHECK(jumps == doctest::Approx(0.6).epsilon(1e-12));
      CHECK(graph.jumps.size() == m.cracks.size());
      double covered = 0.0;
      for (const auto& p : graph.pieces) {
        CHECK(p.y_end - p.y_start == doctest::Approx(p.x_end - p.x_start));
        CHECK(m.field.value_at(p.y_start) == doctest::Approx(p.x_start));
        covered += p.x_end - p.x_start;
      }
      CHECK(covered == doctest::Approx(1.0));
    }
  }
  CHECK_THROWS_AS(reconstruct_deformation(PiecewiseLinearField{1.5, {0.0, 1.5}, {0.0, 1.0}}),
                  DomainError);
}
