#include <doctest.h>

#include <cmath>
#include <numbers>

#include "anticip/error.hpp"
#include "anticip/frequency_bound.hpp"
#include "anticip/sampling.hpp"
#include "anticip/spectral_core.hpp"

using namespace anticip;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("absolute moment") {
  CHECK(abs_moment(DiscreteMeasure({0.0}, {1.0}), 0.0) == 0.0);
  const DiscreteMeasure two({0.0, kPi}, {0.5, 0.5});
  CHECK(abs_moment(two, kPi / 2) == doctest::Approx(kPi / 2));
  const DiscreteMeasure m({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  for (double c : {-3.0, 0.0, 1.7}) {
    for (double l : {-1.0, 0.3, 4.0}) {
      CHECK(abs_moment(m.translated(c), l + c) == doctest::Approx(abs_moment(m, l)));
    }
  }
  // Convexity on a grid.
  for (double l = -2.0; l < 3.0; l += 0.01) {
    const double mid = abs_moment(m, l + 0.01);
    CHECK(mid <= 0.5 * (abs_moment(m, l) + abs_moment(m, l + 0.02)) + 1e-12);
  }
}

TEST_CASE("absolute moment vanishes only for a point at l0") {
  CHECK(abs_moment(DiscreteMeasure({1.25}, {1.0}), 1.25) == 0.0);
  CHECK(abs_moment(DiscreteMeasure({1.25}, {1.0}), 1.0) > 0.0);
  const DiscreteMeasure two({0.0, 1e-6}, {0.5, 0.5});
  for (double l : {-1.0, 0.0, 5e-7, 1e-6, 2.0}) CHECK(abs_moment(two, l) > 0.0);
}

TEST_CASE("median minimizer") {
  auto r = median_minimizer(DiscreteMeasure({0.0, kPi}, {0.5, 0.5}));
  CHECK(r.location == doctest::Approx(kPi / 2));
  CHECK(r.minimum == doctest::Approx(kPi / 2));
  CHECK(r.interval_lo == 0.0);
  CHECK(r.interval_hi == doctest::Approx(kPi));
  r = median_minimizer(DiscreteMeasure({0, kPi / 2, kPi, 3 * kPi / 2}, {0.25, 0.25, 0.25, 0.25}));
  CHECK(r.minimum == doctest::Approx(kPi / 2));
  CHECK(median_minimizer(DiscreteMeasure({2.5}, {1.0})).minimum == 0.0);

  const DiscreteMeasure m({-1.0, 0.5, 2.0, 3.0}, {0.1, 0.3, 0.35, 0.25});
  r = median_minimizer(m);
  for (double l = -3.0; l <= 5.0; l += 1e-3) CHECK(r.minimum <= abs_moment(m, l) + 1e-12);
}

TEST_CASE("autocorrelation") {
  const DiscreteMeasure two({0.0, kPi}, {0.5, 0.5});
  CHECK(std::abs(autocorrelation(two, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(autocorrelation(two, 1.0)) < 1e-15);
  CHECK(std::abs(autocorrelation(two, 2.0) - 1.0) < 1e-15);
  const DiscreteMeasure m({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  for (double t = -5; t < 5; t += 0.37) CHECK(std::abs(autocorrelation(m, t)) <= 1.0 + 1e-15);
}

TEST_CASE("bound report for the extremal measures") {
  auto report = check_bounds(DiscreteMeasure({0.0, kPi}, {0.5, 0.5}), 2);
  CHECK(report.min_abs_moment == doctest::Approx(kPi / 2));
  CHECK(std::fabs(report.frequency_slack) < 1e-12);
  CHECK(report.autocorrelation_holds());
  CHECK(report.orthogonality_error < 1e-12);
  CHECK(report.passage_time_slack == doctest::Approx(kPi / 2 - 1));
  // At t = 1 the bound reads 0 >= 1 - pi/2.
  const double re = autocorrelation(DiscreteMeasure({0.0, kPi}, {0.5, 0.5}), 1.0).real();
  CHECK(re >= 1 - kPi / 2);

  report = check_bounds(DiscreteMeasure({0, kPi / 2, kPi, 3 * kPi / 2}, {0.25, 0.25, 0.25, 0.25}), 4);
  CHECK(std::fabs(report.frequency_slack) < 1e-12);

  CHECK_THROWS_AS(check_bounds(DiscreteMeasure({0.0, 1.0}, {0.5, 0.5}), 2), ConstraintViolation);
}

TEST_CASE("evenly spread measures") {
  for (std::size_t p : {2u, 4u, 8u, 16u}) {
    const auto m = evenly_spread_measure(p);
    const auto report = check_bounds(m, p);
    CHECK(std::fabs(report.frequency_slack) < 1e-9);
    CHECK(report.orthogonality_error < 1e-12);
  }
  // Odd periods: the lattice points -2pi/3, 0, 2pi/3 give a minimum of 4pi/9,
  // below the pi/2 floor.
  const auto odd = check_bounds(evenly_spread_measure(3), 3);
  CHECK(odd.min_abs_moment == doctest::Approx(4 * kPi / 9).epsilon(1e-14));
  CHECK_FALSE(odd.frequency_bound_holds());
  CHECK(odd.autocorrelation_holds());
}

TEST_CASE("random orthogonal measures") {
  for (std::size_t p : {2u, 3u, 4u, 8u}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      CounterRng rng(77, s);
      const auto m = build_orthogonal_measure(p, {2, 2}, rng);
      const auto report = check_bounds(m, p);
      CHECK(report.orthogonality_error < 1e-9);
      CHECK(report.autocorrelation_holds());
      CHECK(report.frequency_bound_holds());
    }
  }
}

TEST_CASE("single-shift profiles") {
  CounterRng rng(1, 0);
  const auto m = build_orthogonal_measure(2, {0, 1}, rng);
  CHECK(m.size() == 2);
  CHECK(m.points()[0] == 0.0);
  CHECK(m.points()[1] == doctest::Approx(kPi));
  const auto sd = spectral_difference_from_measure(m, 2);
  CHECK(sd[0] == doctest::Approx(1.0));
  CHECK(sd[1] == doctest::Approx(1.0));
  // Class 1 at shift 1.
  const auto shifted = spectral_difference_from_measure(DiscreteMeasure({0.0, 3 * kPi}, {0.5, 0.5}), 2);
  CHECK(shifted[1] == doctest::Approx(-1.0));
}

TEST_CASE("measure-level sampling induces the uniform law") {
  // With two adjacent shifts and a uniform split, yhat_k is uniform on [-1, 1].
  const std::size_t p = 8;
  MomentAccumulator p1, ptot, y2;
  for (std::uint64_t t = 0; t < 4000; ++t) {
    CounterRng rng(123, t);
    const auto sd = spectral_difference_from_measure(build_orthogonal_measure(p, {3, 2}, rng), p);
    const auto probs = probabilities(amplitudes(sd));
    p1.add(probs.at(1));
    ptot.add(probs.total);
    for (double v : sd.values()) y2.add(v * v);
  }
  CHECK(std::fabs(y2.mean() - 1.0 / 3) < 4 * y2.standard_error());
  CHECK(std::fabs(ptot.mean() - 1.0 / 3) < 4 * ptot.standard_error());

  MonteCarloConfig c;
  c.size = p;
  c.trials = 4000;
  c.n_list = {1};
  const auto direct = run_monte_carlo(c);
  const auto& d = direct.estimates[0].acc;
  const double se = std::sqrt(d.variance() / d.count() + p1.variance() / p1.count());
  CHECK(std::fabs(d.mean() - p1.mean()) < 4 * se);
}
