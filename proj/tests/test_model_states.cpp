#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "anticip/error.hpp"
#include "anticip/model_states.hpp"
#include "oracles.hpp"

using namespace anticip;

namespace {

double relative_error(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

}  // namespace

TEST_CASE("make_model builds constant and alternating differences") {
  auto sd = std::get<PeriodicSpectralDifference>(make_model({ModelKind::kConstPeriodic, 4, 1.0}));
  CHECK(std::vector<double>(sd.values().begin(), sd.values().end()) == std::vector<double>{1, 1, 1, 1});
  sd = std::get<PeriodicSpectralDifference>(make_model({ModelKind::kAltPeriodic, 4, 0.5}));
  CHECK(std::vector<double>(sd.values().begin(), sd.values().end()) ==
        std::vector<double>{0.5, -0.5, 0.5, -0.5});
  const auto c = std::get<ContinuousSpectralDifference>(make_model({ModelKind::kAltContinuous, 6, -1.0}));
  CHECK(c[0] == -1.0);
  CHECK(c[5] == 1.0);
}

TEST_CASE("odd alternating models degenerate") {
  try {
    make_model({ModelKind::kAltPeriodic, 5, 1.0});
    FAIL("expected DegenerateModel");
  } catch (const DegenerateModel& e) {
    CHECK(std::string(e.what()).find("degenerates to an orthogonal evolution") != std::string::npos);
  }
  CHECK_THROWS_AS(make_model({ModelKind::kAltContinuous, 3, 1.0}), DegenerateModel);
  CHECK_THROWS_AS(closed_form_pn({ModelKind::kAltPeriodic, 7, 1.0}, 1), DegenerateModel);
  CHECK_THROWS_AS(make_model({ModelKind::kConstPeriodic, 4, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(make_model({ModelKind::kConstPeriodic, 1, 1.0}), std::invalid_argument);
}

TEST_CASE("model kind names round-trip") {
  for (auto kind : {ModelKind::kConstPeriodic, ModelKind::kAltPeriodic, ModelKind::kConstContinuous,
                    ModelKind::kAltContinuous}) {
    CHECK(parse_model_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_model_kind("constant"), std::invalid_argument);
}

TEST_CASE("closed-form examples") {
  CHECK(closed_form_pn({ModelKind::kConstPeriodic, 2, 1.0}, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(closed_form_pn({ModelKind::kConstContinuous, 2, 1.0}, 1) ==
        doctest::Approx(4.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
  CHECK(closed_form_pn({ModelKind::kAltContinuous, 4, 1.0}, 2) == doctest::Approx(0.2624636).epsilon(1e-6));
  // 2n - 1 = 0 mod p: odd p, n = (p + 1) / 2.
  CHECK(closed_form_pn({ModelKind::kConstPeriodic, 5, 0.8}, 3) == doctest::Approx(0.64 / 25).epsilon(1e-15));
  CHECK(closed_form_pn({ModelKind::kConstPeriodic, 5, 0.8}, 8) == doctest::Approx(0.64 / 25).epsilon(1e-15));
}

TEST_CASE("closed forms match the direct-sum and cell-integration oracles") {
  for (auto kind : {ModelKind::kConstPeriodic, ModelKind::kAltPeriodic}) {
    for (std::size_t p : {2u, 3u, 4u, 6u, 9u, 16u, 64u}) {
      if (kind == ModelKind::kAltPeriodic && p % 2) continue;
      const ModelSpec spec{kind, p, -0.7};
      const auto sd = std::get<PeriodicSpectralDifference>(make_model(spec));
      const std::vector<double> y(sd.values().begin(), sd.values().end());
      for (long long n = -static_cast<long long>(p); n <= 2 * static_cast<long long>(p); ++n) {
        const double ref = std::norm(oracle::periodic_amplitude(y, n));
        const double cf = closed_form_pn(spec, n);
        if (ref < 1e-20) {
          CHECK(cf < 1e-20);
        } else {
          CHECK(relative_error(cf, ref) < 1e-12);
        }
      }
    }
  }
  for (auto kind : {ModelKind::kConstContinuous, ModelKind::kAltContinuous}) {
    for (std::size_t m : {2u, 4u, 10u, 16u}) {
      const ModelSpec spec{kind, m, 0.9};
      const auto sd = std::get<ContinuousSpectralDifference>(make_model(spec));
      const std::vector<double> y(sd.values().begin(), sd.values().end());
      for (long long n = -50; n <= 50; ++n) {
        const double ref = std::norm(oracle::continuous_amplitude(y, n));
        const double cf = closed_form_pn(spec, n);
        CHECK(relative_error(cf, ref) < 1e-11);
      }
    }
  }
}

TEST_CASE("closed forms match the transform pipeline at large sizes") {
  for (std::size_t p : {256u, 1024u, 4096u}) {
    for (auto kind : {ModelKind::kConstPeriodic, ModelKind::kAltPeriodic}) {
      const ModelSpec spec{kind, p, 1.0};
      const auto probs = probabilities(amplitudes(std::get<PeriodicSpectralDifference>(make_model(spec))));
      double worst = 0.0;
      for (Index n = 1; n <= static_cast<Index>(p); ++n) {
        worst = std::max(worst, relative_error(probs.at(n), closed_form_pn(spec, n)));
      }
      CHECK(worst < 1e-10);
      CHECK(probs.total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  for (std::size_t m : {256u, 1024u}) {
    for (auto kind : {ModelKind::kConstContinuous, ModelKind::kAltContinuous}) {
      const ModelSpec spec{kind, m, 0.5};
      const auto sd = std::get<ContinuousSpectralDifference>(make_model(spec));
      const auto probs = probabilities(amplitudes(sd, -2 * static_cast<Index>(m), 2 * static_cast<Index>(m)));
      double worst = 0.0;
      for (Index n = probs.first_index; n <= probs.last_index(); ++n) {
        const double cf = closed_form_pn(spec, n);
        if (cf < 1e-300) continue;
        worst = std::max(worst, relative_error(probs.at(n), cf));
      }
      CHECK(worst < 1e-10);
      CHECK(total_probability(sd) == doctest::Approx(0.25).epsilon(1e-10));
    }
  }
}

TEST_CASE("extremes of the constant and alternating periodic models") {
  for (std::size_t p : {8u, 9u, 64u, 101u}) {
    for (auto kind : {ModelKind::kConstPeriodic, ModelKind::kAltPeriodic}) {
      if (kind == ModelKind::kAltPeriodic && p % 2) continue;
      const ModelSpec spec{kind, p, 1.0};
      Index argmax = 1, argmin = 1;
      for (Index n = 1; n <= static_cast<Index>(p); ++n) {
        if (closed_form_pn(spec, n) > closed_form_pn(spec, argmax) + 1e-15) argmax = n;
        if (closed_form_pn(spec, n) < closed_form_pn(spec, argmin) - 1e-15) argmin = n;
      }
      const Index far = (static_cast<Index>(p) + 1) / 2;
      const Index max_tilde = tilde_index(argmax, p);
      const Index min_tilde = tilde_index(argmin, p);
      CAPTURE(p);
      if (kind == ModelKind::kConstPeriodic) {
        CHECK(max_tilde <= 1);
        CHECK(min_tilde == far);
      } else {
        CHECK(max_tilde == far);
        CHECK(min_tilde <= 1);
      }
    }
  }
}

TEST_CASE("constant periodic tail decays like 1/N") {
  const std::size_t p = 4096;
  const ModelSpec spec{ModelKind::kConstPeriodic, p, 1.0};
  const auto probs = probabilities(amplitudes(std::get<PeriodicSpectralDifference>(make_model(spec))));
  double worst = 0.0;
  for (Index N = 1; N <= static_cast<Index>(p) / 4; N *= 2) {
    worst = std::max(worst, static_cast<double>(N) * cumulative_probability(probs, N));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("alternating continuous maximum sits at n = M/2") {
  for (std::size_t m : {4u, 8u, 16u, 64u, 256u}) {
    const ModelSpec spec{ModelKind::kAltContinuous, m, 1.0};
    Index argmax = 1;
    for (Index n = 1; n <= 2 * static_cast<Index>(m); ++n) {
      if (closed_form_pn(spec, n) > closed_form_pn(spec, argmax)) argmax = n;
    }
    CHECK(argmax == static_cast<Index>(m) / 2);
  }
  // The peak approaches (4 / pi^2)^2 = 16 / pi^4 for large M, with relative error ~2/M.
  const double peak = closed_form_pn({ModelKind::kAltContinuous, 4096, 1.0}, 2048);
  const double limit = 16.0 / std::pow(std::numbers::pi, 4);
  CHECK(peak == doctest::Approx(limit).epsilon(1e-3));
}
