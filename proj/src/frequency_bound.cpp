#include "anticip/frequency_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anticip/spectral_core.hpp"
#include "summation.hpp"

namespace anticip {

double abs_moment(const DiscreteMeasure& m, double lambda0) {
  detail::CompensatedSum sum;
  const auto pts = m.points();
  const auto w = m.weights();
  for (std::size_t j = 0; j < pts.size(); ++j) sum.add(w[j] * std::fabs(pts[j] - lambda0));
  return sum.value();
}

MedianMinimizer median_minimizer(const DiscreteMeasure& m) {
  const auto pts = m.points();
  const auto w = m.weights();
  constexpr double kTie = 1e-12;
  double cumulative = 0.0;
  std::size_t j = 0;
  for (; j < pts.size(); ++j) {
    cumulative += w[j];
    if (cumulative >= 0.5 - kTie) break;
  }
  j = std::min(j, pts.size() - 1);
  MedianMinimizer result;
  result.interval_lo = pts[j];
  // Exactly half the mass at or below pts[j]: every point up to the next atom
  // minimizes.
  result.interval_hi =
      (std::fabs(cumulative - 0.5) <= kTie && j + 1 < pts.size()) ? pts[j + 1] : pts[j];
  result.location = 0.5 * (result.interval_lo + result.interval_hi);
  result.minimum = abs_moment(m, result.location);
  return result;
}

std::complex<double> autocorrelation(const DiscreteMeasure& m, double t) {
  const auto pts = m.points();
  const auto w = m.weights();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    re += w[j] * std::cos(pts[j] * t);
    im -= w[j] * std::sin(pts[j] * t);
  }
  return {re, im};
}

BoundReport check_bounds(const DiscreteMeasure& m, std::size_t p, const TimeGrid& grid) {
  // Validates the orthogonality precondition (throws ConstraintViolation).
  (void)spectral_difference_from_measure(m, p);

  BoundReport report;
  report.period = p;
  const auto median = median_minimizer(m);
  report.median = median.location;
  report.min_abs_moment = median.minimum;
  report.passage_time_slack = median.minimum - 1.0;
  report.frequency_slack = median.minimum - std::numbers::pi / 2.0;

  const double spread_origin = abs_moment(m, 0.0);
  report.autocorrelation_slack_median = std::numeric_limits<double>::infinity();
  report.autocorrelation_slack_origin = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<std::size_t>(std::llround((grid.t_max - grid.t_min) / grid.step));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = grid.t_min + static_cast<double>(i) * grid.step;
    const auto amp = autocorrelation(m, t);
    const auto centred = amp * std::polar(1.0, median.location * t);
    const double slack_median = centred.real() - (1.0 - t * median.minimum);
    const double slack_origin = amp.real() - (1.0 - t * spread_origin);
    if (slack_median < report.autocorrelation_slack_median) {
      report.autocorrelation_slack_median = slack_median;
      report.worst_time = t;
    }
    report.autocorrelation_slack_origin = std::min(report.autocorrelation_slack_origin, slack_origin);
  }

  for (std::size_t n = 0; n <= 2 * p; ++n) {
    const double expected = n % p == 0 ? 1.0 : 0.0;
    const auto amp = autocorrelation(m, static_cast<double>(n));
    report.orthogonality_error = std::max(report.orthogonality_error, std::abs(amp - expected));
  }
  return report;
}

DiscreteMeasure build_orthogonal_measure(std::size_t p, const ShiftLaw& law, CounterRng& rng) {
  if (p < 2) throw std::invalid_argument("build_orthogonal_measure: p must be >= 2");
  if (law.spread < 1 || law.max_offset < 0) throw std::invalid_argument("invalid shift law");
  std::vector<double> points;
  std::vector<double> weights;
  const double share = 1.0 / static_cast<double>(p);
  std::vector<double> cuts;
  for (std::size_t k = 0; k < p; ++k) {
    const auto span = static_cast<std::uint64_t>(2 * law.max_offset + 1);
    const auto base = static_cast<long long>(rng.next_u64() % span) - law.max_offset;
    // Uniform point on the simplex from sorted uniform cut points.
    cuts.assign(1, 0.0);
    for (int i = 1; i < law.spread; ++i) cuts.push_back(rng.next_unit());
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (int i = 0; i < law.spread; ++i) {
      const double mass = (cuts[i + 1] - cuts[i]) * share;
      if (mass <= 0.0) continue;
      const double shift = static_cast<double>(base + i);
      points.push_back(2.0 * std::numbers::pi * (shift + static_cast<double>(k) * share));
      weights.push_back(mass);
    }
  }
  // Rescale away the rounding drift of the total.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DiscreteMeasure evenly_spread_measure(std::size_t p) {
  if (p < 2) throw std::invalid_argument("evenly_spread_measure: p must be >= 2");
  std::vector<double> points;
  std::vector<double> weights(p, 1.0 / static_cast<double>(p));
  const auto pl = static_cast<long long>(p);
  for (long long j = -(pl / 2); j < pl - pl / 2; ++j) {
    points.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p));
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

}  // namespace anticip
