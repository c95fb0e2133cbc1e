#include "anticip/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "anticip/error.hpp"
#include "dft.hpp"
#include "summation.hpp"

namespace anticip {

namespace {

constexpr double kRangeSlack = 1e-12;

std::vector<double> checked_differences(std::vector<double> values, const char* what) {
  if (values.size() < 2) {
    throw std::invalid_argument(std::string(what) + ": need at least 2 entries");
  }
  for (double& v : values) {
    if (!std::isfinite(v) || std::fabs(v) > 1.0 + kRangeSlack) {
      throw std::invalid_argument(std::string(what) + ": normalized difference outside [-1, 1]");
    }
    v = std::clamp(v, -1.0, 1.0);
  }
  return values;
}

// sin(phi) exp(-i phi) / (pi (n - 1/2)), phi = pi (n - 1/2) / M: the common
// factor of every cell integral at frequency n - 1/2.
Complex cell_factor(Index n, std::size_t cells) {
  const auto two_m = static_cast<long long>(2 * cells);
  const Complex phase = detail::unit_phase(2 * n - 1, two_m);
  const double sin_phi = -phase.imag();
  const double omega = static_cast<double>(n) - 0.5;
  return phase * (sin_phi / (std::numbers::pi * omega));
}

// |cell_factor|^2 depends on n only through n mod M.
double cell_weight(std::size_t residue, std::size_t cells) {
  const double phi = std::numbers::pi * (static_cast<double>(residue) - 0.5) /
                     static_cast<double>(cells);
  const double s = std::sin(phi);
  return s * s / (std::numbers::pi * std::numbers::pi);
}

std::vector<Complex> raw_transform(std::span<const double> values) {
  HalfIntegerTransform transform(values.size());
  std::vector<Complex> out(values.size());
  transform.apply(values, out);
  return out;
}

double continuous_probability(const std::vector<Complex>& raw, std::size_t cells, Index n) {
  const auto r = static_cast<std::size_t>(detail::floor_mod(n, static_cast<long long>(cells)));
  return std::norm(cell_factor(n, cells) * raw[r]);
}

// Sum over t of 1 / (omega0 + t M)^2 for t >= 0, bounded by the first term
// plus the integral of the rest.
double class_tail(double omega0, double cells) {
  return 1.0 / (omega0 * omega0) + 1.0 / (cells * omega0);
}

double tail_bound_from_weights(const std::vector<double>& weights, Index n_min, Index n_max) {
  const auto m = static_cast<long long>(weights.size());
  const double cells = static_cast<double>(m);
  detail::CompensatedSum bound;
  for (long long r = 0; r < m; ++r) {
    if (weights[r] == 0.0) continue;
    // First n = r + t M above the window, last one below it.
    const long long above = r + (detail::floor_div(n_max - r, m) + 1) * m;
    const long long below = r + detail::floor_div(n_min - 1 - r, m) * m;
    const double omega_above = static_cast<double>(above) - 0.5;
    const double omega_below = 0.5 - static_cast<double>(below);
    bound.add(weights[r] * (class_tail(omega_above, cells) + class_tail(omega_below, cells)));
  }
  return bound.value();
}

std::vector<double> residue_weights(const ContinuousSpectralDifference& sd) {
  const auto raw = raw_transform(sd.values());
  std::vector<double> weights(raw.size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    weights[r] = cell_weight(r, raw.size()) * std::norm(raw[r]);
  }
  return weights;
}

}  // namespace

PeriodicSpectralDifference::PeriodicSpectralDifference(std::vector<double> values)
    : values_(checked_differences(std::move(values), "PeriodicSpectralDifference")) {}

ContinuousSpectralDifference::ContinuousSpectralDifference(std::vector<double> values)
    : values_(checked_differences(std::move(values), "ContinuousSpectralDifference")) {}

Complex AmplitudeSeries::at(Index n) const {
  if (period) {
    const auto p = static_cast<long long>(*period);
    return amplitudes.at(static_cast<std::size_t>(detail::floor_mod(n - first_index, p)));
  }
  if (n < first_index || n > last_index()) {
    throw DomainError("AmplitudeSeries: index outside the stored window");
  }
  return amplitudes[static_cast<std::size_t>(n - first_index)];
}

double ProbabilitySeries::at(Index n) const {
  if (period) {
    const auto p = static_cast<long long>(*period);
    return probabilities.at(static_cast<std::size_t>(detail::floor_mod(n - first_index, p)));
  }
  if (n < first_index || n > last_index()) {
    throw DomainError("ProbabilitySeries: index outside the stored window");
  }
  return probabilities[static_cast<std::size_t>(n - first_index)];
}

struct HalfIntegerTransform::Impl {
  explicit Impl(std::size_t n) : dft(n), phases(n), buffer(n) {
    for (std::size_t k = 0; k < n; ++k) {
      phases[k] = detail::unit_phase(-static_cast<long long>(k), static_cast<long long>(n));
    }
  }
  detail::Dft dft;
  std::vector<Complex> phases;  // exp(i pi k / p)
  std::vector<Complex> buffer;
};

HalfIntegerTransform::HalfIntegerTransform(std::size_t length)
    : impl_(std::make_unique<Impl>(length)) {}
HalfIntegerTransform::~HalfIntegerTransform() = default;
HalfIntegerTransform::HalfIntegerTransform(HalfIntegerTransform&&) noexcept = default;
HalfIntegerTransform& HalfIntegerTransform::operator=(HalfIntegerTransform&&) noexcept = default;

std::size_t HalfIntegerTransform::length() const { return impl_->dft.size(); }

void HalfIntegerTransform::apply(std::span<const double> values, std::span<Complex> out) {
  const std::size_t n = length();
  if (values.size() != n || out.size() != n) {
    throw std::invalid_argument("HalfIntegerTransform: length mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) out[k] = values[k] * impl_->phases[k];
  impl_->dft.forward(out);
}

AmplitudeSeries amplitudes(const PeriodicSpectralDifference& sd, TransformMode mode) {
  const std::size_t p = sd.period();
  const auto pl = static_cast<long long>(p);
  const double scale = 1.0 / static_cast<double>(p);
  AmplitudeSeries series{1, std::vector<Complex>(p), p};

  if (mode == TransformMode::kFast) {
    const auto raw = raw_transform(sd.values());
    for (std::size_t i = 0; i < p; ++i) series.amplitudes[i] = raw[(i + 1) % p] * scale;
    return series;
  }

  // exp(-i pi r / p), r = (2n - 1) k mod 2p
  std::vector<Complex> table(2 * p);
  for (long long r = 0; r < 2 * pl; ++r) table[r] = detail::unit_phase(r, pl);
  for (std::size_t i = 0; i < p; ++i) {
    const long long step = 2 * static_cast<long long>(i + 1) - 1;
    Complex acc{0.0, 0.0};
    long long r = 0;
    for (std::size_t k = 0; k < p; ++k) {
      acc += sd[k] * table[r];
      r = (r + step) % (2 * pl);
    }
    series.amplitudes[i] = acc * scale;
  }
  return series;
}

AmplitudeSeries amplitudes(const ContinuousSpectralDifference& sd, Index n_min, Index n_max,
                           TransformMode mode) {
  if (n_min > n_max) throw DomainError("amplitudes: empty index window");
  const std::size_t m = sd.cells();
  const auto ml = static_cast<long long>(m);
  AmplitudeSeries series{n_min, std::vector<Complex>(static_cast<std::size_t>(n_max - n_min + 1)),
                         std::nullopt};

  if (mode == TransformMode::kFast) {
    const auto raw = raw_transform(sd.values());
    for (Index n = n_min; n <= n_max; ++n) {
      const auto r = static_cast<std::size_t>(detail::floor_mod(n, ml));
      series.amplitudes[static_cast<std::size_t>(n - n_min)] = cell_factor(n, m) * raw[r];
    }
    return series;
  }

  // Cell j contributes yhat_j exp(-i pi (2n - 1)(2j + 1) / (2M)) sin(phi) / (pi omega).
  for (Index n = n_min; n <= n_max; ++n) {
    const long long a = detail::floor_mod(2 * n - 1, 4 * ml);
    const double omega = static_cast<double>(n) - 0.5;
    const double sin_phi = -detail::unit_phase(2 * n - 1, 2 * ml).imag();
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      const long long b = 2 * static_cast<long long>(j) + 1;
      acc += sd[j] * detail::unit_phase((a * b) % (4 * ml), 2 * ml);
    }
    series.amplitudes[static_cast<std::size_t>(n - n_min)] =
        acc * (sin_phi / (std::numbers::pi * omega));
  }
  return series;
}

ProbabilitySeries probabilities(const AmplitudeSeries& amps) {
  ProbabilitySeries out{amps.first_index, std::vector<double>(amps.amplitudes.size()), amps.period,
                        0.0};
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < amps.amplitudes.size(); ++i) {
    out.probabilities[i] = std::norm(amps.amplitudes[i]);
    total.add(out.probabilities[i]);
  }
  out.total = total.value();
  return out;
}

double cumulative_probability(const ProbabilitySeries& probs, Index N) {
  if (N < 0) throw DomainError("cumulative_probability: N must be nonnegative");
  detail::CompensatedSum sum;
  if (probs.period) {
    const auto p = static_cast<Index>(*probs.period);
    if (2 * N >= p) {
      std::ostringstream msg;
      msg << "cumulative_probability: N = " << N << " must be below p/2 (p = " << p << ")";
      throw DomainError(msg.str());
    }
    if (static_cast<Index>(probs.probabilities.size()) < p) {
      throw DomainError("cumulative_probability: series does not cover a full period");
    }
    for (Index n = N + 1; n <= p - N; ++n) sum.add(probs.at(n));
    return sum.value();
  }
  for (Index n = probs.first_index; n <= probs.last_index(); ++n) {
    if (n >= N + 1 || n <= -N) sum.add(probs.at(n));
  }
  return sum.value();
}

Index tilde_index(Index n, std::optional<std::size_t> period) {
  const Index magnitude = n < 0 ? -n : n;
  if (!period) return magnitude;
  const auto p = static_cast<Index>(*period);
  const Index r = magnitude % p;
  return 2 * r <= p + 1 ? r : p + 1 - r;
}

MomentObservable moment_observable(const ProbabilitySeries& probs, double r) {
  if (!(r >= 0.0)) throw DomainError("moment_observable: order must be nonnegative");
  detail::CompensatedSum full;
  for (Index n = probs.first_index; n <= probs.last_index(); ++n) {
    const double weight = std::pow(static_cast<double>(tilde_index(n, probs.period)), r);
    full.add(weight * probs.at(n));
  }
  MomentObservable result{full.value(), false};
  if (probs.period) return result;

  // Cauchy check: compare against the sum over the inner half of the window.
  const Index reach = std::max(probs.last_index(), -probs.first_index);
  const Index half = reach / 2;
  detail::CompensatedSum inner;
  for (Index n = probs.first_index; n <= probs.last_index(); ++n) {
    if (n > half || n < -half) continue;
    inner.add(std::pow(static_cast<double>(tilde_index(n, std::nullopt)), r) * probs.at(n));
  }
  const double increment = result.value - inner.value();
  result.divergent = increment > 1e-3 * std::max(std::fabs(result.value), 1e-300);
  return result;
}

double total_probability(const ContinuousSpectralDifference& sd) {
  // sum_{t in Z} 1 / (r - 1/2 + t M)^2 = (pi / M)^2 / sin^2(pi (r - 1/2) / M), so each
  // residue class contributes |raw_r|^2 / M^2.
  const auto raw = raw_transform(sd.values());
  const double m = static_cast<double>(sd.cells());
  detail::CompensatedSum total;
  for (const auto& a : raw) total.add(std::norm(a));
  return total.value() / (m * m);
}

double tail_probability(const ContinuousSpectralDifference& sd, Index N) {
  if (N < 0) throw DomainError("tail_probability: N must be nonnegative");
  const auto raw = raw_transform(sd.values());
  const double m = static_cast<double>(sd.cells());
  detail::CompensatedSum total;
  for (const auto& a : raw) total.add(std::norm(a) / (m * m));
  for (Index n = 1 - N; n <= N; ++n) total.add(-continuous_probability(raw, sd.cells(), n));
  return total.value();
}

double truncation_tail_bound(const ContinuousSpectralDifference& sd, Index n_min, Index n_max) {
  if (n_min > 0 || n_max < 1) {
    throw DomainError("truncation_tail_bound: window must contain n = 0 and n = 1");
  }
  return tail_bound_from_weights(residue_weights(sd), n_min, n_max);
}

Truncation default_truncation(const ContinuousSpectralDifference& sd, double target, Index max_n) {
  const auto weights = residue_weights(sd);
  auto bound = [&](Index n) { return tail_bound_from_weights(weights, 1 - n, n); };

  Index hi = 16;
  while (hi < max_n && bound(hi) >= target) hi = std::min(hi * 2, max_n);
  if (bound(hi) >= target) return {hi, bound(hi)};
  Index lo = std::max<Index>(1, hi / 2);
  if (bound(lo) < target) return {lo, bound(lo)};
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    (bound(mid) < target ? hi : lo) = mid;
  }
  return {hi, bound(hi)};
}

PeriodicSpectralDifference spectral_difference_from_measure(const DiscreteMeasure& m,
                                                            std::size_t p, double tol) {
  if (p < 2) throw std::invalid_argument("spectral_difference_from_measure: p must be >= 2");
  const auto pl = static_cast<long long>(p);
  std::vector<double> class_mass(p, 0.0);
  std::vector<double> even(p, 0.0);
  std::vector<double> odd(p, 0.0);
  std::vector<double> off_lattice(p, 0.0);

  const auto points = m.points();
  const auto weights = m.weights();
  for (std::size_t i = 0; i < points.size(); ++i) {
    // lambda = 2 pi (shift + k / p)  <=>  lambda p / (2 pi) = shift p + k
    const double x = points[i] * static_cast<double>(p) / (2.0 * std::numbers::pi);
    const auto z = static_cast<long long>(std::llround(x));
    const auto k = static_cast<std::size_t>(detail::floor_mod(z, pl));
    if (std::fabs(x - static_cast<double>(z)) > tol * std::max(1.0, std::fabs(x))) {
      off_lattice[k] += weights[i];
      continue;
    }
    class_mass[k] += weights[i];
    const long long shift = detail::floor_div(z, pl);
    (detail::floor_mod(shift, 2) == 0 ? even : odd)[k] += weights[i];
  }

  std::size_t worst = 0;
  double worst_dev = -1.0;
  const double share = 1.0 / static_cast<double>(p);
  for (std::size_t k = 0; k < p; ++k) {
    const double dev = std::fabs(class_mass[k] - share) + off_lattice[k];
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = k;
    }
  }
  if (worst_dev > tol) {
    std::ostringstream msg;
    msg << "reduction modulo 2*pi is not uniform: residue " << worst << " deviates by "
        << worst_dev;
    throw ConstraintViolation(msg.str(), worst, worst_dev);
  }

  std::vector<double> yhat(p);
  for (std::size_t k = 0; k < p; ++k) yhat[k] = static_cast<double>(p) * (even[k] - odd[k]);
  return PeriodicSpectralDifference(std::move(yhat));
}

}  // namespace anticip
