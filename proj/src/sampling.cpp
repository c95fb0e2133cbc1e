#include "anticip/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "anticip/stats_closed_form.hpp"

namespace anticip {

namespace {

// Calls fn(chunk, first, count) for every fixed-size chunk of the range and
// returns the results in chunk order.
template <typename Result, typename Fn>
std::vector<Result> for_each_chunk(const TrialRange& range, Fn&& make_worker) {
  const std::uint64_t chunks = (range.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<Result> results(chunks);
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(range.threads), chunks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      auto worker = make_worker();
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t first = range.first_trial + c * kTrialsPerChunk;
        const std::uint64_t count = std::min(kTrialsPerChunk, range.trials - c * kTrialsPerChunk);
        results[c] = worker(first, count);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

bool contains_duplicates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

void fill_periodic(const MonteCarloConfig& config, std::vector<Estimate>& out) {
  const std::size_t p = config.size;
  const auto& m = config.distribution.moments();
  for (Index n : config.n_list) {
    out.push_back({"p_n", static_cast<double>(n), {}, expected_pn(p, n, m), var_pn(p, n, m)});
  }
  for (Index N : config.N_list) {
    out.push_back({"p_N", static_cast<double>(N), {}, expected_pN(p, N, m), var_pN(p, N, m)});
  }
  // p_tot is p_N at N = 0.
  out.push_back({"p_tot", 0.0, {}, expected_ptot(m), var_pN(p, 0, m)});
  for (double r : config.r_list) {
    out.push_back({"moment", r, {}, expected_moment_observable_exact(p, r, m), std::nullopt});
  }
}

void fill_continuous(const MonteCarloConfig& config, std::vector<Estimate>& out) {
  const std::size_t cells = config.size;
  const auto ml = static_cast<Index>(cells);
  const auto& m = config.distribution.moments();
  for (Index n : config.n_list) {
    // p_n is the period-M probability at n mod M scaled by the cell factor.
    const double omega = static_cast<double>(n) - 0.5;
    const double s =
        static_cast<double>(cells) * std::sin(std::numbers::pi * omega / static_cast<double>(cells));
    const double factor = s * s / (std::numbers::pi * std::numbers::pi * omega * omega);
    const Index reduced = ((n - 1) % ml + ml) % ml + 1;
    out.push_back({"p_n", static_cast<double>(n), {}, continuous_expected_pn(n, m, cells),
                   factor * factor * var_pn(cells, reduced, m)});
  }
  for (Index N : config.N_list) {
    out.push_back({"p_N", static_cast<double>(N), {}, continuous_expected_pN(N, m, cells),
                   std::nullopt});
  }
  out.push_back({"p_tot", 0.0, {}, continuous_expected_ptot(m), continuous_var_ptot(m, cells)});
}

TrialObserver periodic_observer(const MonteCarloConfig& config) {
  struct State {
    HalfIntegerTransform transform;
    std::vector<Complex> raw;
    ProbabilitySeries probs;
  };
  const std::size_t p = config.size;
  auto state = std::make_shared<State>(
      State{HalfIntegerTransform(p), std::vector<Complex>(p),
            ProbabilitySeries{1, std::vector<double>(p), p, 0.0}});
  return [state, p, n_list = config.n_list, N_list = config.N_list, r_list = config.r_list,
          epsilon = config.epsilon](std::span<const double> yhat, std::span<double> out) {
    state->transform.apply(yhat, state->raw);
    const double scale = 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    auto& probs = state->probs;
    for (std::size_t i = 0; i < p; ++i) probs.probabilities[i] = std::norm(state->raw[(i + 1) % p]) * scale;
    std::size_t k = 0;
    for (Index n : n_list) out[k++] = probs.at(n);
    for (Index N : N_list) out[k++] = cumulative_probability(probs, N);
    out[k++] = cumulative_probability(probs, 0);
    for (double r : r_list) out[k++] = moment_observable(probs, r).value;
    if (epsilon) {
      out[k++] = static_cast<double>(std::count_if(yhat.begin(), yhat.end(), [&](double v) {
        return std::fabs(v) < *epsilon;
      }));
    }
  };
}

TrialObserver continuous_observer(const MonteCarloConfig& config) {
  Index lo = 0;
  Index hi = 1;
  if (!config.n_list.empty()) {
    lo = *std::min_element(config.n_list.begin(), config.n_list.end());
    hi = *std::max_element(config.n_list.begin(), config.n_list.end());
  }
  return [lo, hi, n_list = config.n_list, N_list = config.N_list,
          epsilon = config.epsilon](std::span<const double> yhat, std::span<double> out) {
    const ContinuousSpectralDifference sd(std::vector<double>(yhat.begin(), yhat.end()));
    std::size_t k = 0;
    if (!n_list.empty()) {
      const auto probs = probabilities(amplitudes(sd, lo, hi));
      for (Index n : n_list) out[k++] = probs.at(n);
    }
    for (Index N : N_list) out[k++] = tail_probability(sd, N);
    out[k++] = total_probability(sd);
    if (epsilon) {
      out[k++] = static_cast<double>(std::count_if(yhat.begin(), yhat.end(), [&](double v) {
        return std::fabs(v) < *epsilon;
      }));
    }
  };
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ANTICIP_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value <= 4096) {
      return static_cast<unsigned>(value);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> sample_spectral_difference(const SamplingDistribution& dist, std::size_t size,
                                               CounterRng& rng) {
  std::vector<double> values(size);
  for (double& v : values) v = dist.quantile(rng.next_unit());
  return values;
}

PeriodicSpectralDifference sample_periodic(const SamplingDistribution& dist, std::size_t p,
                                           CounterRng& rng) {
  return PeriodicSpectralDifference(sample_spectral_difference(dist, p, rng));
}

ContinuousSpectralDifference sample_continuous(const SamplingDistribution& dist, std::size_t cells,
                                               CounterRng& rng) {
  return ContinuousSpectralDifference(sample_spectral_difference(dist, cells, rng));
}

std::vector<MomentAccumulator> run_trials(const SamplingDistribution& dist, std::size_t size,
                                          const TrialRange& range, std::size_t statistics,
                                          const ObserverFactory& factory) {
  using Chunk = std::vector<MomentAccumulator>;
  auto chunks = for_each_chunk<Chunk>(range, [&] {
    return [&, observer = factory(), yhat = std::vector<double>(size),
            values = std::vector<double>(statistics)](std::uint64_t first,
                                                      std::uint64_t count) mutable {
      Chunk acc(statistics);
      for (std::uint64_t t = first; t < first + count; ++t) {
        CounterRng rng(range.seed, t);
        for (double& v : yhat) v = dist.quantile(rng.next_unit());
        observer(yhat, values);
        for (std::size_t s = 0; s < statistics; ++s) acc[s].add(values[s]);
      }
      return acc;
    };
  });
  Chunk total(statistics);
  for (const auto& chunk : chunks) {
    for (std::size_t s = 0; s < statistics; ++s) total[s].merge(chunk[s]);
  }
  return total;
}

void MonteCarloConfig::validate() const {
  if (size < 2) throw std::invalid_argument("period/cells must be at least 2");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (first_trial > std::numeric_limits<std::uint64_t>::max() - trials) {
    throw std::invalid_argument("trial range overflows the stream index");
  }
  const auto s = static_cast<Index>(size);
  for (Index n : n_list) {
    if (geometry == Geometry::kPeriodic && (n < 1 || n > s)) {
      throw std::invalid_argument("n = " + std::to_string(n) + " outside 1.." + std::to_string(s));
    }
  }
  for (Index N : N_list) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    if (geometry == Geometry::kPeriodic && 2 * N >= s) {
      throw std::invalid_argument("N = " + std::to_string(N) + " must be below p/2");
    }
  }
  for (double r : r_list) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("moment order must be >= 0");
  }
  if (!r_list.empty() && geometry == Geometry::kContinuous) {
    throw std::invalid_argument(
        "moment observables diverge for continuous spectra; use a periodic run");
  }
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  std::vector<double> n_values(n_list.begin(), n_list.end());
  std::vector<double> N_values(N_list.begin(), N_list.end());
  if (contains_duplicates(n_values) || contains_duplicates(N_values) ||
      contains_duplicates(r_list)) {
    throw std::invalid_argument("duplicate entries in an index list");
  }
}

double z_score(double value, double expected, double standard_error) {
  const double diff = value - expected;
  if (std::fabs(diff) <= 1e-12 * std::max(1.0, std::fabs(expected))) return 0.0;
  if (standard_error <= 0.0) return diff > 0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
  return diff / standard_error;
}

std::optional<double> Estimate::z_mean() const {
  if (!expected_mean) return std::nullopt;
  return z_score(acc.mean(), *expected_mean, acc.standard_error());
}

std::optional<double> Estimate::z_variance() const {
  if (!expected_variance || acc.count() < 2) return std::nullopt;
  return z_score(acc.variance(), *expected_variance, acc.variance_standard_error());
}

void EstimateReport::merge(const EstimateReport& other) {
  if (other.estimates.size() != estimates.size()) {
    throw std::invalid_argument("EstimateReport::merge: statistic lists differ");
  }
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i].statistic != other.estimates[i].statistic ||
        estimates[i].parameter != other.estimates[i].parameter) {
      throw std::invalid_argument("EstimateReport::merge: statistic lists differ");
    }
    estimates[i].acc.merge(other.estimates[i].acc);
  }
}

double EstimateReport::max_abs_z() const {
  double worst = 0.0;
  for (const auto& e : estimates) {
    if (auto z = e.z_mean()) worst = std::max(worst, std::fabs(*z));
    if (auto z = e.z_variance()) worst = std::max(worst, std::fabs(*z));
  }
  return worst;
}

EstimateReport run_monte_carlo(const MonteCarloConfig& config) {
  config.validate();
  EstimateReport report;
  const bool periodic = config.geometry == Geometry::kPeriodic;
  if (periodic) {
    fill_periodic(config, report.estimates);
  } else {
    fill_continuous(config, report.estimates);
  }
  if (config.epsilon) {
    const double p = static_cast<double>(config.size);
    const double q = config.distribution.near_zero_probability(*config.epsilon);
    report.estimates.push_back({"near_zero_count", *config.epsilon, {}, p * q, p * q * (1.0 - q)});
  }

  ObserverFactory factory = [&config, periodic] {
    return periodic ? periodic_observer(config) : continuous_observer(config);
  };
  const TrialRange range{config.seed, config.first_trial, config.trials, config.threads};
  auto accs = run_trials(config.distribution, config.size, range, report.estimates.size(), factory);
  for (std::size_t i = 0; i < accs.size(); ++i) report.estimates[i].acc = accs[i];
  return report;
}

double NearZeroReport::z_mean() const {
  return z_score(count.mean(), expected_mean, count.standard_error());
}

double NearZeroReport::z_variance() const {
  return z_score(count.variance(), expected_variance, count.variance_standard_error());
}

NearZeroReport near_zero_statistics(const SamplingDistribution& dist, std::size_t p,
                                    double epsilon, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads) {
  if (p < 1) throw std::invalid_argument("near_zero_statistics: p must be positive");
  if (trials < 1) throw std::invalid_argument("near_zero_statistics: trials must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("near_zero_statistics: epsilon must lie in (0, 1]");
  }

  struct Chunk {
    std::vector<std::uint64_t> histogram;
    MomentAccumulator count;
  };
  const TrialRange range{seed, 0, trials, threads};
  auto chunks = for_each_chunk<Chunk>(range, [&] {
    return [&](std::uint64_t first, std::uint64_t count) {
      Chunk chunk{std::vector<std::uint64_t>(p + 1, 0), {}};
      for (std::uint64_t t = first; t < first + count; ++t) {
        CounterRng rng(seed, t);
        std::size_t c = 0;
        for (std::size_t k = 0; k < p; ++k) {
          if (std::fabs(dist.quantile(rng.next_unit())) < epsilon) ++c;
        }
        ++chunk.histogram[c];
        chunk.count.add(static_cast<double>(c));
      }
      return chunk;
    };
  });

  NearZeroReport report;
  report.period = p;
  report.epsilon = epsilon;
  report.q = dist.near_zero_probability(epsilon);
  report.histogram.assign(p + 1, 0);
  for (const auto& chunk : chunks) {
    for (std::size_t c = 0; c <= p; ++c) report.histogram[c] += chunk.histogram[c];
    report.count.merge(chunk.count);
  }
  const double pd = static_cast<double>(p);
  report.expected_mean = pd * report.q;
  report.expected_variance = pd * report.q * (1.0 - report.q);

  // Binomial pmf by the multiplicative recurrence in log space.
  std::vector<double> pmf(p + 1, 0.0);
  const double q = report.q;
  if (q <= 0.0) {
    pmf[0] = 1.0;
  } else if (q >= 1.0) {
    pmf[p] = 1.0;
  } else {
    for (std::size_t c = 0; c <= p; ++c) {
      const double cd = static_cast<double>(c);
      pmf[c] = std::exp(std::lgamma(pd + 1) - std::lgamma(cd + 1) - std::lgamma(pd - cd + 1) +
                        cd * std::log(q) + (pd - cd) * std::log1p(-q));
    }
  }
  // Pool neighbouring cells until each group expects at least 5 trials; a
  // short remainder joins the last group.
  const double n = static_cast<double>(trials);
  std::vector<std::pair<double, double>> groups;  // (observed, expected)
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c <= p; ++c) {
    observed += static_cast<double>(report.histogram[c]);
    expected += n * pmf[c];
    if (expected >= 5.0) {
      groups.emplace_back(observed, expected);
      observed = expected = 0.0;
    }
  }
  if (expected > 0.0 || observed > 0.0) {
    if (groups.empty()) {
      groups.emplace_back(observed, expected);
    } else {
      groups.back().first += observed;
      groups.back().second += expected;
    }
  }
  for (const auto& [o, e] : groups) {
    if (e > 0.0) report.chi_square += (o - e) * (o - e) / e;
  }
  report.degrees_of_freedom = groups.empty() ? 0 : groups.size() - 1;
  return report;
}

}  // namespace anticip
