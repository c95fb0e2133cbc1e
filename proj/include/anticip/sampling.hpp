#pragma once

// Monte Carlo over i.i.d. normalized spectral differences. Trial t of a run
// with seed s draws its components from CounterRng(s, t), and trials are
// processed in fixed chunks merged in chunk order, so a report depends only
// on (config, seed) and never on the thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anticip/accumulator.hpp"
#include "anticip/distribution.hpp"
#include "anticip/rng.hpp"
#include "anticip/spectral_core.hpp"

namespace anticip {

enum class Geometry { kPeriodic, kContinuous };

inline constexpr std::uint64_t kTrialsPerChunk = 1024;

// Explicit request wins; 0 falls back to ANTICIP_THREADS, then to the
// hardware concurrency.
unsigned resolve_threads(unsigned requested);

// size draws of the law from the given stream.
std::vector<double> sample_spectral_difference(const SamplingDistribution& dist, std::size_t size,
                                               CounterRng& rng);
PeriodicSpectralDifference sample_periodic(const SamplingDistribution& dist, std::size_t p,
                                           CounterRng& rng);
ContinuousSpectralDifference sample_continuous(const SamplingDistribution& dist, std::size_t cells,
                                               CounterRng& rng);

// Writes the per-trial values of every tracked statistic into `out`. One
// observer instance is created per worker, so it may keep scratch state.
using TrialObserver = std::function<void(std::span<const double> yhat, std::span<double> out)>;
using ObserverFactory = std::function<TrialObserver()>;

struct TrialRange {
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;
  std::uint64_t trials = 0;
  unsigned threads = 0;
};

// Runs trials first_trial .. first_trial + trials - 1 and returns one
// accumulator per statistic.
std::vector<MomentAccumulator> run_trials(const SamplingDistribution& dist, std::size_t size,
                                          const TrialRange& range, std::size_t statistics,
                                          const ObserverFactory& factory);

struct MonteCarloConfig {
  Geometry geometry = Geometry::kPeriodic;
  std::size_t size = 64;  // period p or number of cells M
  SamplingDistribution distribution = SamplingDistribution::uniform();
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;
  std::vector<Index> n_list;
  std::vector<Index> N_list;
  std::vector<double> r_list;  // periodic only
  std::optional<double> epsilon;
  unsigned threads = 0;

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct Estimate {
  std::string statistic;  // "p_n", "p_N", "p_tot", "moment", "near_zero_count"
  double parameter = 0.0;  // n, N, r or epsilon; 0 for p_tot
  MomentAccumulator acc;
  std::optional<double> expected_mean;
  std::optional<double> expected_variance;

  std::optional<double> z_mean() const;
  std::optional<double> z_variance() const;
};

struct EstimateReport {
  std::vector<Estimate> estimates;
  // Statistic-wise accumulator merge; both reports must track the same list.
  void merge(const EstimateReport& other);
  // Largest |z| over every available pairing (0 if none).
  double max_abs_z() const;
};

// (mean - expected) / se, with z = 0 when the difference is at rounding level
// and an infinite z when se = 0 but the values differ.
double z_score(double value, double expected, double standard_error);

EstimateReport run_monte_carlo(const MonteCarloConfig& config);

struct NearZeroReport {
  std::size_t period = 0;
  double epsilon = 0.0;
  double q = 0.0;  // P(|yhat| < epsilon)
  std::vector<std::uint64_t> histogram;  // trials with count c, c = 0..p
  MomentAccumulator count;
  double expected_mean = 0.0;      // p q
  double expected_variance = 0.0;  // p q (1 - q)
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;  // after pooling cells with expectation < 5

  double z_mean() const;
  double z_variance() const;
};

// Count of |yhat_k| < epsilon per trial against Binomial(p, q).
NearZeroReport near_zero_statistics(const SamplingDistribution& dist, std::size_t p,
                                    double epsilon, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 0);

}  // namespace anticip
