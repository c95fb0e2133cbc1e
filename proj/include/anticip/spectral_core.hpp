#pragma once

// Spectral-difference representations of orthogonal evolutions and the
// anticipation amplitudes, probabilities and observables derived from them.
//
// Index conventions:
//   periodic:   alpha_n = p^-1 sum_k yhat_k exp(-2 pi i (n - 1/2) k / p), n = 1..p
//   continuous: alpha_n = int yhat(kappa) exp(-i (n - 1/2) kappa) dkappa / (2 pi)
// where yhat is the normalized difference (p * y_k, resp. 2 pi * y_kappa), so
// that every admissible yhat lies in [-1, 1].

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "anticip/measure.hpp"

namespace anticip {

using Complex = std::complex<double>;
using Index = std::int64_t;

// Normalized spectral difference of a period-p evolution.
class PeriodicSpectralDifference {
 public:
  // Throws std::invalid_argument if p < 2 or some |yhat_k| > 1.
  explicit PeriodicSpectralDifference(std::vector<double> values);

  std::size_t period() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  std::vector<double> values_;
};

// Piecewise-constant normalized spectral difference on M equal cells of
// [0, 2 pi); cell j covers [2 pi j / M, 2 pi (j + 1) / M).
class ContinuousSpectralDifference {
 public:
  // Throws std::invalid_argument if M < 2 or some |yhat_j| > 1.
  explicit ContinuousSpectralDifference(std::vector<double> values);

  std::size_t cells() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

 private:
  std::vector<double> values_;
};

// Amplitudes alpha_n for n = first_index .. first_index + size - 1.
// `period` is set for periodic evolutions (alpha_{n+p} = alpha_n).
struct AmplitudeSeries {
  Index first_index = 1;
  std::vector<Complex> amplitudes;
  std::optional<std::size_t> period;

  Index last_index() const { return first_index + static_cast<Index>(amplitudes.size()) - 1; }
  // Periodic series resolve any n by periodicity; continuous series throw
  // DomainError outside the window.
  Complex at(Index n) const;
};

struct ProbabilitySeries {
  Index first_index = 1;
  std::vector<double> probabilities;
  std::optional<std::size_t> period;
  double total = 0.0;  // p_tot over the stored window

  Index last_index() const { return first_index + static_cast<Index>(probabilities.size()) - 1; }
  double at(Index n) const;
};

enum class TransformMode { kExactSum, kFast };

// Half-integer frequency transform for a fixed length: premultiplies by the
// half-step phase exp(i pi k / p) and applies a standard length-p DFT. Owns
// scratch buffers, so one instance must not be shared between threads.
class HalfIntegerTransform {
 public:
  explicit HalfIntegerTransform(std::size_t length);
  ~HalfIntegerTransform();
  HalfIntegerTransform(HalfIntegerTransform&&) noexcept;
  HalfIntegerTransform& operator=(HalfIntegerTransform&&) noexcept;

  std::size_t length() const;

  // out[j] = sum_k values[k] exp(-2 pi i (j - 1/2) k / p) for j = 0..p-1
  // (unnormalized; index j stands for every n = j mod p).
  void apply(std::span<const double> values, std::span<Complex> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// alpha_n for n = 1..p.
AmplitudeSeries amplitudes(const PeriodicSpectralDifference& sd,
                           TransformMode mode = TransformMode::kFast);

// alpha_n for n = n_min..n_max, integrated exactly per cell.
AmplitudeSeries amplitudes(const ContinuousSpectralDifference& sd, Index n_min, Index n_max,
                           TransformMode mode = TransformMode::kFast);

ProbabilitySeries probabilities(const AmplitudeSeries& amps);

// p_N: periodic sum over n = N+1 .. p-N (requires 0 <= N < p/2 and a series
// covering a full period); continuous sum over n >= N+1 and n <= -N inside
// the stored window. Throws DomainError on out-of-range N.
double cumulative_probability(const ProbabilitySeries& probs, Index N);

// Folded distance of step n within a period; nullopt means p = infinity.
Index tilde_index(Index n, std::optional<std::size_t> period);

struct MomentObservable {
  double value = 0.0;
  // Continuous series only: the partial sums did not settle between half
  // and full window (relative increment above 1e-3).
  bool divergent = false;
};

// <tilde_n^r> = sum tilde_n^r p_n over the series window.
MomentObservable moment_observable(const ProbabilitySeries& probs, double r);

// Continuous p_tot summed over all n in closed form (each residue class mod
// M sums to pi^2 / sin^2), i.e. without truncation.
double total_probability(const ContinuousSpectralDifference& sd);

// Continuous p_N without truncation: p_tot minus the 2N central terms.
double tail_probability(const ContinuousSpectralDifference& sd, Index N);

// Upper bound on sum of p_n over n outside [n_min, n_max]; requires
// n_min <= 0 < n_max.
double truncation_tail_bound(const ContinuousSpectralDifference& sd, Index n_min, Index n_max);

struct Truncation {
  Index n_max = 0;  // window is [1 - n_max, n_max]
  double tail_bound = 0.0;
};

// Smallest symmetric window whose tail bound is below `target`, capped at
// `max_n`; the returned bound may exceed the target when the cap is hit.
Truncation default_truncation(const ContinuousSpectralDifference& sd, double target = 1e-6,
                              Index max_n = Index{1} << 22);

// yhat_k = p (even-shift mass - odd-shift mass) of residue class k. Throws
// ConstraintViolation if the reduction modulo 2 pi deviates from 1/p on
// {2 pi k / p} by more than `tol`, or mass lies off that lattice.
PeriodicSpectralDifference spectral_difference_from_measure(const DiscreteMeasure& m,
                                                            std::size_t p, double tol = 1e-9);

}  // namespace anticip
