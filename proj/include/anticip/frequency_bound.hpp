#pragma once

// Measure-level checks of the mean absolute energy deviation <|H - l0|>,
// its median minimizer, the autocorrelation lower bound and the frequency
// bound of orthogonal evolutions (standard scale, T / hbar = 1).

#include <complex>
#include <cstddef>
#include <vector>

#include "anticip/measure.hpp"
#include "anticip/rng.hpp"

namespace anticip {

// sum_j w_j |lambda_j - lambda0|
double abs_moment(const DiscreteMeasure& m, double lambda0);

struct MedianMinimizer {
  double location = 0.0;  // midpoint of the weighted-median interval
  double minimum = 0.0;   // abs_moment at `location`
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

MedianMinimizer median_minimizer(const DiscreteMeasure& m);

// sum_j w_j exp(-i lambda_j t)
std::complex<double> autocorrelation(const DiscreteMeasure& m, double t);

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 2.0;
  double step = 1e-3;
};

struct BoundReport {
  std::size_t period = 0;
  double median = 0.0;
  double min_abs_moment = 0.0;
  // min over the grid of Re(exp(i l0 t) mu^(t)) - (1 - t <|H - l0|>) at l0 = median,
  // and of Re mu^(t) - (1 - t <|H|>) at l0 = 0.
  double autocorrelation_slack_median = 0.0;
  double autocorrelation_slack_origin = 0.0;
  double worst_time = 0.0;
  // T = 1 >= 1 / min <|H - l0|>
  double passage_time_slack = 0.0;
  // min <|H - l0|> - pi / 2
  double frequency_slack = 0.0;
  // max over n = 0..2p of |mu^(n) - delta_{n mod p}|
  double orthogonality_error = 0.0;

  bool autocorrelation_holds(double tol = 1e-12) const {
    return autocorrelation_slack_median >= -tol && autocorrelation_slack_origin >= -tol;
  }
  bool frequency_bound_holds(double tol = 1e-9) const { return frequency_slack >= -tol; }
};

// Throws ConstraintViolation if the reduction of m modulo 2 pi is not uniform
// on {2 pi k / p}.
BoundReport check_bounds(const DiscreteMeasure& m, std::size_t p, const TimeGrid& grid = {});

// Random kappa-cut profiles: residue class k gets a base shift drawn
// uniformly from [-max_offset, max_offset] and spreads its mass 1/p over
// `spread` consecutive shifts with uniform-simplex weights. With spread = 2
// the induced yhat_k is uniform on [-1, 1]; with spread = 1 it is +-1.
struct ShiftLaw {
  int max_offset = 2;
  int spread = 2;
};

// Weight c_k(n) / p at lambda = 2 pi (n + k / p).
DiscreteMeasure build_orthogonal_measure(std::size_t p, const ShiftLaw& law, CounterRng& rng);

// Mass 1/p at each of the p lattice points 2 pi j / p in [-pi, pi): the
// minimizer of <|H|> among period-p orthogonal evolutions.
DiscreteMeasure evenly_spread_measure(std::size_t p);

}  // namespace anticip
