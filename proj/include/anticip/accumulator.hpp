#pragma once

#include <cstdint>

namespace anticip {

// Streaming mean and central moments up to order four. Updates and merges
// use the pairwise formulas of Chan et al. / Pebay, so partial accumulators
// built over disjoint trial ranges combine into the single-pass result.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Unbiased sample variance (n - 1 denominator); 0 for fewer than 2 values.
  double variance() const;
  // sqrt(variance / n)
  double standard_error() const;
  // Large-sample standard error of the sample variance,
  // sqrt((m4 - (n - 3) / (n - 1) s^4) / n) with m4 the fourth central moment.
  double variance_standard_error() const;

  double central_moment2() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }
  double central_moment4() const { return n_ ? m4_ / static_cast<double>(n_) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

}  // namespace anticip
