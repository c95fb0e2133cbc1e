#include "anticip/accumulator.hpp"

#include <algorithm>
#include <cmath>

namespace anticip {

void MomentAccumulator::add(double x) {
  MomentAccumulator single;
  single.n_ = 1;
  single.mean_ = x;
  merge(single);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double d_n = delta / n;
  const double d2 = delta * delta;

  const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + other.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                    3.0 * d_n * (na * other.m2_ - nb * m2_);
  const double m4 = m4_ + other.m4_ +
                    d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * d_n * (na * other.m3_ - nb * m3_);

  mean_ += d_n * nb;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += other.n_;
}

double MomentAccumulator::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MomentAccumulator::standard_error() const {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double MomentAccumulator::variance_standard_error() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double s2 = variance();
  const double spread = central_moment4() - (n - 3.0) / (n - 1.0) * s2 * s2;
  return std::sqrt(std::max(spread, 0.0) / n);
}

}  // namespace anticip
