#include "dft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anticip::detail {

std::complex<double> unit_phase(long long num, long long den) {
  const long long period = 2 * den;
  long long r = num % period;
  if (r < 0) r += period;
  const double angle = std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), -std::sin(angle)};
}

Dft::Dft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("Dft: length must be positive");
  padded_ = std::has_single_bit(n) ? n : std::bit_ceil(2 * n - 1);

  twiddles_.resize(padded_ / 2);
  for (std::size_t k = 0; k < twiddles_.size(); ++k) {
    twiddles_[k] = unit_phase(static_cast<long long>(2 * k), static_cast<long long>(padded_));
  }
  bitrev_.resize(padded_);
  const int bits = std::countr_zero(padded_);
  for (std::size_t i = 0; i < padded_; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }

  if (padded_ != n_) {
    // chirp_k = exp(-i pi k^2 / n); k^2 is reduced modulo 2n before scaling.
    chirp_.resize(n_);
    const auto nn = static_cast<long long>(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto kk = static_cast<long long>(k);
      chirp_[k] = unit_phase((kk * kk) % (2 * nn), nn);
    }
    chirp_spectrum_.assign(padded_, {0.0, 0.0});
    chirp_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      chirp_spectrum_[k] = std::conj(chirp_[k]);
      chirp_spectrum_[padded_ - k] = std::conj(chirp_[k]);
    }
    radix2(chirp_spectrum_, false);
    work_.resize(padded_);
  }
}

void Dft::radix2(std::span<std::complex<double>> data, bool inverse) const {
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        auto w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const auto t = w * data[start + k + half];
        data[start + k + half] = data[start + k] - t;
        data[start + k] += t;
      }
    }
  }
}

void Dft::forward(std::span<std::complex<double>> data) {
  if (data.size() != n_) throw std::invalid_argument("Dft: buffer length mismatch");
  if (padded_ == n_) {
    radix2(data, false);
    return;
  }
  std::fill(work_.begin(), work_.end(), std::complex<double>{0.0, 0.0});
  for (std::size_t k = 0; k < n_; ++k) work_[k] = data[k] * chirp_[k];
  radix2(work_, false);
  for (std::size_t k = 0; k < padded_; ++k) work_[k] *= chirp_spectrum_[k];
  radix2(work_, true);
  const double scale = 1.0 / static_cast<double>(padded_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work_[k] * scale * chirp_[k];
}

}  // namespace anticip::detail
