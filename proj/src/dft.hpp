#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace anticip::detail {

// Forward DFT X_j = sum_k x_k exp(-2 pi i j k / n) for any n >= 1.
// Powers of two use an iterative radix-2 kernel; other lengths go through
// Bluestein's chirp-z convolution on a padded power-of-two grid.
class Dft {
 public:
  explicit Dft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<std::complex<double>> data);

 private:
  void radix2(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::size_t padded_;  // == n_ for powers of two
  std::vector<std::complex<double>> twiddles_;  // length padded_ / 2
  std::vector<std::size_t> bitrev_;
  // Bluestein only.
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> chirp_spectrum_;
  std::vector<std::complex<double>> work_;
};

// exp(-i pi num / den) with num reduced exactly modulo 2 den.
std::complex<double> unit_phase(long long num, long long den);

}  // namespace anticip::detail
