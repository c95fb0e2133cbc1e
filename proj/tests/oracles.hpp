#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's transform or closed-form code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using C = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// alpha_n = p^-1 sum_k yhat_k exp(-2 pi i (n - 1/2) k / p), long double phases.
inline C periodic_amplitude(const std::vector<double>& yhat, long long n) {
  const auto p = static_cast<long double>(yhat.size());
  std::complex<long double> acc = 0;
  for (std::size_t k = 0; k < yhat.size(); ++k) {
    const long double angle = -2.0L * std::numbers::pi_v<long double> *
                              (static_cast<long double>(n) - 0.5L) * static_cast<long double>(k) / p;
    acc += static_cast<long double>(yhat[k]) * std::polar(1.0L, angle);
  }
  acc /= p;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// alpha_n = (2 pi)^-1 sum_j yhat_j int_{a_j}^{b_j} exp(-i w kappa) dkappa,
// with the antiderivative evaluated at both cell edges.
inline C continuous_amplitude(const std::vector<double>& yhat, long long n) {
  const long double w = static_cast<long double>(n) - 0.5L;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const auto m = static_cast<long double>(yhat.size());
  std::complex<long double> acc = 0;
  const std::complex<long double> i_w(0.0L, w);
  for (std::size_t j = 0; j < yhat.size(); ++j) {
    const long double a = two_pi * static_cast<long double>(j) / m;
    const long double b = two_pi * static_cast<long double>(j + 1) / m;
    acc += static_cast<long double>(yhat[j]) *
           (std::polar(1.0L, -w * a) - std::polar(1.0L, -w * b)) / i_w;
  }
  acc /= two_pi;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// Law of one component: finitely many atoms.
struct Atoms {
  std::vector<double> values;
  std::vector<double> probs;

  double moment(int k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += probs[i] * std::pow(values[i], k);
    return s;
  }
};

// Exact E(f) and Var(f) by enumerating every outcome of p i.i.d. components.
template <typename F>
std::pair<double, double> enumerate(const Atoms& law, std::size_t p, F&& f) {
  const std::size_t a = law.values.size();
  std::vector<std::size_t> digits(p, 0);
  std::vector<double> yhat(p);
  long double mean = 0.0L;
  long double second = 0.0L;
  while (true) {
    long double prob = 1.0L;
    for (std::size_t k = 0; k < p; ++k) {
      yhat[k] = law.values[digits[k]];
      prob *= law.probs[digits[k]];
    }
    const long double v = f(yhat);
    mean += prob * v;
    second += prob * v * v;
    std::size_t k = 0;
    while (k < p && ++digits[k] == a) digits[k++] = 0;
    if (k == p) break;
  }
  return {static_cast<double>(mean), static_cast<double>(second - mean * mean)};
}

// Var(y^T B y) for i.i.d. y with mean mu, variance s2, central moments c3, c4
// and symmetric B (row-major p x p).
inline double quadratic_form_variance(const std::vector<double>& B, std::size_t p, double mu,
                                      double s2, double c3, double c4) {
  double bb = 0.0, diag2 = 0.0, trace_b2 = 0.0, cross = 0.0;
  std::vector<double> b(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      b[i] += B[i * p + j];
      trace_b2 += B[i * p + j] * B[j * p + i];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    bb += b[i] * b[i];
    diag2 += B[i * p + i] * B[i * p + i];
    cross += b[i] * B[i * p + i];
  }
  return 4 * mu * mu * s2 * bb + (c4 - 3 * s2 * s2) * diag2 + 2 * s2 * s2 * trace_b2 +
         4 * mu * c3 * cross;
}

// B with y^T B y = sum_{n in window} |alpha_n|^2.
inline std::vector<double> window_matrix(std::size_t p, const std::vector<long long>& window) {
  std::vector<double> B(p * p, 0.0);
  const double pd = static_cast<double>(p);
  for (long long n : window) {
    const double theta = 2 * kPi * (static_cast<double>(n) - 0.5) / pd;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        B[j * p + k] += std::cos(theta * (static_cast<double>(j) - static_cast<double>(k))) / (pd * pd);
      }
    }
  }
  return B;
}

}  // namespace oracle
