#include "anticip/stats_closed_form.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "anticip/error.hpp"
#include "dft.hpp"
#include "summation.hpp"

namespace anticip {

namespace {

void check_period(std::size_t p) {
  if (p < 2) throw DomainError("period must be at least 2");
}

void check_n(std::size_t p, Index n) {
  if (n < 1 || n > static_cast<Index>(p)) {
    std::ostringstream msg;
    msg << "index n = " << n << " outside 1.." << p;
    throw DomainError(msg.str());
  }
}

void check_N(std::size_t p, Index N) {
  if (N < 0 || 2 * N >= static_cast<Index>(p)) {
    std::ostringstream msg;
    msg << "cut N = " << N << " outside 0 <= N < p/2 (p = " << p << ")";
    throw DomainError(msg.str());
  }
}

// p sin(pi (n - 1/2) / p), with 2n - 1 reduced modulo 4p.
double scaled_sine(std::size_t p, Index n) {
  const auto pl = static_cast<long long>(p);
  return static_cast<double>(p) * -detail::unit_phase(2 * n - 1, 2 * pl).imag();
}

}  // namespace

Complex s_kernel(std::size_t p, Index n) {
  check_period(p);
  const auto pl = static_cast<long long>(p);
  // S_n = -i exp(i pi (n - 1/2) / p) / (p sin(pi (n - 1/2) / p))
  const Complex rotation = std::conj(detail::unit_phase(2 * n - 1, 2 * pl));
  return Complex{0.0, -1.0} * rotation / scaled_sine(p, n);
}

double s_kernel_norm2(std::size_t p, Index n) {
  check_period(p);
  const double s = scaled_sine(p, n);
  return 1.0 / (s * s);
}

double t_kernel(std::size_t p, Index j) {
  check_period(p);
  return detail::floor_mod(j, static_cast<long long>(p)) == 0 ? 1.0 / static_cast<double>(p) : 0.0;
}

double pi_window(std::size_t p, Index N) {
  check_period(p);
  check_N(p, N);
  return 1.0 - 2.0 * static_cast<double>(N) / static_cast<double>(p);
}

double u_kernel(std::size_t p, Index N) {
  check_period(p);
  check_N(p, N);
  detail::CompensatedSum sum;
  for (Index n = N + 1; n <= static_cast<Index>(p) - N; ++n) sum.add(s_kernel_norm2(p, n));
  return sum.value();
}

KernelValues kernels(std::size_t p, Index n, Index N) {
  check_period(p);
  check_n(p, n);
  check_N(p, N);
  return {s_kernel(p, n), t_kernel(p, n), u_kernel(p, N), pi_window(p, N),
          1.0 - static_cast<double>(n) / static_cast<double>(p)};
}

double expected_pn(std::size_t p, Index n, const MomentTuple& m) {
  check_period(p);
  return m.variance() / static_cast<double>(p) + m.m1 * m.m1 * s_kernel_norm2(p, n);
}

double expected_pn_squared(std::size_t p, Index n, const MomentTuple& m) {
  check_period(p);
  const double P = 1.0 / static_cast<double>(p);
  const double P2 = P * P;
  const double P3 = P2 * P;
  const double S2 = s_kernel_norm2(p, n);
  const double T = t_kernel(p, 2 * n - 1);
  const double m1s = m.m1 * m.m1;
  return P3 * m.m4 + 4.0 * P2 * (S2 - P) * m.m1 * m.m3 + (T * T + 2.0 * P2 - 3.0 * P3) * m.m2 * m.m2 +
         ((2.0 * T + 4.0 * P - 12.0 * P2) * S2 + 12.0 * P3 - 4.0 * P2 - 2.0 * T * T) * m1s * m.m2 +
         (S2 * S2 + (8.0 * P2 - 2.0 * T - 4.0 * P) * S2 + T * T - 6.0 * P3 + 2.0 * P2) * m1s * m1s;
}

double var_pn(std::size_t p, Index n, const MomentTuple& m) {
  check_period(p);
  const double P = 1.0 / static_cast<double>(p);
  const double P2 = P * P;
  const double P3 = P2 * P;
  const double S2 = s_kernel_norm2(p, n);
  const double T = t_kernel(p, 2 * n - 1);
  const double m1s = m.m1 * m.m1;
  return P3 * m.m4 + 4.0 * P2 * (S2 - P) * m.m1 * m.m3 + (T * T + P2 - 3.0 * P3) * m.m2 * m.m2 +
         ((2.0 * T + 2.0 * P - 12.0 * P2) * S2 + 12.0 * P3 - 2.0 * P2 - 2.0 * T * T) * m1s * m.m2 +
         ((8.0 * P2 - 2.0 * T - 2.0 * P) * S2 + T * T - 6.0 * P3 + P2) * m1s * m1s;
}

double expected_pN(std::size_t p, Index N, const MomentTuple& m) {
  return pi_window(p, N) * m.variance() + m.m1 * m.m1 * u_kernel(p, N);
}

double var_pN(std::size_t p, Index N, const MomentTuple& m) {
  const double P = 1.0 / static_cast<double>(p);
  const double pi = pi_window(p, N);
  const double U = u_kernel(p, N);
  const double m1s = m.m1 * m.m1;
  return P * pi * pi * m.m4 + 4.0 * P * pi * (U - pi) * m.m1 * m.m3 +
         P * pi * (2.0 - 3.0 * pi) * m.m2 * m.m2 + 4.0 * P * (1.0 - 3.0 * pi) * (U - pi) * m1s * m.m2 +
         2.0 * P * (2.0 * U * (2.0 * pi - 1.0) + pi * (1.0 - 3.0 * pi)) * m1s * m1s;
}

double expected_ptot(const MomentTuple& m) { return m.m2; }

LeadingOrder expected_moment_observable(std::size_t p, double r, const MomentTuple& m) {
  check_period(p);
  if (!(r >= 0.0)) throw DomainError("moment order must be nonnegative");
  std::ostringstream order;
  order << "O(p^" << r - 1.0 << ")";
  return {std::pow(static_cast<double>(p) / 2.0, r) * m.m2 / (r + 1.0), order.str()};
}

double expected_moment_observable_exact(std::size_t p, double r, const MomentTuple& m) {
  check_period(p);
  if (!(r >= 0.0)) throw DomainError("moment order must be nonnegative");
  detail::CompensatedSum sum;
  for (Index n = 1; n <= static_cast<Index>(p); ++n) {
    const double weight = std::pow(static_cast<double>(tilde_index(n, p)), r);
    sum.add(weight * expected_pn(p, n, m));
  }
  return sum.value();
}

double continuous_expected_pn_limit(Index n, const MomentTuple& m) {
  const double omega = static_cast<double>(n) - 0.5;
  return m.m1 * m.m1 / (std::numbers::pi * std::numbers::pi * omega * omega);
}

double continuous_expected_pn(Index n, const MomentTuple& m, std::size_t cells) {
  check_period(cells);
  const double M = static_cast<double>(cells);
  const double omega = static_cast<double>(n) - 0.5;
  const double s = scaled_sine(cells, n);  // M sin(pi omega / M)
  const double factor = s * s / (std::numbers::pi * std::numbers::pi * omega * omega);
  const double periodic = m.variance() / M + m.m1 * m.m1 / (s * s);
  return factor * periodic;
}

double continuous_expected_ptot(const MomentTuple& m) { return m.m2; }

double continuous_var_ptot(const MomentTuple& m, std::size_t cells) {
  check_period(cells);
  return (m.m4 - m.m2 * m.m2) / static_cast<double>(cells);
}

double continuous_expected_pN_limit(Index N, const MomentTuple& m) {
  if (N < 0) throw DomainError("cut N must be nonnegative");
  detail::CompensatedSum inner;
  for (Index n = 1 - N; n <= N; ++n) inner.add(continuous_expected_pn_limit(n, m));
  return m.m2 - inner.value();
}

double continuous_expected_pN(Index N, const MomentTuple& m, std::size_t cells) {
  if (N < 0) throw DomainError("cut N must be nonnegative");
  detail::CompensatedSum inner;
  for (Index n = 1 - N; n <= N; ++n) inner.add(continuous_expected_pn(n, m, cells));
  return m.m2 - inner.value();
}

}  // namespace anticip
