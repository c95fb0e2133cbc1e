#pragma once

// Closed-form anticipation statistics under i.i.d. sampling of the
// normalized spectral difference with raw moments m1..m4.
//
// Kernels for period p, index n (1 <= n <= p) and cut N (0 <= N < p/2):
//   S_n    = p^-1 sum_k exp(-2 pi i (n - 1/2) k / p)
//   T_j    = p^-1 if j = 0 mod p, else 0
//   U_N    = sum_{n = N+1}^{p-N} |S_n|^2
//   pi_N   = 1 - 2N / p
//   pi'_n  = 1 - n / p
// The variance formulas are transcribed term by term; they are checked
// against Monte Carlo and an exact quadratic-form computation in the tests.

#include <complex>
#include <cstddef>
#include <string>

#include "anticip/moments.hpp"
#include "anticip/spectral_core.hpp"

namespace anticip {

struct KernelValues {
  Complex S;        // S_n
  double T = 0.0;   // T_n
  double U = 0.0;   // U_N
  double pi_N = 0.0;
  double pi_prime = 0.0;  // pi'_n
};

// Throws DomainError unless 1 <= n <= p and 0 <= N < p/2.
KernelValues kernels(std::size_t p, Index n, Index N);

Complex s_kernel(std::size_t p, Index n);
double s_kernel_norm2(std::size_t p, Index n);  // |S_n|^2
double t_kernel(std::size_t p, Index j);
double u_kernel(std::size_t p, Index N);
double pi_window(std::size_t p, Index N);

// E(p_n) = p^-1 sigma^2 + m1^2 |S_n|^2
double expected_pn(std::size_t p, Index n, const MomentTuple& m);
double expected_pn_squared(std::size_t p, Index n, const MomentTuple& m);
double var_pn(std::size_t p, Index n, const MomentTuple& m);

// E(p_N) = pi_N sigma^2 + m1^2 U_N
double expected_pN(std::size_t p, Index N, const MomentTuple& m);
double var_pN(std::size_t p, Index N, const MomentTuple& m);

// E(p_tot) = m2
double expected_ptot(const MomentTuple& m);

struct LeadingOrder {
  double value = 0.0;
  std::string error_order;  // order of the neglected term, e.g. "O(p^0)"
};

// (p/2)^r m2 / (r + 1), the leading-order value of E(<tilde_n^r>).
LeadingOrder expected_moment_observable(std::size_t p, double r, const MomentTuple& m);

// sum_{n=1}^{p} tilde_n^r E(p_n), the finite-p value.
double expected_moment_observable_exact(std::size_t p, double r, const MomentTuple& m);

// Continuous spectrum. `_limit` functions return the M -> infinity values;
// the others evaluate a piecewise-constant law on M cells, where cells play
// the role of residue classes and each p_n picks up the cell-integration
// factor M^2 sin^2(pi (n - 1/2) / M) / (pi (n - 1/2))^2.
double continuous_expected_pn_limit(Index n, const MomentTuple& m);
double continuous_expected_pn(Index n, const MomentTuple& m, std::size_t cells);
double continuous_expected_ptot(const MomentTuple& m);
double continuous_var_ptot(const MomentTuple& m, std::size_t cells);
double continuous_expected_pN_limit(Index N, const MomentTuple& m);
double continuous_expected_pN(Index N, const MomentTuple& m, std::size_t cells);
inline double continuous_var_pN_limit() { return 0.0; }

}  // namespace anticip
