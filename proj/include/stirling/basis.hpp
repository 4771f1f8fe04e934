#pragma once

#include "stirling/precision.hpp"

namespace stirling {

// Exact Bernoulli number B_k (B_1 = -1/2 convention).  Memoized, thread-safe.
mpq_class bernoulli(unsigned long k);

// Cosecant-expansion coefficient c_k(1) = (-1)^k 2^{2k} B_{2k} / (2k)!, k >= 1.  Exact.
mpq_class cosecant_one(unsigned long k);

// Reciprocal-logarithm coefficient A_k: A_0 = 1,
// A_k = sum_{j=0}^{k-1} (-1)^{k-j+1} A_j / (k-j+1).  Exact, memoized.
mpq_class reciprocal_log(unsigned long k);

// Riemann zeta by Euler-Maclaurin for Re s > 1/2.  Throws pole_at_one near s = 1.
hp_complex zeta_complex(const hp_complex& s, long digits);

// log Gamma by shifted Bernoulli asymptotics; requires Re v > 0.
hp_complex ln_gamma_asymptotic(const hp_complex& v, long digits, long shift_floor = 0);

// Gamma(s) anywhere off the non-positive integers (reflection on the left half-plane).
hp_complex gamma_complex(const hp_complex& s, long digits);

// Upper incomplete gamma.  Continued fraction for large |x|, E1-anchored recurrence for
// integer a at small |x|, Gamma(a) minus the lower series otherwise.
hp_complex upper_incomplete_gamma(const hp_complex& a, const hp_complex& x, long digits);

// e^x Gamma(a, x): the scaled form every assembly uses; no exponential ever materializes
// on the continued-fraction route.
hp_complex scaled_upper_gamma(const hp_complex& a, const hp_complex& x, long digits);

// Euler's constant via 1/2 + int_0^inf e^{-y} (coth(y/2)/2 - 1/y) dy.
hp_real euler_gamma_integral(long digits);

// Smoothing-multiplier candidate on a Stokes crossing:
//   S+/- = 1/2 +/- (1/2) erf((theta -/+ pi/2) sqrt(pi |z|)),  theta = theta_over_pi * pi.
hp_real erf_multiplier(const mpq_class& theta_over_pi, const hp_real& modz, int sign);

}  // namespace stirling
