#pragma once

#include "stirling/precision.hpp"
#include "stirling/sector.hpp"

#include <utility>
#include <vector>

namespace stirling {

// One Mellin-Barnes decomposition of ln Gamma(z^p) on the domain index M.
// total() = F + TS + mb_integral + s_mb.
struct mb_terms {
    hp_complex F;
    hp_complex TS;
    hp_complex mb_integral;
    hp_complex s_mb;
    long M = 0;           // signed domain index: (M-1)pi < p*theta < (M+1)pi
    mpq_class c;          // contour abscissa, Max(N-1, 1/2) < c < N
    bool line_valued = false;
    hp_real quad_error;   // absolute error estimate of mb_integral

    hp_complex total() const;
};

// Stabilized contour integrand at s: (2pi|z^p|)^{-2s} zeta(2s) Gamma(2s-1)
// e^{i 2(M - p theta/pi) pi s} / (e^{-i pi s} - e^{i pi s}), the exponentials fused
// so the value decays along both half-contours.  Requires Re 2s > 1.
hp_complex mb_integrand(const polar_arg& z, const hp_complex& s, long M, long digits);

// -2 z^p times the integral of mb_integrand over the vertical line Re s = c.
// c = 0 selects the default abscissa N - 1/4.  Replaces the Borel n-sum entirely.
hp_complex mb_remainder(const polar_arg& z, long N, long M, const precision_policy& pol,
                        const mpq_class& c = mpq_class(0), hp_real* err_out = nullptr);

// Correction term S_MB(M, z^p).  Off the half-integer lines:
//   sgn(M) floor(|M|/2) ln(-e^{-2 i pi w}) - [M odd] ln(1 - e^{sgn(M) 2 i pi w}).
// On a line the real closed forms apply; lc must match mb_line_case(z, M).
// S_MB(0, w) = 0 everywhere.
hp_complex s_mb(const polar_arg& z, long M, line_case lc, long digits);

// Every admissible decomposition (one on axes, two elsewhere), primary index first.
// Entries on a discontinuity line carry the line-case S_MB and line_valued = true.
std::vector<mb_terms> ln_gamma_mb(const polar_arg& z, long N, const precision_policy& pol);

// Independent check of the Mellin pair behind the contour representation:
//   lhs = integral_0^inf z^{s-3/2} ln(1/(1 - e^{-sqrt z})) dz   (by quadrature)
//   rhs = 2 zeta(2s) Gamma(2s-1)
// for Re s > 1/2.  Returns {lhs, rhs}.
std::pair<hp_complex, hp_complex> mellin_pair_check(const hp_complex& s,
                                                    const precision_policy& pol);

}  // namespace stirling
