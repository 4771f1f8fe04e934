#pragma once

#include "stirling/precision.hpp"
#include "stirling/sector.hpp"

namespace stirling {

enum class borel_route { automatic, quadrature, incomplete_gamma };

struct borel_terms {
    hp_complex F;
    hp_complex TS;
    hp_complex remainder;
    hp_complex SD;
    long N = 0;
    long limit = 0;
    hp_real tail_bound;  // bound on the dropped n > limit tail of the remainder sum

    hp_complex total() const { return F + TS + remainder + SD; }
};

// Leading terms (w - 1/2) ln w - w + ln(2 pi)/2 on the principal value w = z^p.
hp_complex stirling_F(const polar_arg& z, long digits);

// Truncated asymptotic series sum_{k=1}^{N-1} B_2k / (2k (2k-1) w^{2k-1}).
hp_complex truncated_sum(const polar_arg& z, long N, long digits);

// Same sum with each zeta(2k) replaced by its partial sum through `limit`.
// Satisfies the exact same-cutoff collapse: partial TS_N + R_N = R_1.
hp_complex truncated_sum_partial(const polar_arg& z, long N, long limit, long digits);

// Regularized remainder as the n-summed Borel integral, off the Stokes lines.
hp_complex remainder_sector_quad(const polar_arg& z, long N, const precision_policy& pol,
                                 hp_real* tail_bound = nullptr);

// Same series with each integral in closed incomplete-gamma form; restricted
// to the primary sector |p theta| < pi/2.
hp_complex remainder_sector_incgamma(const polar_arg& z, long N, const precision_policy& pol,
                                     hp_real* tail_bound = nullptr);

// Principal-value remainder on the Stokes lines |p theta| = (M+1/2) pi.
hp_complex remainder_line(const polar_arg& z, long N, const precision_policy& pol,
                          hp_real* tail_bound = nullptr);

// Stokes discontinuity term for sector M with the given rotation sense.
hp_complex sd_sector(const polar_arg& z, long M, int sign, long digits);

// Stokes discontinuity term on a line; purely real.
hp_complex sd_line(const polar_arg& z, long M, long digits);

// Full breakdown: classification, remainder route selection, SD term.
borel_terms ln_gamma_borel(const polar_arg& z, long N, const precision_policy& pol,
                           borel_route route = borel_route::automatic);

// Closed form of the N = 1 remainder: (1/2) int_0^inf y^-1 e^-y (coth(y/2w) - 2w/y) dy,
// with the principal-value cot analogue on the lines.
hp_complex remainder_coth_check(const polar_arg& z, const precision_policy& pol);

// Digamma breakdown with the same field layout: F holds ln w - 1/(2w), TS the
// derivative series, remainder and SD their line/sector forms.
borel_terms digamma_borel(const polar_arg& z, long N, const precision_policy& pol);

}  // namespace stirling
