#pragma once

#include "stirling/borel.hpp"
#include "stirling/mb.hpp"

#include <variant>
#include <vector>

namespace stirling {

enum class eval_method { automatic, borel, incgamma, mb, reference };

// One evaluation with its full term decomposition.  `totals` keeps the raw
// per-form values (two for overlapping convergence domains); `total` is the
// canonical one reported downstream.
struct eval_breakdown {
    eval_method method = eval_method::borel;
    std::variant<std::monostate, borel_terms, std::vector<mb_terms>> terms;
    hp_complex total;
    std::vector<hp_complex> totals;
    hp_real tail_bound;
    long precision_used = 0;
    long N = 0;
    long limit = 0;
};

// ln Gamma of the principal value w = z^p by Binet's second integral after an
// upward shift, with reflection bookkeeping on the negative real axis.  Shares
// nothing with the two regularization engines beyond scalar primitives.
hp_complex ln_gamma_reference(const polar_arg& z, const precision_policy& pol);

// Same oracle on an explicit off-axis value (Im w != 0 or Re w > 0).
hp_complex ln_gamma_reference_value(const hp_complex& w, const precision_policy& pol);

// Method dispatch with a cancellation-aware working precision.  On a
// half-integer phase line the MB forms coincide at the midpoint of the two
// one-sided limits; that midpoint is the canonical total.
eval_breakdown evaluate(const polar_arg& z, long N, eval_method method,
                        const precision_policy& pol);

// Digamma breakdown in the same shape.
eval_breakdown digamma(const polar_arg& z, long N, const precision_policy& pol);

// Centered reference quotient (ln Gamma(w+h) - ln Gamma(w-h)) / 2h.
hp_complex digamma_finite_difference(const polar_arg& z, const mpq_class& h,
                                     const precision_policy& pol);

// round(pi |z^p|), clamped to 1; `no_optimum` marks a sub-unit estimate where
// the series has no smallest term.
struct n_opt {
    long N = 1;
    bool no_optimum = false;
};
n_opt n_opt_estimate(const mpq_class& modulus_effective);

// One probe of the step-function experiment at theta = (1/2 + delta) pi.
struct stokes_step_record {
    mpq_class delta;
    hp_complex sector_total;     // the form dispatch picks for this side
    hp_complex reference;
    hp_real step_error;          // |sector_total - reference|
    hp_real smoothing_factor;    // erf multiplier candidate at this phase
    hp_complex smoothed_total;   // discontinuity term weighted by that factor
    hp_real smoothing_error;     // |smoothed_total - reference|
    bool step_matches = false;
};

// Evaluates both candidate rules on either side of the positive imaginary
// axis: the step dispatch (full discontinuity term above, none below) and the
// erf-weighted smoothing.  delta = 0 is the line itself and is rejected.
std::vector<stokes_step_record> stokes_step_experiment(const mpq_class& modz,
                                                       const std::vector<mpq_class>& deltas,
                                                       long N, const precision_policy& pol);

// Partial sum of the reciprocal-logarithm series for Euler's constant,
// sum_{k=1}^{K} (-1)^{k+1} A_k / k.  Exact until the final rounding.
hp_real hurst_gamma_partial(long K, long digits);

// Extrapolation of those partial sums against the scale K^-i (ln K)^-j; the
// slow 1/(K ln^2 K) tail needs it to reach double-digit accuracy.
hp_real hurst_gamma_accelerated(long K, long digits);

}  // namespace stirling
