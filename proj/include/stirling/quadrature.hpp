#pragma once

#include "stirling/precision.hpp"

#include <functional>
#include <vector>

namespace stirling {

// Ascending finite breakpoints; a mapped [last, inf) panel is appended when tail is set.
struct panel_scheme {
    std::vector<hp_real> points;
    bool tail = true;

    // {0, 1/2, 1, 2, 5, 10, 100, 1000} + tail.
    static panel_scheme standard(long digits);
    // Standard scheme with extra interior breakpoints merged in (duplicates dropped).
    static panel_scheme with_points(long digits, const std::vector<hp_real>& extra);
};

struct quad_options {
    long digits = 40;
    long tol_exp10 = -50;  // absolute tolerance 10^tol_exp10 for the whole integral
    int min_level = 3;
    int max_level = 13;
};

using real_fn = std::function<hp_real(const hp_real&)>;
using complex_fn = std::function<hp_complex(const hp_real&)>;
using contour_fn = std::function<hp_complex(const hp_complex&)>;

// Tanh-sinh panel-by-panel integration over the scheme.  The integrand must be analytic on
// each open panel and decay exponentially on the tail.  Throws non_convergence when a panel
// fails to settle by max_level, divergent_tail when the tail probe grows.
hp_real integrate(const real_fn& f, const panel_scheme& ps, const quad_options& opt,
                  hp_real* err_out = nullptr);
hp_complex integrate(const complex_fn& f, const panel_scheme& ps, const quad_options& opt,
                     hp_real* err_out = nullptr);

// Cauchy principal value for an integrand with one interior simple pole at y = pole.
// Mirrored nodes on (pole-h, pole+h) cancel the pole; a breakpoint landing on the pole is
// nudged (the breakpoint moves, the singularity does not).
hp_real integrate_principal_value(const real_fn& f, const hp_real& pole, const panel_scheme& ps,
                                  const quad_options& opt, hp_real* err_out = nullptr);
hp_complex integrate_principal_value(const complex_fn& f, const hp_real& pole,
                                     const panel_scheme& ps, const quad_options& opt,
                                     hp_real* err_out = nullptr);

// Hadamard finite part for a double pole: the full integrand is phi(y)/(y-pole)^2 and phi
// is supplied separately so the excised zone can subtract phi(pole).
hp_real integrate_finite_part(const real_fn& phi, const hp_real& pole, const panel_scheme& ps,
                              const quad_options& opt);
hp_complex integrate_finite_part(const complex_fn& phi, const hp_real& pole,
                                 const panel_scheme& ps, const quad_options& opt);

// Contour integral over the vertical line Re s = c:
//   i * int_0^inf g(c+it) dt + i * int_0^inf g(c-it) dt.
// t runs over the scheme (interpreted as breakpoints in t).  Throws divergent_tail if the
// integrand fails to decay along either half.
hp_complex integrate_vertical_line(const contour_fn& g, const hp_real& c, const panel_scheme& ps,
                                   const quad_options& opt, hp_real* err_out = nullptr);

}  // namespace stirling
