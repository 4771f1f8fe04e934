#include "stirling/mb.hpp"

#include "stirling/basis.hpp"
#include "stirling/borel.hpp"
#include "stirling/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace stirling {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn10 = 2.30258509299404568402;

hp_real rsi(long v, long d) { return hp_real::from_si(v, d); }

hp_complex times_i(const hp_complex& a) { return {-a.im, a.re}; }

// 2(M - p theta/pi), the exact coefficient of i pi s once the domain phase
// e^{2 M i pi s} and the argument of (2 pi z^p)^{-2s} are fused.
mpq_class phase_gap(const polar_arg& z, long M) { return 2 * (mpq_class(M) - z.phase()); }

void require_domain(const polar_arg& z, long M) {
    mpq_class q = z.phase();
    if (!(q > mpq_class(M - 1) && q < mpq_class(M + 1)))
        throw divergent_tail("phase outside the domain of convergence for this index");
}

// ln(e^{-i pi s} - e^{i pi s}) with the growing exponential factored out; the
// remaining log argument stays inside the unit disk on both half-contours.
hp_complex log_denominator(const hp_complex& s, long wp) {
    hp_real pi = const_pi(wp);
    hp_complex ipis{-(pi * s.im), pi * s.re};
    hp_complex one = hp_complex::from_real(rsi(1, wp));
    if (s.im.sign() >= 0) return -ipis + log(one - exp(ipis + ipis));
    return ipis + log(one - exp(-(ipis + ipis))) + hp_complex{rsi(0, wp), pi};
}

struct mb_prep {
    long wp = 0;           // working precision including the cancellation shift
    long tol_exp = 0;      // absolute tolerance exponent for the raw contour integral
    double c_d = 0.0;
    double mag0 = 0.0;     // ln |integrand| at t = 0
    double rate_up = 0.0;  // decay exponent per unit t, upper half-contour
    double rate_dn = 0.0;  // decay exponent per unit t, lower half-contour
    double skip_ln = 0.0;  // ln threshold below which the integrand is treated as zero
};

// The peak of the integrand sits at t = 0 and decays like e^{-(2 pi +- 2 delta)|t|}
// with delta = pi (M - p theta/pi).  Its height sets both the precision shift
// (the integral cancels against TS_N to that many digits) and the dead zone.
mb_prep prepare(const polar_arg& z, long M, const mpq_class& c, const precision_policy& pol) {
    mb_prep P;
    P.c_d = c.get_d();
    double lnw = std::log(2.0 * kPi * powered_modulus(z).get_d());
    P.mag0 = std::lgamma(2.0 * P.c_d - 1.0) - 2.0 * P.c_d * lnw -
             std::log(2.0 * std::fabs(std::sin(kPi * P.c_d)));
    double delta = kPi * (static_cast<double>(M) - z.phase().get_d());
    P.rate_up = 2.0 * kPi + 2.0 * delta;
    P.rate_dn = 2.0 * kPi - 2.0 * delta;
    long shift = P.mag0 > 0.0 ? static_cast<long>(P.mag0 / kLn10) + 1 : 0;
    P.wp = working_precision_for(pol, shift);
    P.tol_exp = pol.quad_tol_exp() + shift;
    P.skip_ln = (static_cast<double>(P.tol_exp) - 14.0) * kLn10;
    return P;
}

}  // namespace

hp_complex mb_terms::total() const { return F + TS + mb_integral + s_mb; }

hp_complex mb_integrand(const polar_arg& z, const hp_complex& s, long M, long digits) {
    long wp = digits < min_digits ? min_digits : digits;
    require_domain(z, M);
    hp_real one = rsi(1, wp);
    if (!(s.re + s.re > one)) throw domain_error("integrand requires Re 2s > 1");
    hp_real ln2pw =
        log(rsi(2, wp) * const_pi(wp) * hp_real::from_rational(powered_modulus(z), wp));
    hp_real m2pi = hp_real::from_rational(phase_gap(z, M), wp) * const_pi(wp);
    hp_complex two_s = s + s;
    hp_complex expo = ln_gamma_asymptotic(two_s - one, wp) + times_i(m2pi * s) -
                      two_s * ln2pw - log_denominator(s, wp);
    return exp(expo) * zeta_complex(two_s, wp);
}

hp_complex mb_remainder(const polar_arg& z, long N, long M, const precision_policy& pol,
                        const mpq_class& c, hp_real* err_out) {
    if (N < 1) throw domain_error("truncation order must be positive");
    require_domain(z, M);
    mpq_class cr = c;
    cr.canonicalize();
    if (cr == 0) cr = mpq_class(4 * N - 1, 4);
    mpq_class lo = std::max(mpq_class(N - 1), mpq_class(1, 2));
    if (!(cr > lo && cr < mpq_class(N)))
        throw domain_error("contour abscissa must satisfy Max(N-1, 1/2) < c < N");

    mb_prep P = prepare(z, M, cr, pol);
    auto g = [&](const hp_complex& s) -> hp_complex {
        double t = std::fabs(s.im.to_double());
        if (t >= 3.0) {
            double rate = s.im.sign() > 0 ? P.rate_up : P.rate_dn;
            double est = P.mag0 + (2.0 * P.c_d - 1.5) * std::log(2.0 * t) - rate * t;
            if (est < P.skip_ln) return hp_complex{P.wp};
        }
        return mb_integrand(z, s, M, P.wp);
    };
    quad_options opt{P.wp, P.tol_exp, 3, 13};
    panel_scheme ps = panel_scheme::standard(P.wp);
    hp_real qerr{P.wp};
    hp_complex raw = integrate_vertical_line(g, hp_real::from_rational(cr, P.wp), ps, opt,
                                             err_out ? &qerr : nullptr);
    hp_complex w = powered_value(z, P.wp);
    if (err_out) *err_out = rsi(2, P.wp) * abs(w) * qerr;
    return rsi(-2, P.wp) * (w * raw);
}

hp_complex s_mb(const polar_arg& z, long M, line_case lc, long digits) {
    long wp = digits < min_digits ? min_digits : digits;
    if (mb_line_case(z, M) != lc) throw domain_error("line case does not match the phase");
    long am = std::labs(M);
    long half_m = am / 2;
    bool modd = am % 2 == 1;
    if (lc == line_case::not_on_line) {
        require_domain(z, M);
        if (M == 0) return hp_complex{wp};
        // on an odd axis the phase folds to -1, so z^p is a negative real; an
        // integer modulus then lands the second log on its zero
        if (modd && z.phase().get_den() == 1 && powered_modulus(z).get_den() == 1)
            throw log_singularity("log argument vanishes: z^p is a negative integer");
        hp_complex w = powered_value(z, wp);
        hp_complex i2pw = times_i((rsi(2, wp) * const_pi(wp)) * w);
        hp_complex res{wp};
        if (half_m != 0) res = rsi(M < 0 ? -half_m : half_m, wp) * log(-exp(-i2pw));
        if (modd)
            res = res - log(hp_complex::from_real(rsi(1, wp)) - exp(M < 0 ? -i2pw : i2pw));
        return res;
    }
    if (am == 0) return hp_complex{wp};
    hp_real x = rsi(2, wp) * const_pi(wp) * hp_real::from_rational(powered_modulus(z), wp);
    hp_real val{wp};
    if (modd) val = -log(-expm1(-x));
    long coef = lc == line_case::lower_line ? (modd ? half_m : -half_m)
                                            : (modd ? -(half_m + 1) : half_m);
    return {val + rsi(coef, wp) * x, rsi(0, wp)};
}

std::vector<mb_terms> ln_gamma_mb(const polar_arg& z, long N, const precision_policy& pol) {
    if (N < 1) throw domain_error("truncation order must be positive");
    sector_info info = classify_mb(z);
    std::vector<long> idx{info.primary_signed()};
    if (info.secondary_M) idx.push_back(*info.secondary_M);
    std::vector<mb_terms> out;
    for (long m : idx) {
        mb_terms t;
        t.M = m;
        t.c = mpq_class(4 * N - 1, 4);
        line_case lc = mb_line_case(z, m);
        t.line_valued = lc != line_case::not_on_line;
        long wp = prepare(z, m, t.c, pol).wp;  // F/TS must keep pace with the cancellation
        t.F = stirling_F(z, wp);
        t.TS = truncated_sum(z, N, wp);
        t.s_mb = s_mb(z, m, lc, wp);
        hp_real qerr{wp};
        t.mb_integral = mb_remainder(z, N, m, pol, t.c, &qerr);
        t.quad_error = qerr;
        out.push_back(std::move(t));
    }
    return out;
}

std::pair<hp_complex, hp_complex> mellin_pair_check(const hp_complex& s,
                                                    const precision_policy& pol) {
    long wp = pol.working();
    if (!(s.re > hp_real::from_rational(mpq_class(1, 2), wp)))
        throw domain_error("Mellin pair requires Re s > 1/2");
    hp_complex one = hp_complex::from_real(rsi(1, wp));
    hp_complex two_s = s + s;
    hp_complex rhs = rsi(2, wp) * (zeta_complex(two_s, wp) * gamma_complex(two_s - one, wp));

    // split at x = 1 after z = x^2; the lower piece runs in u = -ln x so the
    // endpoint log singularity becomes a smooth exponentially decaying tail
    hp_complex sm1 = two_s - one;
    complex_fn ga = [&](const hp_real& u) -> hp_complex {
        hp_real x = exp(-u);
        // past the underflow point of e^{-u} the log factor is u itself
        hp_real l = x.is_zero() ? u : -log(-expm1(-x));
        return exp(-(sm1 * u)) * hp_complex::from_real(l);
    };
    complex_fn gb = [&](const hp_real& x) -> hp_complex {
        hp_real l = -log1p(-exp(-x));
        return exp((sm1 - one) * log(x)) * hp_complex::from_real(l);
    };
    quad_options opt{wp, pol.quad_tol_exp(), 3, 13};
    panel_scheme pa = panel_scheme::standard(wp);
    panel_scheme pb;
    pb.points = {rsi(1, wp), rsi(2, wp), rsi(5, wp), rsi(10, wp), rsi(100, wp), rsi(1000, wp)};
    hp_complex lhs = rsi(2, wp) * (integrate(ga, pa, opt) + integrate(gb, pb, opt));
    return {lhs, rhs};
}

}  // namespace stirling
