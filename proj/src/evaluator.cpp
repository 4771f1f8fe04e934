#include "stirling/evaluator.hpp"

#include "stirling/basis.hpp"
#include "stirling/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace stirling {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn10 = 2.30258509299404568402;

hp_real rsi(long v, long d) { return hp_real::from_si(v, d); }

// Largest ln-magnitude reached inside the truncated series (and mirrored by
// the leading remainder terms): the digits that cancel against the remainder
// once N passes the optimal order.
long series_cancellation_digits(const polar_arg& z, long N, bool derivative) {
    double lnw = std::log(powered_modulus(z).get_d());
    double worst = 0.0;
    for (long k = 1; k <= N - 1; ++k) {
        double ln_b = std::log(2.0) + std::lgamma(2.0 * k + 1.0) - 2.0 * k * std::log(2.0 * kPi);
        double t = derivative ? ln_b - std::log(2.0 * k) - 2.0 * k * lnw
                              : ln_b - std::log(2.0 * k * (2.0 * k - 1.0)) - (2.0 * k - 1.0) * lnw;
        worst = std::max(worst, t);
    }
    return static_cast<long>(worst / kLn10) + 1;
}

// Binet's integral correction 2 int_0^inf arctan(t/v) / (e^{2 pi t} - 1) dt
// for Re v >= 2.  The integrand is even in sign troubles: both log factors
// stay in fixed half-planes, so the principal branch never jumps.
hp_complex binet_correction(const hp_complex& v, long wp) {
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    double t_stop = (static_cast<double>(wp) + 25.0) * kLn10 / (2.0 * kPi);
    hp_complex i_half{rsi(0, wp), hp_real::from_rational(mpq_class(-1, 2), wp)};
    hp_complex one = hp_complex::from_real(rsi(1, wp));
    complex_fn f = [&](const hp_real& t) -> hp_complex {
        if (t.to_double() > t_stop) return hp_complex{wp};
        hp_complex u = hp_complex::from_real(t) / v;
        hp_complex iu{-u.im, u.re};
        hp_complex atn = i_half * (log(one + iu) - log(one - iu));
        return atn / expm1(two_pi * t);
    };
    quad_options opt{wp, -(wp - 5), 3, 13};
    hp_complex j = integrate(f, panel_scheme::standard(wp), opt);
    return j + j;
}

hp_real binet_correction_real(const hp_real& v, long wp) {
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    double t_stop = (static_cast<double>(wp) + 25.0) * kLn10 / (2.0 * kPi);
    real_fn f = [&](const hp_real& t) -> hp_real {
        if (t.to_double() > t_stop) return hp_real{wp};
        return atan(t / v) / expm1(two_pi * t);
    };
    quad_options opt{wp, -(wp - 5), 3, 13};
    hp_real j = integrate(f, panel_scheme::standard(wp), opt);
    return j + j;
}

// ln Gamma on the positive real axis by shift + Binet.
hp_real reference_positive_real(const hp_real& x, long wp) {
    long T = std::max<long>(2, static_cast<long>(0.37 * wp) + 2);
    long m = 0;
    hp_real rT = rsi(T, wp);
    hp_real v = x;
    hp_real acc{wp};
    while (v < rT) {
        acc = acc + log(v);
        v = v + rsi(1, wp);
        ++m;
        if (m > 4 * T + 64) throw non_convergence("recurrence shift failed to terminate");
    }
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_real F = (v - half) * log(v) - v + const_log2pi(wp) * half;
    return F + binet_correction_real(v, wp) - acc;
}

long ceil_of(const mpq_class& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return mpz_get_si(c.get_mpz_t());
}

}  // namespace

hp_complex ln_gamma_reference_value(const hp_complex& w, const precision_policy& pol) {
    long wp = pol.working() + 10;
    if (w.im.is_zero()) {
        if (w.re.sign() <= 0)
            throw domain_error("reference value form needs Re w > 0 or Im w != 0");
        return {reference_positive_real(at_digits(w.re, wp), wp), rsi(0, pol.working())};
    }
    long T = std::max<long>(2, static_cast<long>(0.37 * wp) + 2);
    hp_complex v = at_digits(w, wp);
    hp_complex acc{wp};
    long m = 0;
    hp_real rT = rsi(T, wp);
    while (v.re < rT) {
        acc = acc + log(v);
        v = v + rsi(1, wp);
        ++m;
        if (m > 4 * T + 64) throw non_convergence("recurrence shift failed to terminate");
    }
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_complex F = (v - half) * log(v) - v + hp_complex::from_real(const_log2pi(wp) * half);
    return at_digits(F + binet_correction(v, wp) - acc, pol.working());
}

hp_complex ln_gamma_reference(const polar_arg& z, const precision_policy& pol) {
    long wp = pol.working() + 10;
    mpq_class f = fold_phase(z.phase());
    mpq_class mod = powered_modulus(z);
    if (mod == 0) throw pole_at_nonpositive_integer("ln Gamma pole at zero");
    if (f == 0)
        return {reference_positive_real(hp_real::from_rational(mod, wp), wp),
                rsi(0, pol.working())};
    if (f == 1 || f == -1) {
        // negative real axis: reflection for the magnitude, the side of the
        // cut fixes the phase at -+ pi ceil(|w|)
        if (mod.get_den() == 1)
            throw pole_at_nonpositive_integer("ln Gamma pole at a non-positive integer");
        mpq_class frac = mod - (mod.get_num() / mod.get_den());  // in (0,1)
        hp_real sin_abs = sin(phase_radians(frac, wp));
        hp_real re = log(const_pi(wp)) - log(sin_abs) -
                     reference_positive_real(hp_real::from_rational(mod + 1, wp), wp);
        hp_real im = const_pi(wp) * rsi(f == 1 ? -ceil_of(mod) : ceil_of(mod), wp);
        return at_digits(hp_complex{re, im}, pol.working());
    }
    return ln_gamma_reference_value(polar_to_complex(mod, f, wp), pol);
}

eval_breakdown evaluate(const polar_arg& z, long N, eval_method method,
                        const precision_policy& pol) {
    if (N < 1) throw domain_error("truncation order must be positive");
    eval_breakdown out;
    out.N = N;

    if (method == eval_method::reference) {
        out.method = method;
        out.total = ln_gamma_reference(z, pol);
        out.totals = {out.total};
        out.tail_bound = pol.quad_abs_tol(20);
        out.precision_used = pol.working();
        return out;
    }

    if (method == eval_method::mb) {
        out.method = method;
        std::vector<mb_terms> entries = ln_gamma_mb(z, N, pol);
        for (const mb_terms& e : entries) out.totals.push_back(e.total());
        if (entries.size() == 2) {
            if (entries[0].line_valued) {
                // both forms carry the midpoint of the two one-sided limits
                hp_real half = hp_real::from_rational(mpq_class(1, 2), out.totals[0].digits());
                out.total = half * (out.totals[0] + out.totals[1]);
                out.tail_bound = cmp(entries[0].quad_error, entries[1].quad_error) > 0
                                     ? entries[0].quad_error
                                     : entries[1].quad_error;
            } else {
                size_t pick = cmp(entries[0].quad_error, entries[1].quad_error) <= 0 ? 0 : 1;
                out.total = out.totals[pick];
                out.tail_bound = entries[pick].quad_error;
            }
        } else {
            out.total = out.totals[0];
            out.tail_bound = entries[0].quad_error;
        }
        out.precision_used = entries[0].F.digits();
        out.terms = std::move(entries);
        return out;
    }

    sector_info cls = classify_borel(z);
    if (method == eval_method::incgamma && (cls.on_line || cls.M != 0))
        throw domain_error("incomplete-gamma route is limited to the primary sector");

    precision_policy boosted = pol;
    boosted.guard_digits += series_cancellation_digits(z, N, false);
    borel_route route = method == eval_method::incgamma ? borel_route::incomplete_gamma
                                                        : borel_route::automatic;
    borel_terms t = ln_gamma_borel(z, N, boosted, route);
    out.method = method == eval_method::automatic ? eval_method::borel : method;
    out.total = t.total();
    out.totals = {out.total};
    out.tail_bound = t.tail_bound;
    out.precision_used = boosted.working();
    out.limit = t.limit;
    out.terms = std::move(t);
    return out;
}

eval_breakdown digamma(const polar_arg& z, long N, const precision_policy& pol) {
    if (N < 1) throw domain_error("truncation order must be positive");
    precision_policy boosted = pol;
    boosted.guard_digits += series_cancellation_digits(z, N, true);
    borel_terms t = digamma_borel(z, N, boosted);
    eval_breakdown out;
    out.method = eval_method::borel;
    out.N = N;
    out.total = t.total();
    out.totals = {out.total};
    out.tail_bound = t.tail_bound;
    out.precision_used = boosted.working();
    out.limit = t.limit;
    out.terms = std::move(t);
    return out;
}

hp_complex digamma_finite_difference(const polar_arg& z, const mpq_class& h,
                                     const precision_policy& pol) {
    if (h <= 0) throw domain_error("step must be positive");
    mpq_class f = fold_phase(z.phase());
    if (f == 1 || f == -1) throw domain_error("centered step straddles the branch cut");
    precision_policy sharp = pol;
    sharp.guard_digits += 2 * magnitude_decimal_digits(hp_real::from_rational(1 / h, 20));
    long wp = sharp.working() + 10;
    hp_complex w = powered_value(z, wp);
    hp_real step = hp_real::from_rational(h, wp);
    hp_complex hi = ln_gamma_reference_value(w + step, sharp);
    hp_complex lo = ln_gamma_reference_value(w - step, sharp);
    return at_digits((hi - lo) / (step + step), pol.working());
}

n_opt n_opt_estimate(const mpq_class& modulus_effective) {
    if (modulus_effective <= 0) throw domain_error("modulus must be positive");
    hp_real x = const_pi(30) * hp_real::from_rational(modulus_effective, 30);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), 30);
    long n = static_cast<long>(floor(x + half).to_double());
    if (n < 1) return {1, true};
    return {n, false};
}

std::vector<stokes_step_record> stokes_step_experiment(const mpq_class& modz,
                                                       const std::vector<mpq_class>& deltas,
                                                       long N, const precision_policy& pol) {
    if (modz <= 0) throw domain_error("modulus must be positive");
    long wp = pol.working();
    hp_real mz = hp_real::from_rational(modz, wp);
    hp_real gate = pow10(8 - pol.target_digits, wp);
    std::vector<stokes_step_record> out;
    for (const mpq_class& d : deltas) {
        if (d == 0) throw domain_error("delta = 0 is the line itself, not a perturbation");
        stokes_step_record rec;
        rec.delta = d;
        mpq_class phase = mpq_class(1, 2) + d;
        polar_arg z(modz, phase);
        borel_terms t = ln_gamma_borel(z, N, pol, borel_route::quadrature);
        rec.sector_total = t.total();
        rec.reference = ln_gamma_reference(z, pol);
        rec.step_error = abs(rec.sector_total - rec.reference);
        rec.smoothing_factor = erf_multiplier(phase, mz, 1);
        hp_complex sd_full = sd_sector(z, 1, 1, wp);
        rec.smoothed_total = rec.sector_total - t.SD + rec.smoothing_factor * sd_full;
        rec.smoothing_error = abs(rec.smoothed_total - rec.reference);
        rec.step_matches = cmp(rec.step_error, gate) <= 0;
        out.push_back(std::move(rec));
    }
    return out;
}

hp_real hurst_gamma_partial(long K, long digits) {
    if (K < 1) throw domain_error("partial sum needs K >= 1");
    mpq_class s = 0;
    for (long k = 1; k <= K; ++k) {
        mpq_class term = reciprocal_log(static_cast<unsigned long>(k)) / k;
        s += (k % 2 == 1) ? term : -term;
    }
    return hp_real::from_rational(s, digits);
}

hp_real hurst_gamma_accelerated(long K, long digits) {
    if (K < 240) throw domain_error("extrapolation needs K >= 240");
    long wp = std::max(digits + 20, 50l);

    // tail model gamma - S_K ~ sum c_ij K^-i (ln K)^-j: 1/(K ln^2 K) leading
    std::vector<std::pair<long, long>> basis;
    for (long i = 1; i <= 3; ++i)
        for (long j = 2; j <= 7; ++j) basis.emplace_back(i, j);
    long n = static_cast<long>(basis.size()) + 1;

    long kmin = std::max(40l, K / 6);
    std::vector<long> nodes;
    for (long t = 0; t < n; ++t) {
        double r = static_cast<double>(t) / static_cast<double>(n - 1);
        long v = std::lround(static_cast<double>(K) * std::pow(static_cast<double>(kmin) / K, r));
        nodes.push_back(v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    while (static_cast<long>(nodes.size()) < n) {
        long v = nodes.back() - 3;
        while (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) v -= 3;
        nodes.push_back(v);
        std::sort(nodes.begin(), nodes.end());
    }

    // one exact pass over the series, sampling the partial sums at the nodes
    std::vector<hp_real> S;
    {
        mpq_class s = 0;
        size_t next = 0;
        for (long k = 1; k <= K && next < nodes.size(); ++k) {
            mpq_class term = reciprocal_log(static_cast<unsigned long>(k)) / k;
            s += (k % 2 == 1) ? term : -term;
            while (next < nodes.size() && nodes[next] == k) {
                S.push_back(hp_real::from_rational(s, wp));
                ++next;
            }
        }
    }

    // dense solve of S[r] = gamma + sum c_ij nodes[r]^-i ln(nodes[r])^-j
    std::vector<std::vector<hp_real>> m(n);
    for (long r = 0; r < n; ++r) {
        m[r].reserve(n + 1);
        m[r].push_back(rsi(1, wp));
        hp_real kr = rsi(nodes[r], wp);
        hp_real lr = log(kr);
        for (auto [i, j] : basis) m[r].push_back(pow_si(kr, -i) * pow_si(lr, -j));
        m[r].push_back(S[r]);
    }
    for (long c = 0; c < n; ++c) {
        long piv = c;
        for (long r = c + 1; r < n; ++r)
            if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        if (m[c][c].is_zero()) throw non_convergence("extrapolation system is singular");
        for (long r = c + 1; r < n; ++r) {
            hp_real f = m[r][c] / m[c][c];
            for (long cc = c; cc <= n; ++cc) m[r][cc] = m[r][cc] - f * m[c][cc];
        }
    }
    std::vector<hp_real> x(n, hp_real{wp});
    for (long r = n - 1; r >= 0; --r) {
        hp_real acc = m[r][n];
        for (long cc = r + 1; cc < n; ++cc) acc = acc - m[r][cc] * x[cc];
        x[r] = acc / m[r][r];
    }
    return at_digits(x[0], digits);
}

}  // namespace stirling
