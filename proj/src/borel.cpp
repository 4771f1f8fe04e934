#include "stirling/borel.hpp"

#include "stirling/basis.hpp"
#include "stirling/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace stirling {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kLn10 = 2.302585092994045684017991454684364;

hp_real rsi(long v, long digits) { return hp_real::from_si(v, digits); }

mpz_class factorial_z(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

hp_real factorial_hp(unsigned long n, long digits) {
    return hp_real::from_rational(mpq_class(factorial_z(n)), digits);
}

long pow2_at_least(long v) {
    long p = 16;
    while (p < v) p <<= 1;
    return p;
}

// Where y^{2N-2} e^{-y} falls below 10^{-digits10}: fixed point of
// y = digits10 ln 10 + (2N-2) ln y.
double g_cutoff(long N, double digits10) {
    double t = kLn10 * digits10;
    double y = t + 10.0;
    for (int i = 0; i < 60; ++i) y = t + (2.0 * static_cast<double>(N) - 2.0) * std::log(std::max(y, 2.0));
    return y + 5.0;
}

bool axis_phase(const mpq_class& f) {
    return f == 0 || f == 1 || f == -1 || f == mpq_class(1, 2) || f == mpq_class(-1, 2);
}

// Lower bound factor for |y^2 + (2 pi n w)^2| >= (2 pi n |w|)^2 * gap on y >= 0.
hp_real sector_gap(const mpq_class& fold, long digits) {
    mpq_class a = abs(mpq_class(2 * fold));
    if (a <= mpq_class(1, 2) || a >= mpq_class(3, 2)) return rsi(1, digits);
    return abs(sin(phase_radians(mpq_class(2 * fold), digits)));
}

// y^{2N-2} e^{-y} as one fused exponential.
hp_real g_kernel(const hp_real& y, long N) {
    if (N == 1) return exp(-y);
    return exp(rsi(2 * N - 2, y.digits()) * log(y) - y);
}

struct nsum_prep {
    long N = 0, L = 0, wp = 0, wp15 = 0;
    long n_expl = 0, jmax = 0, n_pv = 0;
    bool axis = false;
    double mod_d = 0, y_kill = 0, ln_skip = 0;
    hp_complex w;
    hp_real mod;      // |w|
    hp_real tpm;      // 2 pi |w|
    hp_complex tpw;   // 2 pi w
    hp_complex cc;    // (2 pi w)^2
    hp_complex inv_cc;
    hp_real cc_re, inv_cc_re;
    std::vector<hp_real> kn;   // n^{-(2N-2)}
    std::vector<hp_real> n2;   // n^2
    std::vector<hp_complex> ccn;
    std::vector<hp_real> ccn_re;
    std::vector<long> buckets;
    std::vector<std::vector<hp_real>> sig;  // sig[b][j] = sum_{n > buckets[b]}^{L} n^{-(2N+2j)}
    // line-only data at wp15
    std::vector<hp_real> bn15, bn2_15, gn15, kn15;
};

nsum_prep prep_nsum(const polar_arg& z, long N, const precision_policy& pol, bool line_data) {
    nsum_prep P;
    P.N = N;
    P.L = pol.series_limit;
    if (N <= 2) P.L *= 10;
    if (P.L < 1) throw domain_error("remainder: series limit must be positive");
    P.wp = pol.working();
    P.wp15 = P.wp + 15;
    mpq_class f = fold_phase(z.phase());
    P.axis = axis_phase(f);
    P.w = powered_value(z, P.wp);
    P.mod = hp_real::from_rational(powered_modulus(z), P.wp);
    P.mod_d = P.mod.to_double();
    hp_real two_pi = rsi(2, P.wp) * const_pi(P.wp);
    P.tpm = two_pi * P.mod;
    P.tpw = two_pi * P.w;
    P.cc = P.tpw * P.tpw;
    P.inv_cc = inv(P.cc);
    if (P.axis) {
        P.cc_re = P.cc.re;
        P.inv_cc_re = rsi(1, P.wp) / P.cc_re;
    }

    double tol_digits = static_cast<double>(-pol.quad_tol_exp());
    P.y_kill = g_cutoff(N, tol_digits + 60.0);
    P.ln_skip = -(tol_digits + 60.0) * kLn10;
    long need = static_cast<long>(std::ceil(2.0 * std::max(1000.0, 1.3 * P.y_kill) / (kPi * P.mod_d)));
    P.n_expl = std::min(P.L, pow2_at_least(std::max(need, 16L)));
    P.jmax = static_cast<long>(std::ceil((tol_digits + 12.0) * kLn10 / std::log(16.0))) + 4;

    P.kn.reserve(P.n_expl + 1);
    P.n2.reserve(P.n_expl + 1);
    P.kn.push_back(rsi(0, P.wp));
    P.n2.push_back(rsi(0, P.wp));
    if (P.axis)
        P.ccn_re.push_back(rsi(0, P.wp));
    else
        P.ccn.push_back(hp_complex{P.wp});
    for (long n = 1; n <= P.n_expl; ++n) {
        P.kn.push_back(pow_si(rsi(n, P.wp), -(2 * N - 2)));
        P.n2.push_back(rsi(n * n, P.wp));
        if (P.axis)
            P.ccn_re.push_back(P.cc_re * P.n2.back());
        else
            P.ccn.push_back(P.n2.back() * P.cc);
    }

    for (long b = std::min<long>(16, P.n_expl); b < P.n_expl; b <<= 1) P.buckets.push_back(b);
    P.buckets.push_back(P.n_expl);

    P.sig.assign(P.buckets.size(), std::vector<hp_real>(P.jmax + 1, rsi(0, P.wp)));
    hp_real floor10 = pow10(-(P.wp + 40), P.wp);
    std::vector<hp_real> running(P.jmax + 1, rsi(0, P.wp));
    long bi = static_cast<long>(P.buckets.size()) - 1;
    for (long n = P.L; n >= 1 && bi >= 0; --n) {
        while (bi >= 0 && P.buckets[bi] == n) {
            P.sig[bi] = running;
            --bi;
        }
        if (bi < 0) break;
        hp_real inv_n2 = hp_real::from_rational(mpq_class(1, mpz_class(n) * n), P.wp);
        hp_real t = pow_si(rsi(n, P.wp), -2 * N);
        for (long j = 0; j <= P.jmax; ++j) {
            if (t < floor10) break;
            running[j] = running[j] + t;
            t = t * inv_n2;
        }
    }

    if (line_data) {
        double pv_digits = tol_digits + 30.0;
        P.n_pv = std::min<long>(P.L, static_cast<long>(g_cutoff(N, pv_digits) / (2.0 * kPi * P.mod_d)) + 1);
        hp_real tpm15 = at_digits(P.tpm, P.wp15);
        P.bn15.push_back(rsi(0, P.wp15));
        P.bn2_15.push_back(rsi(0, P.wp15));
        P.gn15.push_back(rsi(0, P.wp15));
        P.kn15.push_back(rsi(0, P.wp15));
        for (long n = 1; n <= P.n_pv; ++n) {
            hp_real b = tpm15 * rsi(n, P.wp15);
            P.bn15.push_back(b);
            P.bn2_15.push_back(b * b);
            P.gn15.push_back(g_kernel(b, N));
            P.kn15.push_back(at_digits(P.kn[static_cast<size_t>(n)], P.wp15));
        }
    }
    return P;
}

// Smallest bucket clearing both the tail-ratio requirement (beta_{n} >= 4y for
// n past the bucket) and min_n, so explicit terms never overlap subtracted ones.
long bucket_index(const nsum_prep& P, double y_d, long min_n = 0) {
    double nd = 2.0 * y_d / (kPi * P.mod_d);
    if (!(nd >= 16.0)) nd = 16.0;
    long need = static_cast<long>(nd) + 1;
    if (need < min_n) need = min_n;
    if (need >= P.n_expl) return static_cast<long>(P.buckets.size()) - 1;
    for (size_t i = 0; i < P.buckets.size(); ++i)
        if (P.buckets[i] >= need) return static_cast<long>(i);
    return static_cast<long>(P.buckets.size()) - 1;
}

// sum_n n^{-(2N-2)} / (y^2 + cc n^2): explicit up to the bucket, geometric beyond.
hp_complex s1_complex(const nsum_prep& P, const hp_real& y2, long bidx) {
    long b = P.buckets[bidx];
    hp_complex acc{P.wp};
    for (long n = 1; n <= b; ++n)
        acc = acc + P.kn[static_cast<size_t>(n)] * inv(P.ccn[static_cast<size_t>(n)] + y2);
    const auto& s = P.sig[bidx];
    hp_complex r = (-y2) * P.inv_cc;
    hp_complex h{P.wp};
    for (long j = P.jmax; j >= 0; --j) h = h * r + s[static_cast<size_t>(j)];
    return acc + h * P.inv_cc;
}

hp_real s1_real(const nsum_prep& P, const hp_real& y2, long bidx, long n_from) {
    long b = P.buckets[bidx];
    hp_real acc = rsi(0, P.wp);
    for (long n = n_from; n <= b; ++n) {
        hp_real den = P.ccn_re[static_cast<size_t>(n)] + y2;
        if (den.is_zero()) continue;  // dead zone: the kernel is negligible wherever this can happen
        acc = acc + P.kn[static_cast<size_t>(n)] / den;
    }
    const auto& s = P.sig[bidx];
    hp_real r = -(y2 * P.inv_cc_re);
    hp_real h = rsi(0, P.wp);
    for (long j = P.jmax; j >= 0; --j) h = h * r + s[static_cast<size_t>(j)];
    return acc + h * P.inv_cc_re;
}

// sum_n n^{-(2N-4)} / (y^2 + cc n^2)^2, same split.
hp_complex s2_complex(const nsum_prep& P, const hp_real& y2, long bidx, long n_from) {
    long b = P.buckets[bidx];
    hp_complex acc{P.wp};
    for (long n = n_from; n <= b; ++n) {
        hp_complex d = inv(P.ccn[static_cast<size_t>(n)] + y2);
        acc = acc + (P.kn[static_cast<size_t>(n)] * P.n2[static_cast<size_t>(n)]) * (d * d);
    }
    const auto& s = P.sig[bidx];
    hp_complex r = (-y2) * P.inv_cc;
    hp_complex h{P.wp};
    for (long j = P.jmax; j >= 0; --j) h = h * r + rsi(j + 1, P.wp) * s[static_cast<size_t>(j)];
    return acc + h * (P.inv_cc * P.inv_cc);
}

hp_real s2_real(const nsum_prep& P, const hp_real& y2, long bidx, long n_from) {
    long b = P.buckets[bidx];
    hp_real acc = rsi(0, P.wp);
    for (long n = n_from; n <= b; ++n) {
        hp_real den = P.ccn_re[static_cast<size_t>(n)] + y2;
        if (den.is_zero()) continue;
        acc = acc + (P.kn[static_cast<size_t>(n)] * P.n2[static_cast<size_t>(n)]) / (den * den);
    }
    const auto& s = P.sig[bidx];
    hp_real r = -(y2 * P.inv_cc_re);
    hp_real h = rsi(0, P.wp);
    for (long j = P.jmax; j >= 0; --j) h = h * r + rsi(j + 1, P.wp) * s[static_cast<size_t>(j)];
    return acc + h * (P.inv_cc_re * P.inv_cc_re);
}

// True when y^{2N-2} e^{-y} is below every tolerance in play.
bool kernel_dead(const nsum_prep& P, double y_d) {
    if (!(y_d < 1e300)) return true;
    if (y_d <= 0.0) return P.N > 1;
    double e = (P.N == 1) ? -y_d : (2.0 * P.N - 2.0) * std::log(y_d) - y_d;
    return e < P.ln_skip;
}

hp_complex remainder_prefactor(const nsum_prep& P) {
    hp_complex pref = rsi(2 * ((P.N % 2 == 1) ? 1 : -1), P.wp) * P.w;  // 2 (-1)^{N+1} w
    return pref * pow_si(P.tpw, 2 - 2 * P.N);
}

// |pref| Gamma(2N-1) / ((2 pi |w|)^2 gap) * L^{1-2N} / (2N-1), a bound on the
// dropped n > L tail (the per-n integral is bounded by Gamma(2N-1)/(beta_n^2 gap)).
hp_real series_tail_bound(const nsum_prep& P, const hp_real& gap) {
    long d = 20;
    hp_real b1 = at_digits(P.tpm, d);
    hp_real pref = rsi(2, d) * at_digits(P.mod, d) * pow_si(b1, 2 - 2 * P.N);
    hp_real jb = factorial_hp(2 * P.N - 2, d) / (b1 * b1 * at_digits(gap, d));
    return pref * jb * pow_si(rsi(P.L, d), 1 - 2 * P.N) / rsi(2 * P.N - 1, d);
}

panel_scheme sector_scheme(const nsum_prep& P, const polar_arg& z) {
    mpq_class f = fold_phase(z.phase());
    double dist = std::fabs(std::fabs(f.get_d()) - 0.5);
    if (dist >= 0.15) return panel_scheme::standard(P.wp);
    long nbp = std::min<long>(P.L, static_cast<long>(P.y_kill / (2.0 * kPi * P.mod_d)) + 1);
    std::vector<hp_real> extra;
    for (long n = 1; n <= nbp; ++n) extra.push_back(P.tpm * rsi(n, P.wp));
    return panel_scheme::with_points(P.wp, extra);
}

// Absolute quadrature tolerance is loosened by the expected integral magnitude
// so a large remainder still converges at the policy's relative target.
long integral_tol_exp(const nsum_prep& P, const precision_policy& pol, const hp_real& gap) {
    double lg = std::lgamma(2.0 * static_cast<double>(P.N) - 1.0) / kLn10;
    double mag = lg - 2.0 * std::log10(2.0 * kPi * P.mod_d) - std::log10(std::max(gap.to_double(), 1e-300));
    long shift = mag > 0.0 ? static_cast<long>(mag) + 1 : 0;
    return pol.quad_tol_exp() + shift;
}

}  // namespace

hp_complex stirling_F(const polar_arg& z, long digits) {
    long wp = digits + 10;
    hp_complex w = powered_value(z, wp);
    mpq_class fold = fold_phase(z.phase());
    hp_real mod = hp_real::from_rational(powered_modulus(z), wp);
    hp_complex ln_w{log(mod), phase_radians(fold, wp)};
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_complex res = (w - half) * ln_w - w + half * const_log2pi(wp);
    return at_digits(res, digits);
}

hp_complex truncated_sum(const polar_arg& z, long N, long digits) {
    if (N < 1) throw domain_error("truncated_sum: N must be at least 1");
    long wp = digits + 10;
    hp_complex acc{wp};
    if (N == 1) return acc;
    hp_complex w = powered_value(z, wp);
    hp_complex u = inv(w);
    hp_complex u2 = u * u;
    hp_complex p = u;
    for (long k = 1; k <= N - 1; ++k) {
        mpq_class coef = bernoulli(2 * static_cast<unsigned long>(k)) /
                         (mpq_class(2 * k) * mpq_class(2 * k - 1));
        acc = acc + hp_real::from_rational(coef, wp) * p;
        p = p * u2;
    }
    return at_digits(acc, digits);
}

hp_complex truncated_sum_partial(const polar_arg& z, long N, long limit, long digits) {
    if (N < 1) throw domain_error("truncated_sum_partial: N must be at least 1");
    if (limit < 1) throw domain_error("truncated_sum_partial: limit must be positive");
    long wp = digits + 10;
    hp_complex acc{wp};
    if (N == 1) return acc;
    hp_complex w = powered_value(z, wp);

    std::vector<hp_real> sigma(static_cast<size_t>(N), rsi(0, wp));
    hp_real floor10 = pow10(-(wp + 15), wp);
    for (long n = 1; n <= limit; ++n) {
        hp_real t = hp_real::from_rational(mpq_class(1, mpz_class(n) * n), wp);
        hp_real p = t;
        for (long k = 1; k <= N - 1; ++k) {
            if (p < floor10) break;
            sigma[static_cast<size_t>(k)] = sigma[static_cast<size_t>(k)] + p;
            p = p * t;
        }
    }

    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    hp_real inv_4pi2 = rsi(1, wp) / (two_pi * two_pi);
    hp_complex u2 = inv(w * w);
    hp_real tp = inv_4pi2;
    hp_complex wpow = u2;
    for (long k = 1; k <= N - 1; ++k) {
        mpq_class c = mpq_class(2 * factorial_z(static_cast<unsigned long>(2 * k - 2)));
        if (k % 2 == 0) c = -c;  // (-1)^{k+1} 2 (2k-2)!
        acc = acc + (hp_real::from_rational(c, wp) * tp * sigma[static_cast<size_t>(k)]) * wpow;
        tp = tp * inv_4pi2;
        wpow = wpow * u2;
    }
    acc = w * acc;
    return at_digits(acc, digits);
}

hp_complex remainder_sector_quad(const polar_arg& z, long N, const precision_policy& pol,
                                 hp_real* tail_bound) {
    if (N < 1) throw domain_error("remainder_sector_quad: N must be at least 1");
    sector_info cls = classify_borel(z);
    if (cls.on_line) throw domain_error("remainder_sector_quad: argument lies on a Stokes line");
    nsum_prep P = prep_nsum(z, N, pol, false);
    hp_real gap = sector_gap(fold_phase(z.phase()), P.wp);
    panel_scheme ps = sector_scheme(P, z);
    quad_options opt{P.wp, integral_tol_exp(P, pol, gap), 3, 13};

    hp_complex I{P.wp};
    if (P.axis) {
        real_fn f = [&P](const hp_real& y) -> hp_real {
            double y_d = y.to_double();
            if (kernel_dead(P, y_d)) return rsi(0, P.wp);
            hp_real y2 = y * y;
            return g_kernel(y, P.N) * s1_real(P, y2, bucket_index(P, y_d), 1);
        };
        I = hp_complex::from_real(integrate(f, ps, opt));
    } else {
        complex_fn f = [&P](const hp_real& y) -> hp_complex {
            double y_d = y.to_double();
            if (kernel_dead(P, y_d)) return hp_complex{P.wp};
            hp_real y2 = y * y;
            return g_kernel(y, P.N) * s1_complex(P, y2, bucket_index(P, y_d));
        };
        I = integrate(f, ps, opt);
    }
    if (tail_bound) *tail_bound = series_tail_bound(P, gap);
    return remainder_prefactor(P) * I;
}

hp_complex remainder_line(const polar_arg& z, long N, const precision_policy& pol,
                          hp_real* tail_bound) {
    if (N < 1) throw domain_error("remainder_line: N must be at least 1");
    sector_info cls = classify_borel(z);
    if (!cls.on_line) throw domain_error("remainder_line: argument is not on a Stokes line");
    nsum_prep P = prep_nsum(z, N, pol, true);
    quad_options opt{P.wp, integral_tol_exp(P, pol, rsi(1, P.wp)), 3, 13};
    panel_scheme ps = panel_scheme::standard(P.wp);

    real_fn f = [&P](const hp_real& y) -> hp_real {
        long wp15 = P.wp15;
        hp_real y15 = at_digits(y, wp15);
        hp_real g15 = g_kernel(y15, P.N);
        hp_real y2_15 = y15 * y15;
        hp_real acc15 = rsi(0, wp15);
        for (long n = 1; n <= P.n_pv; ++n) {
            size_t un = static_cast<size_t>(n);
            hp_real den = y2_15 - P.bn2_15[un];
            if (den.is_zero()) {
                // removable point: (g(y)-g(b))/(y^2-b^2) -> g'(b)/(2b)
                hp_real gp = P.gn15[un] * (rsi(2 * P.N - 2, wp15) / P.bn15[un] - rsi(1, wp15));
                acc15 = acc15 + P.kn15[un] * gp / (rsi(2, wp15) * P.bn15[un]);
                continue;
            }
            acc15 = acc15 + P.kn15[un] * (g15 - P.gn15[un]) / den;
        }
        hp_real acc = at_digits(acc15, P.wp);
        double y_d = y.to_double();
        if (!kernel_dead(P, y_d)) {
            hp_real y2 = y * y;
            long bidx = bucket_index(P, y_d, P.n_pv);
            acc = acc + at_digits(g15, P.wp) * s1_real(P, y2, bidx, P.n_pv + 1);
        }
        return acc;
    };
    hp_real I = integrate(f, ps, opt);
    if (tail_bound) *tail_bound = series_tail_bound(P, hp_real::from_rational(mpq_class(1, 2), 20));
    return remainder_prefactor(P) * I;
}

hp_complex remainder_sector_incgamma(const polar_arg& z, long N, const precision_policy& pol,
                                     hp_real* tail_bound) {
    if (N < 1) throw domain_error("remainder_sector_incgamma: N must be at least 1");
    mpq_class q = z.phase();
    if (!(abs(q) < mpq_class(1, 2)))
        throw domain_error("remainder_sector_incgamma: restricted to the primary sector |p theta| < pi/2");
    long wp = pol.working();
    long L = pol.series_limit;
    if (N <= 2) L *= 10;
    hp_complex w = powered_value(z, wp);
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    hp_complex a{rsi(2 - 2 * N, wp), rsi(0, wp)};
    hp_real gam = factorial_hp(static_cast<unsigned long>(2 * N - 2), wp);
    hp_real stop = pow10(pol.quad_tol_exp() - 6, wp);

    hp_complex R{wp};
    if (q == 0) {
        // real w: G(a, conj x) = conj G(a, x) halves the work
        hp_real acc = rsi(0, wp);
        for (long n = 1; n <= L; ++n) {
            hp_complex x{rsi(0, wp), two_pi * w.re * rsi(n, wp)};
            hp_complex G = scaled_upper_gamma(a, x, wp);
            hp_real term = G.im / rsi(n, wp);
            acc = acc + term;
            if (n >= 4 && abs(term) * rsi(L - n, wp) < stop) break;
        }
        R = hp_complex::from_real(-(gam / const_pi(wp)) * acc);
    } else {
        hp_complex acc{wp};
        for (long n = 1; n <= L; ++n) {
            hp_complex i2pn{rsi(0, wp), two_pi * rsi(n, wp)};
            hp_complex xp = i2pn * w;
            hp_complex Gp = scaled_upper_gamma(a, xp, wp);
            hp_complex Gm = scaled_upper_gamma(a, -xp, wp);
            hp_complex term = (Gm - Gp) / rsi(n, wp);
            acc = acc + term;
            if (n >= 4 && abs(term) * rsi(L - n, wp) < stop) break;
        }
        // Gamma(2N-1)/(2 pi i) * acc
        hp_real s = gam / two_pi;
        R = hp_complex{s * acc.im, -(s * acc.re)};
    }
    if (tail_bound) {
        nsum_prep dummy;
        dummy.N = N;
        dummy.L = L;
        dummy.mod = hp_real::from_rational(powered_modulus(z), 20);
        dummy.tpm = rsi(2, 20) * const_pi(20) * dummy.mod;
        *tail_bound = series_tail_bound(dummy, sector_gap(fold_phase(q), 20));
    }
    return R;
}

hp_complex sd_sector(const polar_arg& z, long M, int sign, long digits) {
    if (M < 0) throw domain_error("sd_sector: M must be non-negative");
    if (sign != 1 && sign != -1) throw domain_error("sd_sector: sign must be +1 or -1");
    long wp = digits + 10;
    if (M == 0) return hp_complex{wp};
    mpq_class f = fold_phase(z.phase());
    if ((f == 0 || f == 1 || f == -1) && powered_modulus(z).get_den() == 1)
        throw log_singularity("sd_sector: 1 - e^{2 pi i w} vanishes at integer w");
    hp_complex w = powered_value(z, wp);
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    // E = exp(sign * 2 pi i w)
    hp_complex op{two_pi * w.im * rsi(-sign, wp), two_pi * w.re * rsi(sign, wp)};
    hp_complex E = exp(op);
    hp_complex res{wp};
    if (M / 2 != 0) res = res - rsi(M / 2, wp) * log(-E);
    if (M % 2 != 0) {
        hp_complex one{rsi(1, wp), rsi(0, wp)};
        res = res - log(one - E);
    }
    return at_digits(res, digits);
}

hp_complex sd_line(const polar_arg& z, long M, long digits) {
    if (M < 0) throw domain_error("sd_line: M must be non-negative");
    long wp = digits + 10;
    hp_real x = rsi(2, wp) * const_pi(wp) * hp_real::from_rational(powered_modulus(z), wp);
    hp_real l = log(-expm1(-x));  // ln(1 - e^{-2 pi |w|})
    long A = (M / 2 + M % 2) * ((M % 2 == 0) ? 1 : -1);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_real val = rsi(A, wp) * x - half * l;
    return at_digits(hp_complex{val, rsi(0, wp)}, digits);
}

borel_terms ln_gamma_borel(const polar_arg& z, long N, const precision_policy& pol,
                           borel_route route) {
    if (N < 1) throw domain_error("ln_gamma_borel: N must be at least 1");
    sector_info cls = classify_borel(z);
    long wp = pol.working();
    borel_terms t;
    t.N = N;
    t.limit = (N <= 2) ? pol.series_limit * 10 : pol.series_limit;
    t.F = stirling_F(z, wp);
    t.TS = truncated_sum(z, N, wp);
    hp_real tb(20);
    if (cls.on_line) {
        t.remainder = remainder_line(z, N, pol, &tb);
        t.SD = sd_line(z, cls.M, wp);
    } else {
        bool primary = (cls.M == 0);
        bool use_inc = (route == borel_route::incomplete_gamma) ||
                       (route == borel_route::automatic && primary && N >= 3);
        t.remainder = use_inc ? remainder_sector_incgamma(z, N, pol, &tb)
                              : remainder_sector_quad(z, N, pol, &tb);
        t.SD = sd_sector(z, cls.M, cls.sign, wp);
    }
    t.tail_bound = tb;
    return t;
}

hp_complex remainder_coth_check(const polar_arg& z, const precision_policy& pol) {
    sector_info cls = classify_borel(z);
    long wp = pol.working();
    long wp15 = wp + 15;
    hp_complex w = powered_value(z, wp);
    hp_real mod = hp_real::from_rational(powered_modulus(z), wp15);
    quad_options opt{wp, pol.quad_tol_exp(), 3, 13};
    panel_scheme ps = panel_scheme::standard(wp);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);

    if (!cls.on_line) {
        // coth(u) - 1/u = sum_k 2^{2k} B_2k u^{2k-1} / (2k)! inside |u| <= 1
        long K = wp + 20;
        std::vector<hp_real> dk;
        mpq_class fk = 1;  // (2k)!
        for (long k = 1; k <= K; ++k) {
            fk *= mpq_class(2 * k - 1) * mpq_class(2 * k);
            mpq_class c = bernoulli(2 * static_cast<unsigned long>(k));
            mpz_class sh;
            mpz_ui_pow_ui(sh.get_mpz_t(), 2, static_cast<unsigned long>(2 * k));
            dk.push_back(hp_real::from_rational(c * sh / fk, wp));
        }
        hp_complex inv2w = inv(w + w);
        hp_real one = rsi(1, wp);
        complex_fn f = [&](const hp_real& y) -> hp_complex {
            hp_complex u = y * inv2w;
            hp_complex val{wp};
            if (abs(u) <= one) {
                hp_complex u2 = u * u;
                hp_complex h{wp};
                for (long k = K - 1; k >= 0; --k) h = h * u2 + dk[static_cast<size_t>(k)];
                val = u * h;
            } else {
                int s = (u.re.sign() < 0) ? -1 : 1;
                hp_complex v = rsi(s, wp) * u;
                hp_complex e = exp(-(v + v));
                hp_complex one_c{one, rsi(0, wp)};
                val = rsi(s, wp) * ((one_c + e) * inv(one_c - e)) - inv(u);
            }
            return (exp(-y) / y) * val;
        };
        hp_complex I = integrate(f, ps, opt);
        return half * I;
    }

    // line: w = i s |w|, coth(y/2w) = i s cot(y/2|w|); subtract each cot pole with
    // a kernel whose principal value over (0, inf) vanishes exactly.
    int s = cls.sign;
    double tol_digits = static_cast<double>(-pol.quad_tol_exp());
    double mod_d = mod.to_double();
    long n_pv = static_cast<long>((tol_digits + 30.0) * kLn10 / (2.0 * kPi * mod_d)) + 1;
    hp_real tpm15 = rsi(2, wp15) * const_pi(wp15) * mod;
    std::vector<hp_real> bn, bn2, rho;
    bn.push_back(rsi(0, wp15));
    bn2.push_back(rsi(0, wp15));
    rho.push_back(rsi(0, wp15));
    for (long n = 1; n <= n_pv; ++n) {
        hp_real b = tpm15 * rsi(n, wp15);
        bn.push_back(b);
        bn2.push_back(b * b);
        rho.push_back(exp(-b) / (const_pi(wp15) * rsi(n, wp15)));
    }
    long K = wp15 + 20;
    std::vector<hp_real> dk;  // cot series: (-1)^k 2^{2k} B_2k / (2k)!
    mpq_class fk = 1;
    for (long k = 1; k <= K; ++k) {
        fk *= mpq_class(2 * k - 1) * mpq_class(2 * k);
        mpq_class c = bernoulli(2 * static_cast<unsigned long>(k));
        mpz_class sh;
        mpz_ui_pow_ui(sh.get_mpz_t(), 2, static_cast<unsigned long>(2 * k));
        mpq_class coef = c * sh / fk;
        if (k % 2 != 0) coef = -coef;
        dk.push_back(hp_real::from_rational(coef, wp15));
    }
    hp_real inv2m = rsi(1, wp15) / (mod + mod);
    hp_real one15 = rsi(1, wp15);
    real_fn f = [&](const hp_real& y) -> hp_real {
        hp_real y15 = at_digits(y, wp15);
        hp_real v = y15 * inv2m;
        hp_real core(wp15);
        if (v <= one15) {
            hp_real v2 = v * v;
            hp_real h = rsi(0, wp15);
            for (long k = K - 1; k >= 0; --k) h = h * v2 + dk[static_cast<size_t>(k)];
            core = v * h;
        } else {
            core = cos(v) / sin(v) - one15 / v;
        }
        hp_real acc = (exp(-y15) / y15) * core;
        hp_real y2 = y15 * y15;
        for (long n = 1; n <= n_pv; ++n) {
            size_t un = static_cast<size_t>(n);
            hp_real d1 = y2 - bn2[un];
            if (d1.is_zero()) continue;  // exact pole hit cannot occur off breakpoints
            hp_real two_y = y15 + y15;
            acc = acc - rho[un] * (two_y / d1 - two_y / (y2 + bn2[un]));
        }
        return at_digits(acc, wp);
    };
    hp_real I = integrate(f, ps, opt);
    return hp_complex{rsi(0, wp), rsi(s, wp) * half * I};
}

namespace {

hp_complex digamma_remainder_sector(const polar_arg& z, long N, const precision_policy& pol,
                                    hp_real* tail_bound) {
    hp_real tb1(20);
    hp_complex R1 = remainder_sector_quad(z, N, pol, &tb1);
    nsum_prep P = prep_nsum(z, N, pol, false);
    hp_real gap = sector_gap(fold_phase(z.phase()), P.wp);
    panel_scheme ps = sector_scheme(P, z);
    quad_options opt{P.wp, integral_tol_exp(P, pol, gap) + 2, 3, 13};

    hp_complex I{P.wp};
    if (P.axis) {
        real_fn f = [&P](const hp_real& y) -> hp_real {
            double y_d = y.to_double();
            if (kernel_dead(P, y_d)) return rsi(0, P.wp);
            hp_real y2 = y * y;
            return g_kernel(y, P.N) * s2_real(P, y2, bucket_index(P, y_d), 1);
        };
        I = hp_complex::from_real(integrate(f, ps, opt));
    } else {
        complex_fn f = [&P](const hp_real& y) -> hp_complex {
            double y_d = y.to_double();
            if (kernel_dead(P, y_d)) return hp_complex{P.wp};
            hp_real y2 = y * y;
            return g_kernel(y, P.N) * s2_complex(P, y2, bucket_index(P, y_d), 1);
        };
        I = integrate(f, ps, opt);
    }
    hp_complex pref = rsi(4 * ((P.N % 2 == 0) ? 1 : -1), P.wp) * pow_si(P.tpw, 4 - 2 * P.N);
    hp_complex Rpsi = (rsi(3 - 2 * N, P.wp) * inv(P.w)) * R1 + pref * I;
    if (tail_bound) {
        long d = 20;
        hp_real b1 = at_digits(P.tpm, d);
        hp_real first = rsi(std::labs(3 - 2 * N), d) / at_digits(P.mod, d) * tb1;
        hp_real g20 = at_digits(gap, d);
        hp_real second = rsi(4, d) * pow_si(b1, 4 - 2 * N) * factorial_hp(2 * N - 2, d) /
                         (pow_si(b1, 4) * g20 * g20) * pow_si(rsi(P.L, d), 1 - 2 * N) /
                         rsi(2 * N - 1, d);
        *tail_bound = first + second;
    }
    return Rpsi;
}

hp_complex digamma_remainder_line(const polar_arg& z, long N, const precision_policy& pol,
                                  hp_real* tail_bound) {
    hp_real tb1(20);
    hp_complex RL = remainder_line(z, N, pol, &tb1);
    nsum_prep P = prep_nsum(z, N, pol, true);
    quad_options opt{P.wp, integral_tol_exp(P, pol, rsi(1, P.wp)) + 2, 3, 13};
    panel_scheme ps = panel_scheme::standard(P.wp);

    // per-pole Hadamard finite parts: integrand is [g(y)/(y+b_n)^2] / (y-b_n)^2
    hp_real fp_acc = rsi(0, P.wp);
    for (long n = 1; n <= P.n_pv; ++n) {
        size_t un = static_cast<size_t>(n);
        hp_real bn_wp = at_digits(P.bn15[un], P.wp);
        long NN = P.N;
        real_fn phi = [&P, un, NN](const hp_real& y) -> hp_real {
            long d = y.digits();
            hp_real b = at_digits(P.bn15[un], d);
            hp_real s = y + b;
            return g_kernel(y, NN) / (s * s);
        };
        hp_real fp_n = integrate_finite_part(phi, bn_wp, ps, opt);
        fp_acc = fp_acc + (P.kn[un] * P.n2[un]) * fp_n;
    }

    real_fn rest = [&P](const hp_real& y) -> hp_real {
        double y_d = y.to_double();
        if (kernel_dead(P, y_d)) return rsi(0, P.wp);
        hp_real y2 = y * y;
        long bidx = bucket_index(P, y_d, P.n_pv);
        return g_kernel(y, P.N) * s2_real(P, y2, bidx, P.n_pv + 1);
    };
    hp_real I = integrate(rest, ps, opt);

    hp_complex pref = rsi(4 * ((P.N % 2 == 0) ? 1 : -1), P.wp) * pow_si(P.tpw, 4 - 2 * P.N);
    hp_complex Rpsi = (rsi(3 - 2 * N, P.wp) * inv(P.w)) * RL +
                      pref * hp_complex::from_real(fp_acc + I);
    if (tail_bound) {
        long d = 20;
        hp_real b1 = at_digits(P.tpm, d);
        hp_real first = rsi(std::labs(3 - 2 * N), d) / at_digits(P.mod, d) * tb1;
        hp_real second = rsi(16, d) * pow_si(b1, 4 - 2 * N) * factorial_hp(2 * N - 2, d) /
                         pow_si(b1, 4) * pow_si(rsi(P.L, d), 1 - 2 * N) / rsi(2 * N - 1, d);
        *tail_bound = first + second;
    }
    return Rpsi;
}

hp_complex sd_psi_sector(const polar_arg& z, long M, int sign, long wp) {
    if (M == 0) return hp_complex{wp};
    mpq_class f = fold_phase(z.phase());
    if (M % 2 != 0 && (f == 0 || f == 1 || f == -1) && powered_modulus(z).get_den() == 1)
        throw log_singularity("digamma SD: 1 - e^{2 pi i w} vanishes at integer w");
    hp_complex w = powered_value(z, wp);
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    hp_complex op{two_pi * w.im * rsi(-sign, wp), two_pi * w.re * rsi(sign, wp)};
    hp_complex E = exp(op);
    hp_complex K{rsi(-(M / 2 + M % 2), wp), rsi(0, wp)};
    if (M % 2 != 0) {
        hp_complex one{rsi(1, wp), rsi(0, wp)};
        K = K + inv(one - E);
    }
    hp_complex i2ps{rsi(0, wp), rsi(sign, wp) * two_pi};
    return i2ps * K;
}

hp_complex sd_psi_line(const polar_arg& z, long M, int sign, long wp) {
    hp_real x = rsi(2, wp) * const_pi(wp) * hp_real::from_rational(powered_modulus(z), wp);
    long A = (M / 2 + M % 2) * ((M % 2 == 0) ? 1 : -1);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_real B = rsi(A, wp) - half / expm1(x);
    hp_real two_pi = rsi(2, wp) * const_pi(wp);
    return hp_complex{rsi(0, wp), rsi(-sign, wp) * two_pi * B};
}

}  // namespace

borel_terms digamma_borel(const polar_arg& z, long N, const precision_policy& pol) {
    if (N < 1) throw domain_error("digamma_borel: N must be at least 1");
    sector_info cls = classify_borel(z);
    long wp = pol.working();
    borel_terms t;
    t.N = N;
    t.limit = (N <= 2) ? pol.series_limit * 10 : pol.series_limit;

    hp_complex w = powered_value(z, wp);
    hp_real mod = hp_real::from_rational(powered_modulus(z), wp);
    hp_complex ln_w{log(mod), phase_radians(fold_phase(z.phase()), wp)};
    t.F = ln_w - inv(w + w);

    hp_complex ts{wp};
    if (N > 1) {
        hp_complex u2 = inv(w * w);
        hp_complex p = u2;
        for (long k = 1; k <= N - 1; ++k) {
            mpq_class coef = -bernoulli(2 * static_cast<unsigned long>(k)) / mpq_class(2 * k);
            ts = ts + hp_real::from_rational(coef, wp) * p;
            p = p * u2;
        }
    }
    t.TS = ts;

    hp_real tb(20);
    if (cls.on_line) {
        t.remainder = digamma_remainder_line(z, N, pol, &tb);
        t.SD = sd_psi_line(z, cls.M, cls.sign, wp);
    } else {
        t.remainder = digamma_remainder_sector(z, N, pol, &tb);
        t.SD = sd_psi_sector(z, cls.M, cls.sign, wp);
    }
    t.tail_bound = tb;
    return t;
}

}  // namespace stirling
