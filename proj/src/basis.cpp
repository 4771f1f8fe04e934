#include "stirling/basis.hpp"

#include "stirling/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace stirling {

namespace {

std::mutex bern_mutex;
std::vector<mpq_class> bern_cache;  // append-only

std::mutex rlog_mutex;
std::vector<mpq_class> rlog_cache;  // append-only

mpz_class factorial_z(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

hp_complex c_from_si(long v, long d) { return hp_complex::from_real(hp_real::from_si(v, d)); }

}  // namespace

mpq_class bernoulli(unsigned long k) {
    std::lock_guard<std::mutex> lock(bern_mutex);
    if (bern_cache.empty()) {
        bern_cache.emplace_back(1);                // B_0
        bern_cache.emplace_back(mpq_class(-1, 2)); // B_1
    }
    while (bern_cache.size() <= k) {
        unsigned long m = bern_cache.size();
        // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
        mpq_class acc(0);
        for (unsigned long j = 0; j < m; ++j) {
            if (bern_cache[j] == 0) continue;
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
            acc += mpq_class(binom) * bern_cache[j];
        }
        acc /= mpq_class(m + 1);
        bern_cache.push_back(-acc);
    }
    return bern_cache[k];
}

mpq_class cosecant_one(unsigned long k) {
    if (k < 1) throw domain_error("cosecant coefficient index starts at 1");
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, 2 * k);
    mpq_class c = mpq_class(two_pow) * bernoulli(2 * k) / mpq_class(factorial_z(2 * k));
    return (k % 2 == 0) ? c : -c;
}

mpq_class reciprocal_log(unsigned long k) {
    std::lock_guard<std::mutex> lock(rlog_mutex);
    if (rlog_cache.empty()) rlog_cache.emplace_back(1);  // A_0
    while (rlog_cache.size() <= k) {
        unsigned long m = rlog_cache.size();
        mpq_class acc(0);
        for (unsigned long j = 0; j < m; ++j) {
            mpq_class t = rlog_cache[j] / mpq_class(m - j + 1);
            if ((m - j + 1) % 2 == 0) acc += t;  // (-1)^{m-j+1}
            else acc -= t;
        }
        rlog_cache.push_back(acc);
    }
    return rlog_cache[k];
}

hp_complex zeta_complex(const hp_complex& s, long digits) {
    long wp = digits + 10;
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    if (cmp(s.re, half) <= 0) throw domain_error("zeta evaluated left of Re s = 1/2");
    hp_complex sm1 = s - hp_real::from_si(1, wp);
    if (cmp(abs(sm1), pow10(-8, wp)) < 0) throw pole_at_one("zeta pole at s = 1");

    hp_real tol = pow10(-(digits + 6), wp);
    double imag_mag = std::abs(s.im.to_double());
    long K = 16;
    if (K < (wp * 7) / 10) K = (wp * 7) / 10;
    if (K < static_cast<long>(imag_mag / 2.0)) K = static_cast<long>(imag_mag / 2.0);

    for (int attempt = 0; attempt < 6; ++attempt) {
        // head sum + integral tail + midpoint correction
        hp_complex acc = c_from_si(0, wp);
        for (long n = 1; n < K; ++n) {
            hp_real ln_n = log(hp_real::from_si(n, wp));
            acc = acc + exp(hp_complex{-s.re * ln_n, -s.im * ln_n});
        }
        hp_real ln_K = log(hp_real::from_si(K, wp));
        hp_complex K_pow_ms = exp(hp_complex{-s.re * ln_K, -s.im * ln_K});  // K^-s
        hp_complex K_pow_1ms = K_pow_ms * hp_real::from_si(K, wp);          // K^{1-s}
        acc = acc + K_pow_1ms / sm1 + K_pow_ms * half;

        // Bernoulli corrections: B_2j/(2j)! * s(s+1)...(s+2j-2) * K^{1-s-2j}
        hp_complex poch = hp_complex::from_real(hp_real::from_si(1, wp));
        hp_complex K_fac = K_pow_ms / hp_real::from_si(K, wp);  // K^{-s-1} -> K^{1-s-2j} below
        hp_real K2 = hp_real::from_si(K, wp) * hp_real::from_si(K, wp);
        bool done = false;
        hp_real prev_mag(wp);
        bool have_prev = false;
        for (long j = 1; j <= 220; ++j) {
            // poch carries s(s+1)...(s+2j-2)
            if (j == 1) {
                poch = s;
            } else {
                long i0 = 2 * j - 3;
                poch = poch * (s + hp_real::from_si(i0, wp)) * (s + hp_real::from_si(i0 + 1, wp));
            }
            if (j > 1) K_fac = K_fac / K2;
            hp_real bq = hp_real::from_rational(
                bernoulli(2 * static_cast<unsigned long>(j)) /
                    mpq_class(factorial_z(2 * static_cast<unsigned long>(j))),
                wp);
            hp_complex term = poch * K_fac * bq;
            hp_real mag = abs(term);
            acc = acc + term;
            if (cmp(mag, tol) < 0) {
                done = true;
                break;
            }
            if (have_prev && cmp(mag, prev_mag) > 0) break;  // diverging: K too small
            prev_mag = mag;
            have_prev = true;
        }
        if (done) return at_digits(acc, digits);
        K *= 2;
    }
    throw non_convergence("zeta Euler-Maclaurin failed to settle");
}

hp_complex ln_gamma_asymptotic(const hp_complex& v, long digits, long shift_floor) {
    long wp = digits + 10;
    if (v.re.sign() <= 0 && v.im.is_zero())
        throw pole_at_nonpositive_integer("log gamma needs Re v > 0 here");

    // Shift until |v+m| is large enough that the Bernoulli tail reaches tolerance.
    double target = 0.37 * static_cast<double>(wp) + 2.0;
    if (target < static_cast<double>(shift_floor)) target = static_cast<double>(shift_floor);
    double re = v.re.to_double(), im = v.im.to_double();
    long m = 0;
    if (re < 1.0) m = static_cast<long>(1.0 - re) + 1;
    double need2 = target * target - im * im;
    if (need2 > 0) {
        double need = std::sqrt(need2) - re;
        if (need > 0 && static_cast<long>(need) + 1 > m) m = static_cast<long>(need) + 1;
    }

    hp_complex u = at_digits(v, wp) + hp_real::from_si(m, wp);
    hp_complex ln_u = log(u);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_complex acc = (u - half) * ln_u - u +
                     hp_complex::from_real(const_log2pi(wp) * half);

    hp_real tol = pow10(-(digits + 6), wp);
    hp_complex inv_u = inv(u);
    hp_complex inv_u2 = inv_u * inv_u;
    hp_complex upow = inv_u;  // u^{-(2k-1)}
    for (long k = 1; k <= 400; ++k) {
        mpq_class coef = bernoulli(2 * static_cast<unsigned long>(k)) /
                         mpq_class((2 * k) * (2 * k - 1));
        hp_complex term = upow * hp_real::from_rational(coef, wp);
        acc = acc + term;
        if (cmp(abs(term), tol) < 0) {
            // remove the recurrence shift: ln Gamma(v) = ln Gamma(v+m) - sum ln(v+j)
            for (long j = 0; j < m; ++j)
                acc = acc - log(at_digits(v, wp) + hp_real::from_si(j, wp));
            return at_digits(acc, digits);
        }
        upow = upow * inv_u2;
    }
    throw non_convergence("log gamma asymptotic series failed to settle");
}

namespace {

hp_complex sin_complex(const hp_complex& z) {
    long d = z.digits();
    hp_real sa(d), ca(d), shb(d), chb(d);
    mpfr_sin_cos(sa.raw(), ca.raw(), z.re.raw(), MPFR_RNDN);
    mpfr_sinh_cosh(shb.raw(), chb.raw(), z.im.raw(), MPFR_RNDN);
    return {sa * chb, ca * shb};
}

}  // namespace

hp_complex gamma_complex(const hp_complex& s, long digits) {
    long wp = digits + 10;
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    if (s.im.is_zero()) {
        hp_real r = s.re;
        if (r.sign() <= 0) {
            hp_real fr = r - floor(r);
            if (fr.is_zero()) throw pole_at_nonpositive_integer("gamma pole");
        }
    }
    if (cmp(s.re, half) >= 0) return exp(ln_gamma_asymptotic(s, digits));
    // reflection: Gamma(s) = pi / (sin(pi s) Gamma(1-s))
    hp_complex s_wp = at_digits(s, wp);
    hp_complex one_minus = c_from_si(1, wp) - s_wp;
    hp_complex g = exp(ln_gamma_asymptotic(one_minus, wp));
    hp_complex sp = sin_complex(const_pi(wp) * s_wp);
    hp_complex r = hp_complex::from_real(const_pi(wp)) / (sp * g);
    return at_digits(r, digits);
}

namespace {

// Lentz continued fraction for e^x Gamma(a,x) = x^a / (x+1-a- 1(1-a)/(x+3-a- ...)).
hp_complex scaled_cf(const hp_complex& a, const hp_complex& x, long wp, long digits) {
    hp_real tiny = pow10(-(2 * wp), wp);
    hp_real tol = pow10(-(digits + 8), wp);
    hp_complex b = x + c_from_si(1, wp) - a;
    hp_complex C = b;
    if (abs(C).is_zero()) C = hp_complex::from_real(tiny);
    hp_complex D = c_from_si(0, wp);
    hp_complex f = C;
    for (long i = 1; i <= 40 * wp + 400; ++i) {
        hp_complex ai = hp_real::from_si(i, wp) * (a - hp_real::from_si(i, wp));
        hp_complex bi = x + hp_real::from_si(2 * i + 1, wp) - a;
        D = bi + ai * D;
        if (abs(D).is_zero()) D = hp_complex::from_real(tiny);
        D = inv(D);
        C = bi + ai * inv(C);
        if (abs(C).is_zero()) C = hp_complex::from_real(tiny);
        hp_complex delta = C * D;
        f = f * delta;
        hp_real dev = abs(delta - c_from_si(1, wp));
        if (cmp(dev, tol) < 0) return exp(a * log(x)) / f;
    }
    throw non_convergence("incomplete gamma continued fraction stalled");
}

// e^x E1(x) for small |x| via the logarithmic series (E1 = -gamma - ln x + sum).
hp_complex scaled_e1_series(const hp_complex& x, long wp, long digits) {
    hp_real tol = pow10(-(digits + 8), wp);
    hp_complex term = x;  // (-1)^{k+1} x^k / k!
    hp_complex acc = x;   // running sum of term/k
    for (long k = 2; k <= 40 * wp + 400; ++k) {
        term = -term * x / hp_real::from_si(k, wp);
        hp_complex piece = term / hp_real::from_si(k, wp);
        acc = acc + piece;
        if (cmp(abs(piece), tol) < 0) break;
    }
    hp_complex e1 = hp_complex::from_real(-const_euler(wp)) - log(x) + acc;
    return exp(x) * e1;
}

}  // namespace

hp_complex scaled_upper_gamma(const hp_complex& a, const hp_complex& x, long digits) {
    if (x.is_zero()) throw domain_error("upper incomplete gamma needs x != 0");
    long wp = digits + 15;
    hp_complex aw = at_digits(a, wp), xw = at_digits(x, wp);
    double ax = abs(x).to_double();
    double aa = abs(a).to_double();
    if (ax >= 2.0 * aa + 10.0) return at_digits(scaled_cf(aw, xw, wp, digits), digits);

    bool integer_a = a.im.is_zero() && mpfr_integer_p(a.re.raw()) != 0;
    if (integer_a) {
        long k = mpfr_get_si(a.re.raw(), MPFR_RNDN);
        // anchor at G(0,x) or G(1,x) and walk the recurrence
        if (k >= 1) {
            // G(1,x) = 1; upward G(n+1,x) = n G(n,x) + x^n is stable for n > 0
            hp_complex g = c_from_si(1, wp);
            hp_complex xn = xw;  // x^1
            for (long n = 1; n < k; ++n) {
                g = hp_real::from_si(n, wp) * g + xn;
                xn = xn * xw;
            }
            return at_digits(g, digits);
        }
        // downward G(a-1,x) = (G(a,x) - x^{a-1})/(a-1), anchored at G(0,x) = e^x E1(x);
        // the walk loses about |x| log10 e digits, so pad the working precision.
        long pad = static_cast<long>(ax * 0.8700) + 10;
        long wpd = wp + pad;
        hp_complex xd = at_digits(x, wpd);
        hp_complex g = (ax >= 10.0) ? scaled_cf(c_from_si(0, wpd), xd, wpd, digits + pad)
                                    : scaled_e1_series(xd, wpd, digits + pad);
        hp_complex xpow = inv(xd);  // x^{a-1} with a = 0
        for (long n = 0; n > k; --n) {
            g = (g - xpow) / hp_real::from_si(n - 1, wpd);
            xpow = xpow / xd;
        }
        return at_digits(g, digits);
    }

    // non-integer a, small |x|: G = e^x (Gamma(a) - x^a sum_n (-x)^n / (n! (a+n)))
    long pad = static_cast<long>(ax * 0.8700) + 10;
    long wps = wp + pad;
    hp_complex as = at_digits(a, wps), xs = at_digits(x, wps);
    hp_real tol = pow10(-(digits + 8), wps);
    hp_complex term = c_from_si(1, wps);  // (-x)^n / n!
    hp_complex acc = inv(as);
    for (long n = 1; n <= 40 * wps + 400; ++n) {
        term = -term * xs / hp_real::from_si(n, wps);
        hp_complex piece = term / (as + hp_real::from_si(n, wps));
        acc = acc + piece;
        if (cmp(abs(piece), tol) < 0) break;
    }
    hp_complex lower = exp(as * log(xs)) * acc;
    hp_complex g = gamma_complex(as, wps) - lower;
    return at_digits(exp(xs) * g, digits);
}

hp_complex upper_incomplete_gamma(const hp_complex& a, const hp_complex& x, long digits) {
    long wp = digits + 15;
    hp_complex g = scaled_upper_gamma(a, x, wp);
    return at_digits(exp(-at_digits(x, wp)) * g, digits);
}

hp_real euler_gamma_integral(long digits) {
    long wp = digits + 12;
    // Series coefficients B_{2k}/(2k)! for the y <= 3 branch, precomputed at wp.
    double terms_needed = (static_cast<double>(wp) + 6.0) / 0.6420;  // ratio (3/2pi)^2 per term
    long K = static_cast<long>(terms_needed) + 6;
    std::vector<hp_real> coef;
    coef.reserve(static_cast<size_t>(K));
    for (long k = 1; k <= K; ++k) {
        coef.push_back(hp_real::from_rational(
            bernoulli(2 * static_cast<unsigned long>(k)) /
                mpq_class(factorial_z(2 * static_cast<unsigned long>(k))),
            wp));
    }
    hp_real three = hp_real::from_si(3, wp);
    real_fn f = [&](const hp_real& y) {
        if (cmp(y, three) <= 0) {
            // coth(y/2)/2 - 1/y = sum_k B_{2k} y^{2k-1} / (2k)!
            hp_real y2 = y * y;
            hp_real acc = coef.back();
            for (long k = K - 2; k >= 0; --k) acc = acc * y2 + coef[static_cast<size_t>(k)];
            return exp(-y) * acc * y;
        }
        // coth(y/2)/2 - 1/y = 1/2 + e^{-y}/(1-e^{-y}) - 1/y
        hp_real em = exp(-y);
        hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
        return em * (half + em / (hp_real::from_si(1, wp) - em) - hp_real::from_si(1, wp) / y);
    };
    quad_options o;
    o.digits = wp;
    o.tol_exp10 = -(digits + 8);
    hp_real v = integrate(f, panel_scheme::standard(wp), o);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    return at_digits(half + v, digits);
}

hp_real erf_multiplier(const mpq_class& theta_over_pi, const hp_real& modz, int sign) {
    if (sign != 1 && sign != -1) throw domain_error("erf multiplier sign must be +-1");
    long d = modz.digits() < 30 ? 30 : modz.digits();
    hp_real pi = const_pi(d);
    hp_real theta = hp_real::from_rational(theta_over_pi, d) * pi;
    hp_real half_pi = pi / hp_real::from_si(2, d);
    // inner sign is opposite the outer: S+ uses (theta - pi/2), S- uses (theta + pi/2)
    hp_real shifted = (sign > 0) ? theta - half_pi : theta + half_pi;
    hp_real arg = shifted * sqrt(pi * modz);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), d);
    hp_real e = erf(arg) * half;
    return (sign > 0) ? half + e : half - e;
}

}  // namespace stirling
