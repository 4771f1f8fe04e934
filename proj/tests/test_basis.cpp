#include "doctest.h"

#include "stirling/basis.hpp"
#include "stirling/quadrature.hpp"
#include "test_support.hpp"

#include <mpfr.h>
#include <vector>

using namespace stirling;
using namespace stirling::testing;

namespace {

// Alternating-series acceleration: sum_{k>=0} (-1)^k a(k) with error ~ 5.83^-n.
hp_complex alternating_sum(const std::function<hp_complex(long, long)>& a, long n, long wp) {
    hp_real d = pow_si(hp_real::from_si(3, wp) + sqrt(hp_real::from_si(8, wp)), n);
    d = (d + hp_real::from_si(1, wp) / d) / hp_real::from_si(2, wp);
    hp_real b = hp_real::from_si(-1, wp);
    hp_real c = -d;
    hp_complex acc{hp_real::from_si(0, wp), hp_real::from_si(0, wp)};
    for (long k = 0; k < n; ++k) {
        c = b - c;
        acc = acc + c * a(k, wp);
        b = b * hp_real::from_si(k + n, wp) * hp_real::from_si(k - n, wp) *
            hp_real::from_si(2, wp) /
            (hp_real::from_si(2 * k + 1, wp) * hp_real::from_si(k + 1, wp));
    }
    return acc / d;
}

hp_complex eta_term(const hp_complex& s, long k, long wp) {
    hp_real ln_k1 = log(hp_real::from_si(k + 1, wp));
    return exp(hp_complex{-s.re * ln_k1, -s.im * ln_k1});
}

hp_real mpfr_oracle_eint(long arg_num, long arg_den, long digits) {
    hp_real x = hp_real::from_rational(mpq_class(arg_num, arg_den), digits);
    hp_real r(digits);
    mpfr_eint(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

}  // namespace

TEST_CASE("bernoulli numbers match a second generation scheme") {
    CHECK(bernoulli(0) == mpq_class(1));
    CHECK(bernoulli(1) == mpq_class(-1, 2));
    CHECK(bernoulli(2) == mpq_class(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == mpq_class(-1, 30));
    CHECK(bernoulli(5) == 0);
    CHECK(bernoulli(12) == mpq_class(-691, 2730));
    CHECK(bernoulli(20) == mpq_class(-174611, 330));

    // Akiyama-Tanigawa triangle (yields the B_1 = +1/2 convention; even rows agree).
    const unsigned long top = 24;
    std::vector<mpq_class> row;
    for (unsigned long m = 0; m <= top; ++m) {
        row.emplace_back(1, m + 1);
        for (unsigned long j = m; j >= 1; --j)
            row[j - 1] = mpq_class(j) * (row[j - 1] - row[j]);
        if (m % 2 == 0) CHECK(row[0] == bernoulli(m));
    }
}

TEST_CASE("cosecant expansion coefficients satisfy the zeta identity") {
    CHECK(cosecant_one(1) == mpq_class(-1, 3));
    CHECK(cosecant_one(2) == mpq_class(-1, 45));
    CHECK(cosecant_one(3) == mpq_class(-2, 945));
    CHECK_THROWS_AS(cosecant_one(0), domain_error);

    // c_k = -2 zeta(2k) / pi^2k
    long wp = 50;
    for (unsigned long k = 1; k <= 12; ++k) {
        hp_complex z = zeta_complex(hp_complex::from_real(hp_real::from_si(2 * k, wp)), wp);
        hp_real rhs = hp_real::from_si(-2, wp) * z.re / pow_si(const_pi(wp), 2 * k);
        hp_real lhs = hp_real::from_rational(cosecant_one(k), wp);
        CHECK(agreement_digits(lhs, rhs) >= 45);
    }
}

TEST_CASE("reciprocal log coefficients match their integral representation") {
    CHECK(reciprocal_log(0) == mpq_class(1));
    CHECK(reciprocal_log(1) == mpq_class(1, 2));
    CHECK(reciprocal_log(2) == mpq_class(-1, 12));
    CHECK(reciprocal_log(3) == mpq_class(1, 24));
    CHECK(reciprocal_log(4) == mpq_class(-19, 720));

    // |A_k| = int_0^inf dx / ((1+x)^k (pi^2 + ln^2 x)); substituting x = e^t folds
    // the two half-lines into exponentially decaying pieces on t >= 0.
    long wp = 40;
    hp_real pi2 = const_pi(wp) * const_pi(wp);
    quad_options opt;
    opt.digits = wp;
    opt.tol_exp10 = -36;
    for (long k = 1; k <= 8; ++k) {
        real_fn f = [&, k](const hp_real& t) {
            hp_real em = exp(-t);
            hp_real denom = pow_si(hp_real::from_si(1, wp) + em, k) * (pi2 + t * t);
            hp_real up = (k == 1) ? hp_real::from_si(1, wp) : exp(-hp_real::from_si(k - 1, wp) * t);
            return (up + em) / denom;
        };
        hp_real got = integrate(f, panel_scheme::standard(wp), opt);
        mpq_class a = reciprocal_log(static_cast<unsigned long>(k));
        mpq_class want_q = (k % 2 == 1) ? a : -a;  // |A_k|, signs alternate
        hp_real want = hp_real::from_rational(want_q, wp);
        CHECK(agreement_digits(got, want) >= 33);
    }
}

TEST_CASE("zeta matches closed forms on the even integers") {
    long d = 40;
    hp_real pi = const_pi(d + 10);
    hp_complex z2 = zeta_complex(hp_complex::from_real(hp_real::from_si(2, d)), d);
    CHECK(agreement_digits(z2.re, pi * pi / hp_real::from_si(6, d + 10)) >= 38);
    check_small(z2.im, -38);

    hp_complex z4 = zeta_complex(hp_complex::from_real(hp_real::from_si(4, d)), d);
    CHECK(agreement_digits(z4.re, pow_si(pi, 4) / hp_real::from_si(90, d + 10)) >= 38);
}

TEST_CASE("zeta off the real axis agrees with an accelerated eta series") {
    long d = 40, wp = 60;
    hp_complex s{hp_real::from_si(2, wp), hp_real::from_si(10, wp)};

    // Validate the accelerator itself on eta(2) = pi^2 / 12 first.
    hp_complex s2 = hp_complex::from_real(hp_real::from_si(2, wp));
    hp_complex eta2 = alternating_sum(
        [&](long k, long w) { return eta_term(s2, k, w); }, 140, wp);
    hp_real want2 = const_pi(wp) * const_pi(wp) / hp_real::from_si(12, wp);
    REQUIRE(agreement_digits(eta2.re, want2) >= 45);

    hp_complex eta = alternating_sum(
        [&](long k, long w) { return eta_term(s, k, w); }, 140, wp);
    // zeta(s) = eta(s) / (1 - 2^{1-s})
    hp_complex one_minus_s = hp_complex::from_real(hp_real::from_si(1, wp)) - s;
    hp_complex denom = hp_complex::from_real(hp_real::from_si(1, wp)) -
                       exp(one_minus_s * log(hp_complex::from_real(hp_real::from_si(2, wp))));
    hp_complex want = eta / denom;

    hp_complex got = zeta_complex(s, d);
    CHECK(agreement_digits(got, want) >= 30);
}

TEST_CASE("zeta rejects the pole and the left half strip") {
    long d = 30;
    CHECK_THROWS_AS(zeta_complex(hp_complex::from_real(hp_real::from_si(1, d)), d), pole_at_one);
    CHECK_THROWS_AS(
        zeta_complex(hp_complex{hp_real::from_rational(mpq_class(1, 2), d), hp_real::from_si(3, d)}, d),
        domain_error);
}

TEST_CASE("log gamma is independent of the recurrence shift depth") {
    long d = 40;
    hp_complex v{hp_real::from_si(2, d), hp_real::from_si(3, d)};
    hp_complex a = ln_gamma_asymptotic(v, d);
    hp_complex b = ln_gamma_asymptotic(v, d, 20);
    hp_complex c = ln_gamma_asymptotic(v, d, 40);
    CHECK(agreement_digits(a, b) >= 38);
    CHECK(agreement_digits(b, c) >= 38);
}

TEST_CASE("gamma reproduces factorials, sqrt pi, and reflection") {
    long d = 40;
    hp_complex g1 = gamma_complex(hp_complex::from_real(hp_real::from_si(1, d)), d);
    CHECK(agreement_digits(g1.re, hp_real::from_si(1, d)) >= 38);

    hp_complex g6 = gamma_complex(hp_complex::from_real(hp_real::from_si(6, d)), d);
    CHECK(agreement_digits(g6.re, hp_real::from_si(120, d)) >= 38);

    hp_complex gh = gamma_complex(
        hp_complex::from_real(hp_real::from_rational(mpq_class(1, 2), d)), d);
    CHECK(agreement_digits(gh.re, sqrt(const_pi(d + 10))) >= 38);

    // Gamma(-1/2) = -2 sqrt(pi) exercises the reflection path.
    hp_complex gm = gamma_complex(
        hp_complex::from_real(hp_real::from_rational(mpq_class(-1, 2), d)), d);
    CHECK(agreement_digits(gm.re, hp_real::from_si(-2, d) * sqrt(const_pi(d + 10))) >= 38);

    CHECK_THROWS_AS(gamma_complex(hp_complex::from_real(hp_real::from_si(0, d)), d),
                    pole_at_nonpositive_integer);
    CHECK_THROWS_AS(gamma_complex(hp_complex::from_real(hp_real::from_si(-3, d)), d),
                    pole_at_nonpositive_integer);
}

TEST_CASE("upper incomplete gamma hits exponential-integral oracles") {
    long d = 40;
    // Gamma(1, 2) = e^-2
    hp_complex g = upper_incomplete_gamma(hp_complex::from_real(hp_real::from_si(1, d)),
                                          hp_complex::from_real(hp_real::from_si(2, d)), d);
    CHECK(agreement_digits(g.re, exp(hp_real::from_si(-2, d + 10))) >= 38);

    // Gamma(0, x) = E1(x) = -Ei(-x); series route at x = 1, continued fraction at x = 25.
    hp_complex e1a = upper_incomplete_gamma(hp_complex::from_real(hp_real::from_si(0, d)),
                                            hp_complex::from_real(hp_real::from_si(1, d)), d);
    CHECK(agreement_digits(e1a.re, -mpfr_oracle_eint(-1, 1, d + 10)) >= 38);

    hp_complex e1b = upper_incomplete_gamma(hp_complex::from_real(hp_real::from_si(0, d)),
                                            hp_complex::from_real(hp_real::from_si(25, d)), d);
    CHECK(agreement_digits(e1b.re, -mpfr_oracle_eint(-25, 1, d + 10)) >= 38);
}

TEST_CASE("upper incomplete gamma at a = 1/2 matches erfc on both routes") {
    long d = 40, wp = d + 10;
    hp_complex half = hp_complex::from_real(hp_real::from_rational(mpq_class(1, 2), d));
    for (long x : {4, 30}) {
        hp_complex g = upper_incomplete_gamma(half, hp_complex::from_real(hp_real::from_si(x, d)), d);
        hp_real sx = sqrt(hp_real::from_si(x, wp));
        hp_real ec(wp);
        mpfr_erfc(ec.raw(), sx.raw(), MPFR_RNDN);
        hp_real want = sqrt(const_pi(wp)) * ec;
        CHECK(agreement_digits(g.re, want) >= 37);
        check_small(g.im, -37);
    }
}

TEST_CASE("scaled incomplete gamma satisfies the forward recurrence for complex arguments") {
    long d = 40;
    hp_complex a{hp_real::from_rational(mpq_class(1, 3), d), hp_real::from_rational(mpq_class(1, 7), d)};
    for (long mod : {3, 40}) {
        hp_real m = hp_real::from_si(mod, d);
        hp_real th = const_pi(d) / hp_real::from_si(3, d);
        hp_complex x{m * cos(th), m * sin(th)};
        hp_complex ga = scaled_upper_gamma(a, x, d);
        hp_complex ga1 = scaled_upper_gamma(a + hp_real::from_si(1, d), x, d);
        hp_complex rhs = a * ga + exp(a * log(x));
        CHECK(agreement_digits(ga1, rhs) >= 36);
    }
}

TEST_CASE("negative integer order reduces to the explicit exponential-integral form") {
    long d = 40, wp = d + 10;
    hp_complex g = scaled_upper_gamma(hp_complex::from_real(hp_real::from_si(-3, d)),
                                      hp_complex::from_real(hp_real::from_si(2, d)), d);
    // e^2 Gamma(-3, 2) = (-1/6)(e^2 E1(2) - 1/2)
    hp_real e2e1 = -exp(hp_real::from_si(2, wp)) * mpfr_oracle_eint(-2, 1, wp);
    hp_real want = (e2e1 - hp_real::from_rational(mpq_class(1, 2), wp)) /
                   hp_real::from_si(-6, wp);
    CHECK(agreement_digits(g.re, want) >= 37);
}

TEST_CASE("euler constant integral reproduces the constant") {
    long d = 45;
    hp_real got = euler_gamma_integral(d);
    CHECK(agreement_digits(got, const_euler(d + 10)) >= 42);
}

TEST_CASE("switching multiplier takes its pinned axis values") {
    long d = 35;
    hp_real modz = hp_real::from_si(3, d);
    hp_real on_line = erf_multiplier(mpq_class(1, 2), modz, +1);
    CHECK(agreement_digits(on_line, hp_real::from_rational(mpq_class(1, 2), d)) >= 33);

    hp_real past = erf_multiplier(mpq_class(1), modz, +1);
    CHECK(agreement_digits(past, hp_real::from_si(1, d)) >= 9);

    hp_real before = erf_multiplier(mpq_class(0), modz, +1);
    check_small(before, -9);

    CHECK_THROWS_AS(erf_multiplier(mpq_class(1, 2), modz, 0), domain_error);
}
