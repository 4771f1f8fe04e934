#include "test_support.hpp"

using namespace stirling;
using stirling::testing::check_close;
using stirling::testing::check_small;

TEST_CASE("decimal round trip at working precision") {
    const char* samples[] = {"3.141592653589793238462643383279502884197",
                             "-2.5066282746310005024157652848110452530069e-7",
                             "6.0039864088710184849557428450939638222762809177e25",
                             "1", "-0.0278840894653691199321777792256"};
    for (const char* s : samples) {
        for (long d : {20L, 30L, 45L}) {
            hp_real x = hp_real::from_string(s, d);
            hp_real y = hp_real::from_string(x.to_string(d), d);
            // d-digit print then re-parse agrees to d significant digits.
            hp_real diff = abs(x - y);
            hp_real scale = abs(x);
            CHECK(cmp(diff, scale * pow10(-d + 1, d)) <= 0);
        }
    }
}

TEST_CASE("precision propagates as max of operands") {
    hp_real a = hp_real::from_string("1.5", 25);
    hp_real b = hp_real::from_string("2.25", 40);
    CHECK((a + b).digits() == 40);
    CHECK((b * a).digits() == 40);
    CHECK((a / b).digits() == 40);
    hp_complex ca{a, a};
    hp_complex cb{b, b};
    CHECK((ca * cb).digits() == 40);
    CHECK((ca + cb).digits() == 40);
}

TEST_CASE("minimum precision is twenty digits") {
    hp_real a(5);
    CHECK(a.digits() == 20);
    hp_complex c(3);
    CHECK(c.digits() == 20);
}

TEST_CASE("magnitude_decimal_digits counts digits left of the point") {
    CHECK(magnitude_decimal_digits(hp_real::from_string("6.0e25", 30)) == 26);
    CHECK(magnitude_decimal_digits(hp_real::from_string("0.0278", 30)) == 0);
    CHECK(magnitude_decimal_digits(hp_real::from_string("1.0", 30)) == 1);
    CHECK(magnitude_decimal_digits(hp_real::from_string("-999.5", 30)) == 3);
    CHECK(magnitude_decimal_digits(hp_real::from_si(0, 20)) == 0);
}

TEST_CASE("working_precision_for adds cancellation headroom") {
    precision_policy p;
    p.target_digits = 30;
    p.guard_digits = 20;
    CHECK(working_precision_for(p, 0) == 50);
    CHECK(working_precision_for(p, 17) == 67);
    CHECK(working_precision_for(p, -4) == 50);
    CHECK(p.quad_tol_exp() == -50);
}

TEST_CASE("complex arithmetic identities") {
    long d = 40;
    hp_complex z{hp_real::from_string("1.75", d), hp_real::from_string("-0.5", d)};
    hp_complex w{hp_real::from_string("0.3", d), hp_real::from_string("2.25", d)};

    // (z*w)/w returns z.
    hp_complex back = (z * w) / w;
    check_small(back.re - z.re, -d + 3);
    check_small(back.im - z.im, -d + 3);

    // exp(log z) = z on the principal branch.
    hp_complex el = exp(log(z));
    check_small(el.re - z.re, -d + 3);
    check_small(el.im - z.im, -d + 3);

    // pow_si via squaring matches repeated multiplication.
    hp_complex z5 = pow_si(z, 5);
    hp_complex ref = z * z * z * z * z;
    check_small(z5.re - ref.re, -d + 4);
    check_small(z5.im - ref.im, -d + 4);
    hp_complex zm3 = pow_si(z, -3);
    hp_complex refm = inv(z * z * z);
    check_small(zm3.re - refm.re, -d + 4);

    // conj distributes over multiplication.
    hp_complex lhs = conj(z * w);
    hp_complex rhs = conj(z) * conj(w);
    check_small(lhs.re - rhs.re, -d + 3);
    check_small(lhs.im - rhs.im, -d + 3);
}

TEST_CASE("principal log branch") {
    long d = 30;
    // log(-1 + 0i) has Im = +pi.
    hp_complex m1{hp_real::from_si(-1, d), hp_real::from_si(0, d)};
    hp_complex l = log(m1);
    check_small(l.re, -d + 2);
    check_small(l.im - const_pi(d), -d + 2);
    // log(-1 - 0i): negative zero selects the lower side.
    hp_real nz = hp_real::from_si(0, d);
    mpfr_neg(nz.raw(), nz.raw(), MPFR_RNDN);
    hp_complex m1d{hp_real::from_si(-1, d), nz};
    check_small(log(m1d).im + const_pi(d), -d + 2);
}

TEST_CASE("known constants") {
    check_close(const_pi(40), "3.141592653589793238462643383279502884197", -38);
    check_close(const_euler(40), "0.5772156649015328606065120900824024310422", -38);
    check_close(const_log2pi(40), "1.837877066409345483560659472811235279723", -38);
}
