#include "doctest.h"
#include "test_support.hpp"

#include "stirling/borel.hpp"

using namespace stirling;
using namespace stirling::testing;

namespace {

precision_policy make_pol(long target, long limit) {
    precision_policy p;
    p.target_digits = target;
    p.guard_digits = 20;
    p.series_limit = limit;
    return p;
}

hp_real tol_scale(const hp_real& tb, long extra_exp) {
    return tb * hp_real::from_rational(mpq_class(21, 20), 20) + pow10(extra_exp, 20);
}

}  // namespace

TEST_CASE("borel: leading factor at benchmark points") {
    check_close(stirling_F(polar_arg(3, 0, 1), 60).re,
                "0.66546925487494697026844282871193190148012386819465", -48);
    CHECK(stirling_F(polar_arg(3, 0, 1), 60).im.is_zero());
    check_close(stirling_F(polar_arg(mpq_class(1, 10), 0, 1), 60).re,
                "1.73997257040229101538752631827936332290183806908929", -48);

    hp_complex f1 = stirling_F(polar_arg(1, 0, 1), 50);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), 60);
    check_small(abs(f1.re - (half * const_log2pi(60) - hp_real::from_si(1, 60))), -45);
    CHECK(f1.im.is_zero());

    check_close(stirling_F(polar_arg(3, 1, 2), 60),
                "-4.3427565915140719616112579569", "-0.4895612973931192354299251350522", -26);
    check_close(stirling_F(polar_arg(mpq_class(1, 10), -1, 2), 60),
                "1.91315144702220592186619329458", "1.11565667269685287801745999128", -27);
    check_close(stirling_F(polar_arg(mpq_class(1, 10), -1, 12, 3), 60),
                "4.3666691849467394839681993920", "0.39773534871318634708519397906", -26);
    check_close(stirling_F(polar_arg(mpq_class(5, 2), -1, 7, 3), 60),
                "-14.88486001926988218316890967", "-30.649079749718823731704253309661", -25);

    // phases past the principal branch fold back onto it before F is formed
    check_close(stirling_F(polar_arg(mpq_class(5, 2), 5, 8, 3), 60),
                "22.44243671730881854487411054", "-15.9297607498710220596760086394", -25);
    check_close(stirling_F(polar_arg(mpq_class(5, 2), 11, 12, 3), 60),
                "-45.81050523277279074549656662", "-7.88812400847329603213924107797", -25);
}

TEST_CASE("borel: truncated asymptotic sums") {
    CHECK(truncated_sum(polar_arg(3, 0, 1), 1, 50).is_zero());

    hp_complex t32 = truncated_sum(polar_arg(3, 0, 1), 2, 50);
    check_small(abs(t32.re - hp_real::from_rational(mpq_class(1, 36), 60)), -45);
    CHECK(t32.im.is_zero());

    hp_complex t13 = truncated_sum(polar_arg(mpq_class(1, 10), 0, 1), 3, 50);
    check_small(abs(t13.re - hp_real::from_rational(mpq_class(-35, 18), 60)), -40);

    check_close(truncated_sum(polar_arg(mpq_class(5, 2), 5, 8, 3), 2, 60),
                "0.004927357506726862699350310", "0.00204097830594714544921845324", -27);
    check_close(truncated_sum(polar_arg(mpq_class(5, 2), 11, 12, 3), 4, 60),
                "-0.003771750463193365200048475", "-0.00377072066430421316496938343", -27);
    check_close(truncated_sum(polar_arg(mpq_class(1, 10), -1, 12, 3), 3, 60),
                "1.964244428861064224518267e6", "-1.9641265777308664665975342e6", -18);
}

TEST_CASE("borel: partial sums collapse against the matching remainder") {
    // F + TS_N^(L) + R_N(L) is independent of N at a shared cutoff L
    precision_policy lo = make_pol(40, 200);    // N <= 2 raises the cutoff tenfold
    precision_policy hi = make_pol(40, 2000);

    polar_arg z3(3, 0, 1);
    hp_complex t1 = truncated_sum_partial(z3, 1, 2000, 60) + remainder_sector_quad(z3, 1, lo);
    hp_complex t2 = truncated_sum_partial(z3, 2, 2000, 60) + remainder_sector_quad(z3, 2, lo);
    hp_complex t3 = truncated_sum_partial(z3, 3, 2000, 60) + remainder_sector_quad(z3, 3, hi);
    hp_complex t5 = truncated_sum_partial(z3, 5, 2000, 60) + remainder_sector_quad(z3, 5, hi);
    check_small(abs(t1 - t3), -30);
    check_small(abs(t2 - t3), -30);
    check_small(abs(t5 - t3), -30);

    polar_arg zi(3, 1, 2);
    hp_complex l1 = truncated_sum_partial(zi, 1, 2000, 60) + remainder_line(zi, 1, lo);
    hp_complex l3 = truncated_sum_partial(zi, 3, 2000, 60) + remainder_line(zi, 3, hi);
    check_small(abs(l1 - l3), -28);
}

TEST_CASE("borel: sector remainders by quadrature") {
    precision_policy pol = make_pol(50, 10000);

    hp_real tb(20);
    hp_complex r32 = remainder_sector_quad(polar_arg(3, 0, 1), 2, pol, &tb);
    hp_real fx32 = hp_real::from_string(
        "-0.0000998520927794385973038298896926468609453577911", 80);
    CHECK(cmp(abs(r32.re - fx32), tol_scale(tb, -55)) <= 0);
    CHECK(r32.im.is_zero());

    hp_complex r311 = remainder_sector_quad(polar_arg(3, 0, 1), 11, pol, &tb);
    hp_real fx311 = hp_real::from_string(
        "5.889005342650445782024537787635919634947854418e-10", 80);
    CHECK(cmp(abs(r311.re - fx311), tol_scale(tb, -55)) <= 0);

    hp_complex r15 = remainder_sector_quad(polar_arg(mpq_class(1, 10), 0, 1), 5, pol, &tb);
    hp_real fx15 = hp_real::from_string(
        "5875.473057541649375261942492788406592113174013182747", 80);
    CHECK(cmp(abs(r15.re - fx15), tol_scale(tb, -45)) <= 0);
}

TEST_CASE("borel: sector remainders via the incomplete gamma route") {
    precision_policy pol = make_pol(50, 10000);

    hp_real tb(20);
    hp_complex i33 = remainder_sector_incgamma(polar_arg(3, 0, 1), 3, pol, &tb);
    hp_real fx33 = hp_real::from_string(
        "3.028565656775362781062293505563582854900697488e-6", 80);
    CHECK(cmp(abs(i33.re - fx33), tol_scale(tb, -40)) <= 0);
    CHECK(i33.im.is_zero());

    hp_complex i350 = remainder_sector_incgamma(polar_arg(3, 0, 1), 50, pol);
    hp_real fx350 = hp_real::from_string(
        "-6.003986408871018484955742842326171253776447002e25", 80);
    CHECK(agreement_digits(i350.re, fx350) >= 44);

    hp_complex i19 = remainder_sector_incgamma(polar_arg(mpq_class(1, 10), 0, 1), 9, pol);
    hp_real fx19 = hp_real::from_string(
        "2.948674194748506172595384719922447233767119265136e13", 80);
    CHECK(agreement_digits(i19.re, fx19) >= 44);

    // the two routes evaluate the same truncated series
    precision_policy small = make_pol(40, 500);
    hp_complex rq = remainder_sector_quad(polar_arg(3, 0, 1), 4, small);
    hp_complex ri = remainder_sector_incgamma(polar_arg(3, 0, 1), 4, small);
    CHECK(agreement_digits(rq, ri) >= 38);
}

TEST_CASE("borel: discontinuity terms off the lines") {
    CHECK(sd_sector(polar_arg(3, 1, 5), 0, 1, 50).is_zero());

    hp_complex s1 = sd_sector(polar_arg(3, 2, 3), 1, 1, 40);
    check_close(s1.re, "-8.13752781094718217957452e-8", -28);

    check_close(sd_sector(polar_arg(mpq_class(1, 10), -3, 4), 1, -1, 50),
                "0.68679805984095965121150997224", "0.579703018063676729767943942736", -27);

    // integer w makes the log operand vanish identically
    CHECK_THROWS_AS(sd_sector(polar_arg(2, 1, 1), 1, 1, 40), log_singularity);
    hp_complex shalf = sd_sector(polar_arg(mpq_class(5, 2), 1, 1), 1, 1, 50);
    check_close(shalf.re, "-0.693147180559945309417232121458", -25);
    check_small(shalf.im, -45);
}

TEST_CASE("borel: discontinuity terms on the lines") {
    hp_complex d3 = sd_line(polar_arg(3, 1, 2), 0, 50);
    check_close(d3.re, "3.256206078642828367679816468e-9", -33);
    CHECK(d3.im.is_zero());

    hp_complex d01 = sd_line(polar_arg(mpq_class(1, 10), -1, 2), 0, 50);
    check_close(d01.re, "0.381235865406433806218304673501", -28);

    // M = 1 flips the growth term negative, M = 2 back to positive
    long wp = 60;
    hp_real x = hp_real::from_si(2, wp) * const_pi(wp) *
                hp_real::from_rational(mpq_class(729, 1000), wp);
    hp_real l = log(-expm1(-x));
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_complex dm1 = sd_line(polar_arg(mpq_class(9, 10), -1, 2, 3), 1, 50);
    check_small(abs(dm1.re - (-x - half * l)), -45);
    hp_complex dm2 = sd_line(polar_arg(mpq_class(9, 10), 5, 6, 3), 2, 50);
    check_small(abs(dm2.re - (x - half * l)), -45);
}

TEST_CASE("borel: assembled series in sectors") {
    precision_policy pol50 = make_pol(50, 10000);
    precision_policy pol40 = make_pol(40, 10000);
    hp_real ln2 = log(hp_real::from_si(2, 80));

    // real argument, incomplete-gamma route picked automatically
    borel_terms t10 = ln_gamma_borel(polar_arg(3, 0, 1), 10, pol50);
    CHECK(t10.SD.is_zero());
    CHECK(t10.total().im.is_zero());
    CHECK(agreement_digits(t10.total().re, ln2) >= 55);

    borel_terms t3 = ln_gamma_borel(polar_arg(3, 0, 1), 3, pol50, borel_route::quadrature);
    CHECK(agreement_digits(t3.total().re, ln2) >= 25);

    // complex primary-sector argument, both routes
    borel_terms tq = ln_gamma_borel(polar_arg(3, 1, 3), 12, pol50, borel_route::quadrature);
    borel_terms ti = ln_gamma_borel(polar_arg(3, 1, 3), 12, pol50);
    check_close(tq.total(), "-2.1891550024822998242395808694", "1.27934658395211783100238740494",
                -26);
    CHECK(agreement_digits(tq.remainder, ti.remainder) >= 35);

    // powered argument still in the primary sector
    borel_terms t9a = ln_gamma_borel(polar_arg(mpq_class(5, 2), -1, 7, 3), 4, pol50);
    check_close(t9a.remainder, "2.63163543021301667181503e-12", "-6.6918000701164118190594e-15",
                -33);
    hp_complex r9aq = remainder_sector_quad(polar_arg(mpq_class(5, 2), -1, 7, 3), 4, pol50);
    check_close(r9aq, "2.63163543021301667181503e-12", "-6.6918000701164118190594e-15", -33);
    check_close(t9a.total(), "-14.88367278617361439457914968", "-30.6438795645051371993532040127",
                -24);

    // two domains past the first line
    borel_terms t9b = ln_gamma_borel(polar_arg(mpq_class(5, 2), 5, 8, 3), 2, pol40);
    check_close(t9b.F, "22.44243671730881854487411054", "-15.9297607498710220596760086394", -25);
    check_close(t9b.SD, "-37.56985811777164191963072654", "0.40452594974678472611391204778", -24);
    hp_complex fx9b{hp_real::from_string("-2.78985280372387820649852e-7", 60),
                    hp_real::from_string("-6.71962244402096931250776e-7", 60)};
    CHECK(cmp(abs(t9b.remainder - fx9b), tol_scale(t9b.tail_bound, -28)) <= 0);
    hp_complex fx9bt{hp_real::from_string("-15.12249432194137688444508634", 60),
                     hp_real::from_string("-15.5231944937805345902098093891", 60)};
    CHECK(agreement_digits(t9b.total(), fx9bt) >= 20);

    borel_terms t9c = ln_gamma_borel(polar_arg(mpq_class(5, 2), 11, 12, 3), 4, pol50);
    check_close(t9c.F, "-45.81050523277279074549656662", "-7.88812400847329603213924107797", -25);
    check_close(t9c.TS, "-0.003771750463193365200048475", "-0.00377072066430421316496938343",
                -26);
    check_close(t9c.SD, "69.42004590872447260962314046", "-2.83658512384077187501765734573", -24);
    check_close(t9c.remainder, "1.8403031527099105130346e-12", "-1.86174503255187256048211e-12",
                -33);
    check_close(t9c.total(), "23.60576892549032880207923528", "-10.7284798529802338653544196797",
                -24);

    // accumulated phase an even multiple of pi: w lands on the positive axis
    borel_terms t9d = ln_gamma_borel(polar_arg(mpq_class(5, 2), 2, 3, 3), 2, pol40);
    check_close(t9d.F.re, "26.8706304919944588244828769703", -26);
    CHECK(t9d.F.im.is_zero());
    check_small(abs(t9d.TS.re - hp_real::from_rational(mpq_class(1, 12 * 125) * 8, 60)), -45);
    hp_real fx9d = hp_real::from_string("-7.27328204587763662777752e-7", 60);
    CHECK(cmp(abs(t9d.remainder.re - fx9d), tol_scale(t9d.tail_bound, -28)) <= 0);
    CHECK(t9d.remainder.im.is_zero());
    check_small(t9d.SD.re, -55);
    check_close(t9d.SD.im, "-0.785398163397448309615660845819", -27);
    CHECK(agreement_digits(t9d.total().re,
                           hp_real::from_string("26.875963097999587570052323265", 60)) >= 22);
}

TEST_CASE("borel: assembled series on the lines") {
    precision_policy pol50 = make_pol(50, 10000);
    precision_policy pol40 = make_pol(40, 10000);

    polar_arg zi(3, 1, 2);
    borel_terms t6 = ln_gamma_borel(zi, 6, pol50);
    check_close(t6.F, "-4.3427565915140719616112579569", "-0.4895612973931192354299251350522",
                -26);
    check_close(t6.SD.re, "3.256206078642828367679816468e-9", -33);
    CHECK(t6.SD.im.is_zero());
    CHECK(t6.remainder.re.is_zero());
    CHECK((t6.TS + t6.remainder).re.is_zero());  // the expansion is purely imaginary here
    check_close(t6.remainder.im, "-1.8907874105339892863379255e-8", -31);
    check_close(t6.total(), "-4.3427565882578658829684295892",
                "-0.51744555572628341890753115113225", -26);

    borel_terms t1 = ln_gamma_borel(zi, 1, pol40);
    CHECK(t1.limit == 100000);
    CHECK(t1.TS.is_zero());
    CHECK(t1.remainder.re.is_zero());
    // reference value for the same cutoff, 10^5 terms of the shifted sum
    check_close(t1.remainder.im, "-0.0278840894653691199321777792256", -27);

    polar_arg zl(mpq_class(1, 10), -1, 2);
    borel_terms u3 = ln_gamma_borel(zl, 3, pol40);
    check_close(u3.F, "1.91315144702220592186619329458", "1.11565667269685287801745999128", -27);
    check_close(u3.SD.re, "0.381235865406433806218304673501", -28);
    CHECK(u3.remainder.re.is_zero());
    hp_real fxu3 = hp_real::from_string("-3.09864851659634765254576003084", 60);
    CHECK(cmp(abs(u3.remainder.im - fxu3), tol_scale(u3.tail_bound, -35)) <= 0);
    hp_complex fxu{hp_real::from_string("2.29438731242863972808449796808", 60),
                   hp_real::from_string("1.62811926721161633658281263176", 60)};
    CHECK(agreement_digits(u3.total(), fxu) >= 14);

    borel_terms u7 = ln_gamma_borel(zl, 7, pol40);
    CHECK(agreement_digits(u7.total(), fxu) >= 27);

    // fractional modulus cubed onto the lower line
    borel_terms w4 = ln_gamma_borel(polar_arg(mpq_class(9, 10), -1, 2, 3), 4, pol40);
    check_close(w4.total(), "-4.6434216742335191435911954", "-1.86781980997058048039434088", -23);
}

TEST_CASE("borel: conjugate symmetry") {
    precision_policy pol = make_pol(40, 2000);
    borel_terms tp = ln_gamma_borel(polar_arg(3, 1, 5), 4, pol);
    borel_terms tm = ln_gamma_borel(polar_arg(3, -1, 5), 4, pol);
    CHECK(agreement_digits(tp.remainder, conj(tm.remainder)) >= 50);
    CHECK(agreement_digits(tp.SD, conj(tm.SD)) >= 50);
    CHECK(agreement_digits(tp.total(), conj(tm.total())) >= 50);
}

TEST_CASE("borel: recorded tail bounds are honest") {
    polar_arg z(3, 1, 5);
    hp_real tb(20);
    hp_complex ra = remainder_sector_quad(z, 3, make_pol(40, 300), &tb);
    hp_complex rb = remainder_sector_quad(z, 3, make_pol(40, 3000));
    CHECK(cmp(abs(ra - rb), tol_scale(tb, -99)) <= 0);

    polar_arg zi(3, 1, 2);
    hp_complex la = remainder_line(zi, 3, make_pol(40, 300), &tb);
    hp_complex lb = remainder_line(zi, 3, make_pol(40, 3000));
    CHECK(cmp(abs(la - lb), tol_scale(tb, -99)) <= 0);

    borel_terms da = digamma_borel(z, 3, make_pol(40, 300));
    borel_terms db = digamma_borel(z, 3, make_pol(40, 3000));
    CHECK(cmp(abs(da.remainder - db.remainder), tol_scale(da.tail_bound, -99)) <= 0);
}

TEST_CASE("borel: hyperbolic-kernel cross-check") {
    precision_policy pol = make_pol(40, 100);
    long wp = 60;

    // at z = 1 the full remainder is 1 - ln(2 pi)/2
    hp_complex c1 = remainder_coth_check(polar_arg(1, 0, 1), pol);
    hp_real half = hp_real::from_rational(mpq_class(1, 2), wp);
    hp_real e1 = hp_real::from_si(1, wp) - half * const_log2pi(wp);
    check_small(abs(c1.re - e1), -45);
    check_small(c1.im, -50);

    // at z = 3 it closes the gap to ln Gamma(3) = ln 2
    hp_complex c3 = remainder_coth_check(polar_arg(3, 0, 1), pol);
    hp_real e3 = log(hp_real::from_si(2, wp)) - stirling_F(polar_arg(3, 0, 1), wp).re;
    check_small(abs(c3.re - e3), -40);

    hp_real tb(20);
    hp_complex r1 = remainder_sector_quad(polar_arg(3, 0, 1), 1, make_pol(40, 10000), &tb);
    CHECK(cmp(abs(c3.re - r1.re), tol_scale(tb, -99)) <= 0);

    // on the line the kernel is a cotangent with its poles subtracted; unlike
    // the term-by-term sum it carries no cutoff, so it sees the full value
    hp_complex cl = remainder_coth_check(polar_arg(3, 1, 2), pol);
    CHECK(cl.re.is_zero());
    check_close(cl.im, "-0.0278842583331641834776060160800", -29);
    hp_complex rl = remainder_line(polar_arg(3, 1, 2), 1, make_pol(40, 10000), &tb);
    CHECK(cmp(abs(cl.im - rl.im), tol_scale(tb, -99)) <= 0);
}

TEST_CASE("borel: digamma assembly") {
    // psi(1) = -gamma, purely real by construction
    borel_terms p1 = digamma_borel(polar_arg(1, 0, 1), 5, make_pol(40, 10000));
    CHECK(p1.total().im.is_zero());
    CHECK(agreement_digits(p1.total().re, -const_euler(60)) >= 35);

    CHECK(digamma_borel(polar_arg(3, 1, 5), 3, make_pol(40, 1000)).SD.is_zero());

    // derivative of the assembled logarithm along the modulus direction
    auto fd_check = [](const mpq_class& m, const mpq_class& th, long pw, long N,
                       const precision_policy& p, const mpq_class& h, long want) {
        long wp = p.working();
        hp_complex above = ln_gamma_borel(polar_arg(m + h, th, pw), N, p).total();
        hp_complex below = ln_gamma_borel(polar_arg(m - h, th, pw), N, p).total();
        hp_complex fd = (above - below) / hp_real::from_rational(2 * h, wp);
        borel_terms d = digamma_borel(polar_arg(m, th, pw), N, p);
        mpq_class mp = 1;
        for (long i = 1; i < pw; ++i) mp *= m;
        hp_complex dir = hp_real::from_rational(pw * mp, wp) *
                         polar_to_complex(1, fold_phase(mpq_class(pw) * th), wp);
        CHECK(agreement_digits(fd, d.total() * dir) >= want);
    };
    fd_check(3, 0, 1, 4, make_pol(40, 2000), mpq_class(1, 16384), 8);
    fd_check(3, mpq_class(2, 3), 1, 4, make_pol(40, 2000), mpq_class(1, 16384), 8);
    fd_check(3, mpq_class(1, 2), 1, 4, make_pol(30, 1000), mpq_class(1, 16384), 8);
    fd_check(mpq_class(9, 10), mpq_class(1, 6), 3, 3, make_pol(30, 1000), mpq_class(1, 65536), 8);
}

TEST_CASE("borel: domain guards") {
    precision_policy pol = make_pol(30, 200);
    CHECK_THROWS_AS(remainder_sector_quad(polar_arg(3, 1, 2), 2, pol), domain_error);
    CHECK_THROWS_AS(remainder_line(polar_arg(3, 0, 1), 2, pol), domain_error);
    CHECK_THROWS_AS(remainder_sector_incgamma(polar_arg(3, 2, 3), 3, pol), domain_error);
    CHECK_THROWS_AS(remainder_sector_incgamma(polar_arg(3, 1, 2), 3, pol), domain_error);
    CHECK_THROWS_AS(ln_gamma_borel(polar_arg(2, 1, 1), 3, pol), log_singularity);
    CHECK_THROWS_AS(truncated_sum(polar_arg(3, 0, 1), 0, 40), domain_error);
    CHECK_THROWS_AS(ln_gamma_borel(polar_arg(3, 0, 1), 0, pol), domain_error);
}
