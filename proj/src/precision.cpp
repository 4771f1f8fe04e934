#include "stirling/precision.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace stirling {

long bits_for(long digits) {
    if (digits < min_digits) digits = min_digits;
    return static_cast<long>(std::ceil(static_cast<double>(digits) * 3.3219280948873623)) + 8;
}

hp_real::hp_real(long digits) : digits_(digits < min_digits ? min_digits : digits) {
    mpfr_init2(v_, bits_for(digits_));
    mpfr_set_zero(v_, 1);
}

hp_real::hp_real(const hp_real& o) : digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

hp_real::hp_real(hp_real&& o) noexcept : digits_(o.digits_) {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
    mpfr_set_nan(o.v_);
}

hp_real& hp_real::operator=(const hp_real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        digits_ = o.digits_;
    }
    return *this;
}

hp_real& hp_real::operator=(hp_real&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        digits_ = o.digits_;
    }
    return *this;
}

hp_real::~hp_real() { mpfr_clear(v_); }

hp_real hp_real::from_string(const std::string& dec, long digits) {
    hp_real r(digits);
    if (mpfr_set_str(r.v_, dec.c_str(), 10, MPFR_RNDN) != 0)
        throw domain_error("unparseable decimal literal: " + dec);
    return r;
}

hp_real hp_real::from_si(long v, long digits) {
    hp_real r(digits);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
}

hp_real hp_real::from_rational(const mpq_class& q, long digits) {
    hp_real r(digits);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

std::string hp_real::to_string(long sig) const {
    if (sig <= 0) sig = digits_;
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(sig), v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
        sign = "-";
        mant.erase(0, 1);
    }
    // mant is sig digits, value = 0.mant * 10^e; render as d.ddd e(e-1).
    std::string out = sign + mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    long ex = static_cast<long>(e) - 1;
    if (ex != 0) out += "e" + std::to_string(ex);
    return out;
}

namespace {

long max_digits(const hp_real& a, const hp_real& b) {
    return a.digits() > b.digits() ? a.digits() : b.digits();
}

using unary_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
using binary_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

hp_real apply1(unary_fn f, const hp_real& a) {
    hp_real r(a.digits());
    f(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

hp_real apply2(binary_fn f, const hp_real& a, const hp_real& b) {
    hp_real r(max_digits(a, b));
    f(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

}  // namespace

hp_real operator+(const hp_real& a, const hp_real& b) { return apply2(mpfr_add, a, b); }
hp_real operator-(const hp_real& a, const hp_real& b) { return apply2(mpfr_sub, a, b); }
hp_real operator*(const hp_real& a, const hp_real& b) { return apply2(mpfr_mul, a, b); }
hp_real operator/(const hp_real& a, const hp_real& b) { return apply2(mpfr_div, a, b); }
hp_real operator-(const hp_real& a) { return apply1(mpfr_neg, a); }

int cmp(const hp_real& a, const hp_real& b) { return mpfr_cmp(a.raw(), b.raw()); }

hp_real abs(const hp_real& a) { return apply1(mpfr_abs, a); }
hp_real sqrt(const hp_real& a) { return apply1(mpfr_sqrt, a); }
hp_real exp(const hp_real& a) { return apply1(mpfr_exp, a); }
hp_real expm1(const hp_real& a) { return apply1(mpfr_expm1, a); }
hp_real log(const hp_real& a) { return apply1(mpfr_log, a); }
hp_real log1p(const hp_real& a) { return apply1(mpfr_log1p, a); }
hp_real sin(const hp_real& a) { return apply1(mpfr_sin, a); }
hp_real cos(const hp_real& a) { return apply1(mpfr_cos, a); }
hp_real tanh(const hp_real& a) { return apply1(mpfr_tanh, a); }
hp_real atan(const hp_real& a) { return apply1(mpfr_atan, a); }
hp_real atan2(const hp_real& y, const hp_real& x) { return apply2(mpfr_atan2, y, x); }
hp_real erf(const hp_real& a) { return apply1(mpfr_erf, a); }
hp_real hypot(const hp_real& a, const hp_real& b) { return apply2(mpfr_hypot, a, b); }

hp_real pow_si(const hp_real& a, long e) {
    hp_real r(a.digits());
    mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}

hp_real pow(const hp_real& a, const hp_real& b) { return apply2(mpfr_pow, a, b); }
hp_real floor(const hp_real& a) {
    hp_real r(a.digits());
    mpfr_floor(r.raw(), a.raw());
    return r;
}

hp_real const_pi(long digits) {
    hp_real r(digits);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

hp_real const_euler(long digits) {
    hp_real r(digits);
    mpfr_const_euler(r.raw(), MPFR_RNDN);
    return r;
}

hp_real const_log2pi(long digits) {
    hp_real two_pi = hp_real::from_si(2, digits) * const_pi(digits);
    return log(two_pi);
}

hp_real at_digits(const hp_real& x, long digits) {
    hp_real r(digits);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

hp_complex at_digits(const hp_complex& x, long digits) {
    return {at_digits(x.re, digits), at_digits(x.im, digits)};
}

hp_real pow10(long e, long digits) {
    hp_real r(digits);
    mpfr_set_si(r.raw(), 10, MPFR_RNDN);
    mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
    return r;
}

long magnitude_decimal_digits(const hp_real& x) {
    if (x.is_zero() || x.is_nan()) return 0;
    hp_real a = abs(x);
    if (cmp(a, hp_real::from_si(1, min_digits)) < 0) return 0;
    hp_real l(min_digits);
    mpfr_log10(l.raw(), a.raw(), MPFR_RNDN);
    long fl = mpfr_get_si(floor(l).raw(), MPFR_RNDN);
    return fl + 1;
}

hp_complex hp_complex::from_real(const hp_real& r) {
    hp_complex c;
    c.re = r;
    c.im = hp_real::from_si(0, r.digits());
    return c;
}

hp_complex operator+(const hp_complex& a, const hp_complex& b) {
    return {a.re + b.re, a.im + b.im};
}
hp_complex operator-(const hp_complex& a, const hp_complex& b) {
    return {a.re - b.re, a.im - b.im};
}

hp_complex operator*(const hp_complex& a, const hp_complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

hp_complex operator/(const hp_complex& a, const hp_complex& b) {
    hp_real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

hp_complex operator-(const hp_complex& a) { return {-a.re, -a.im}; }
hp_complex operator*(const hp_real& a, const hp_complex& b) { return {a * b.re, a * b.im}; }
hp_complex operator*(const hp_complex& a, const hp_real& b) { return {a.re * b, a.im * b}; }
hp_complex operator/(const hp_complex& a, const hp_real& b) { return {a.re / b, a.im / b}; }
hp_complex operator+(const hp_complex& a, const hp_real& b) { return {a.re + b, a.im}; }
hp_complex operator-(const hp_complex& a, const hp_real& b) { return {a.re - b, a.im}; }

hp_complex conj(const hp_complex& a) { return {a.re, -a.im}; }
hp_real abs(const hp_complex& a) { return hypot(a.re, a.im); }
hp_real arg(const hp_complex& a) { return atan2(a.im, a.re); }

hp_complex exp(const hp_complex& a) {
    long d = a.digits();
    hp_real m = exp(a.re);
    hp_real c(d), s(d);
    mpfr_sin_cos(s.raw(), c.raw(), a.im.raw(), MPFR_RNDN);
    return {m * c, m * s};
}

hp_complex log(const hp_complex& a) {
    if (a.is_zero()) throw log_singularity("log of zero");
    return {log(abs(a)), arg(a)};
}

hp_complex sqrt(const hp_complex& a) {
    hp_complex l = log(a);
    hp_real half = hp_real::from_si(1, a.digits()) / hp_real::from_si(2, a.digits());
    return exp(hp_complex{l.re * half, l.im * half});
}

hp_complex pow_si(const hp_complex& a, long e) {
    long d = a.digits();
    if (e == 0) return hp_complex::from_real(hp_real::from_si(1, d));
    bool invert = e < 0;
    unsigned long n = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    hp_complex base = a;
    hp_complex acc = hp_complex::from_real(hp_real::from_si(1, d));
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return invert ? inv(acc) : acc;
}

hp_complex pow(const hp_complex& a, const hp_complex& b) { return exp(b * log(a)); }

hp_complex inv(const hp_complex& a) {
    hp_real d = a.re * a.re + a.im * a.im;
    return {a.re / d, -a.im / d};
}

}  // namespace stirling
