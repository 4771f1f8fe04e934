#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace stirling {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's documented domain.  CLI maps this to exit code 2.
struct domain_error : error {
    using error::error;
};

// Iteration or refinement hit its cap without meeting tolerance.  CLI exit code 3.
struct non_convergence : error {
    using error::error;
};

struct pole_at_one : domain_error {
    using domain_error::domain_error;
};

struct pole_at_nonpositive_integer : domain_error {
    using domain_error::domain_error;
};

struct log_singularity : domain_error {
    using domain_error::domain_error;
};

// Integrand fails to decay along the requested contour.
struct divergent_tail : domain_error {
    using domain_error::domain_error;
};

struct singularity_on_breakpoint : error {
    using error::error;
};

// Decimal digits -> binary precision.  Eight guard bits on top of the raw conversion.
long bits_for(long digits);

inline constexpr long min_digits = 20;

// Arbitrary-precision real.  Every value carries the decimal working precision it was
// created at; binary operations allocate the result at the max of the operand precisions.
class hp_real {
  public:
    hp_real() : hp_real(min_digits) {}
    explicit hp_real(long digits);
    hp_real(const hp_real& o);
    hp_real(hp_real&& o) noexcept;
    hp_real& operator=(const hp_real& o);
    hp_real& operator=(hp_real&& o) noexcept;
    ~hp_real();

    static hp_real from_string(const std::string& dec, long digits);
    static hp_real from_si(long v, long digits);
    static hp_real from_rational(const mpq_class& q, long digits);

    long digits() const { return digits_; }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Scientific notation with sig significant digits (default: full working precision).
    // Parsing the result back at >= sig digits reproduces the value to sig digits.
    std::string to_string(long sig = -1) const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
    long digits_;
};

hp_real operator+(const hp_real& a, const hp_real& b);
hp_real operator-(const hp_real& a, const hp_real& b);
hp_real operator*(const hp_real& a, const hp_real& b);
hp_real operator/(const hp_real& a, const hp_real& b);
hp_real operator-(const hp_real& a);

int cmp(const hp_real& a, const hp_real& b);
inline bool operator<(const hp_real& a, const hp_real& b) { return cmp(a, b) < 0; }
inline bool operator>(const hp_real& a, const hp_real& b) { return cmp(a, b) > 0; }
inline bool operator<=(const hp_real& a, const hp_real& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const hp_real& a, const hp_real& b) { return cmp(a, b) >= 0; }
inline bool operator==(const hp_real& a, const hp_real& b) { return cmp(a, b) == 0; }

hp_real abs(const hp_real& a);
hp_real sqrt(const hp_real& a);
hp_real exp(const hp_real& a);
hp_real expm1(const hp_real& a);
hp_real log(const hp_real& a);
hp_real log1p(const hp_real& a);
hp_real sin(const hp_real& a);
hp_real cos(const hp_real& a);
hp_real tanh(const hp_real& a);
hp_real atan(const hp_real& a);
hp_real atan2(const hp_real& y, const hp_real& x);
hp_real erf(const hp_real& a);
hp_real hypot(const hp_real& a, const hp_real& b);
hp_real pow_si(const hp_real& a, long e);
hp_real pow(const hp_real& a, const hp_real& b);  // a > 0
hp_real floor(const hp_real& a);

hp_real const_pi(long digits);
hp_real const_euler(long digits);
hp_real const_log2pi(long digits);

// Same value re-tagged at a different working precision (rounded if narrower).
hp_real at_digits(const hp_real& x, long digits);

// 10^e at the given working precision.
hp_real pow10(long e, long digits);

// Digits left of the decimal point: floor(log10|x|) + 1 for |x| >= 1, else 0.
long magnitude_decimal_digits(const hp_real& x);

// Complex value over hp_real.  Same precision-propagation rule; minimum 20 digits.
class hp_complex {
  public:
    hp_complex() = default;
    hp_complex(hp_real r, hp_real i) : re(std::move(r)), im(std::move(i)) {}
    explicit hp_complex(long digits) : re(digits), im(digits) {}

    static hp_complex from_real(const hp_real& r);

    long digits() const { return re.digits() > im.digits() ? re.digits() : im.digits(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    hp_real re{};
    hp_real im{};
};

hp_complex operator+(const hp_complex& a, const hp_complex& b);
hp_complex operator-(const hp_complex& a, const hp_complex& b);
hp_complex operator*(const hp_complex& a, const hp_complex& b);
hp_complex operator/(const hp_complex& a, const hp_complex& b);
hp_complex operator-(const hp_complex& a);
hp_complex operator*(const hp_real& a, const hp_complex& b);
hp_complex operator*(const hp_complex& a, const hp_real& b);
hp_complex operator/(const hp_complex& a, const hp_real& b);
hp_complex operator+(const hp_complex& a, const hp_real& b);
hp_complex operator-(const hp_complex& a, const hp_real& b);

hp_complex conj(const hp_complex& a);
hp_real abs(const hp_complex& a);
// Principal argument in (-pi, pi]; uses atan2 on the stored parts.
hp_real arg(const hp_complex& a);
hp_complex exp(const hp_complex& a);
// Principal branch: Im in (-pi, pi].
hp_complex log(const hp_complex& a);
hp_complex sqrt(const hp_complex& a);
hp_complex pow_si(const hp_complex& a, long e);
// Principal power exp(b * log(a)).
hp_complex pow(const hp_complex& a, const hp_complex& b);
hp_complex inv(const hp_complex& a);
hp_complex at_digits(const hp_complex& x, long digits);

// Tolerance and precision bookkeeping shared by every numerical stage.
struct precision_policy {
    long target_digits = 30;
    long guard_digits = 20;
    long series_limit = 10000;
    // 0 means "derive": 10^-(target+guard).
    long quad_tol_exp10 = 0;

    long working() const { return target_digits + guard_digits; }
    long quad_tol_exp() const {
        return quad_tol_exp10 != 0 ? quad_tol_exp10 : -(target_digits + guard_digits);
    }
    hp_real quad_abs_tol(long digits) const { return pow10(quad_tol_exp(), digits); }
};

inline long working_precision_for(const precision_policy& p, long cancellation_digits) {
    return p.target_digits + p.guard_digits + (cancellation_digits > 0 ? cancellation_digits : 0);
}

}  // namespace stirling
