#include "stirling/sector.hpp"

#include <cstdlib>

namespace stirling {

namespace {

long floor_long(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

long trunc_long(const mpq_class& q) {
    mpz_class f;
    mpz_tdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

long ceil_long(const mpq_class& q) {
    mpz_class f;
    mpz_cdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

// 2q an odd integer
bool half_integer(const mpq_class& q) {
    mpq_class two_q = 2 * q;
    return two_q.get_den() == 1 && mpz_odd_p(two_q.get_num().get_mpz_t());
}

void validate(const mpq_class& mod, const mpq_class& theta_pi, long p) {
    if (sgn(mod) <= 0) throw domain_error("modulus must be positive");
    if (abs(theta_pi) > 1) throw domain_error("theta must satisfy |theta| <= pi");
    if (p < 1) throw domain_error("power must be a positive integer");
}

}  // namespace

polar_arg::polar_arg(const mpq_class& mod, const mpq_class& theta_pi, long p)
    : modulus(mod), theta_over_pi(theta_pi), power(p) {
    modulus.canonicalize();
    theta_over_pi.canonicalize();
    validate(modulus, theta_over_pi, power);
}

polar_arg::polar_arg(const mpq_class& mod, long theta_num, long theta_den, long p)
    : modulus(mod), power(p) {
    if (theta_den == 0) throw domain_error("theta denominator must be nonzero");
    if (theta_den < 0) {
        theta_num = -theta_num;
        theta_den = -theta_den;
    }
    theta_over_pi = mpq_class(theta_num, theta_den);
    theta_over_pi.canonicalize();
    modulus.canonicalize();
    validate(modulus, theta_over_pi, power);
}

mpq_class polar_arg::phase() const { return theta_over_pi * power; }

mpq_class fold_phase(const mpq_class& q) {
    if (sgn(q) < 0) return -fold_phase(mpq_class(-q));
    mpq_class t = (q - 1) / 2;
    return q - 2 * mpq_class(ceil_long(t));
}

sector_info classify_borel(const polar_arg& arg) {
    mpq_class q = arg.phase();
    sector_info s;
    s.engine = engine_kind::borel;
    s.sign = sgn(q) < 0 ? -1 : 1;
    mpq_class aq = abs(q);
    if (half_integer(q)) {
        s.on_line = true;
        s.M = mpq_class(aq - mpq_class(1, 2)).get_num().get_si();
    } else {
        s.on_line = false;
        s.M = floor_long(aq + mpq_class(1, 2));
    }
    return s;
}

sector_info classify_mb(const polar_arg& arg) {
    mpq_class q = arg.phase();
    sector_info s;
    s.engine = engine_kind::mb;
    s.sign = sgn(q) < 0 ? -1 : 1;
    if (q.get_den() == 1) {
        s.M = std::labs(q.get_num().get_si());
    } else {
        long m1 = trunc_long(q);
        s.M = std::labs(m1);
        s.secondary_M = m1 + (sgn(q) < 0 ? -1 : 1);
    }
    return s;
}

line_case mb_line_case(const polar_arg& arg, long M) {
    mpq_class q = arg.phase();
    if (!half_integer(q)) return line_case::not_on_line;
    if (M != 0 && (M < 0) != (sgn(q) < 0))
        throw domain_error("domain index does not cover this phase");
    mpq_class aq = abs(q);
    long am = std::labs(M);
    if (aq == mpq_class(2 * am + 1, 2)) return line_case::upper_line;
    if (am >= 1 && aq == mpq_class(2 * am - 1, 2)) return line_case::lower_line;
    throw domain_error("domain index does not cover this phase");
}

mpq_class powered_modulus(const polar_arg& arg) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), arg.modulus.get_num_mpz_t(),
               static_cast<unsigned long>(arg.power));
    mpz_pow_ui(den.get_mpz_t(), arg.modulus.get_den_mpz_t(),
               static_cast<unsigned long>(arg.power));
    mpq_class m(num);
    m /= mpq_class(den);
    return m;
}

hp_real phase_radians(const mpq_class& over_pi, long digits) {
    return hp_real::from_rational(over_pi, digits) * const_pi(digits);
}

hp_complex polar_to_complex(const mpq_class& modulus, const mpq_class& phase_over_pi,
                            long digits) {
    hp_real m = hp_real::from_rational(modulus, digits);
    mpq_class f = fold_phase(phase_over_pi);
    hp_real zero = hp_real::from_si(0, digits);
    if (f == 0) return {m, zero};
    if (f == 1) return {-m, zero};
    if (f == -1) return {-m, -zero};
    if (f == mpq_class(1, 2)) return {zero, m};
    if (f == mpq_class(-1, 2)) return {zero, -m};
    hp_real ang = phase_radians(f, digits);
    return {m * cos(ang), m * sin(ang)};
}

hp_complex powered_value(const polar_arg& arg, long digits) {
    return polar_to_complex(powered_modulus(arg), fold_phase(arg.phase()), digits);
}

}  // namespace stirling
