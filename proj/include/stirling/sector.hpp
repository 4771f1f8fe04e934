#pragma once

#include "stirling/precision.hpp"

#include <optional>

namespace stirling {

enum class engine_kind { borel, mb };
enum class line_case { not_on_line, lower_line, upper_line };

// Polar argument |z| e^{i theta} with theta an exact rational multiple of pi.
// The engines act on w = z^p; theta itself stays on the principal branch.
struct polar_arg {
    mpq_class modulus;
    mpq_class theta_over_pi;
    long power = 1;

    polar_arg(const mpq_class& mod, const mpq_class& theta_pi, long p = 1);
    polar_arg(const mpq_class& mod, long theta_num, long theta_den, long p = 1);

    // Accumulated phase p*theta in units of pi; may leave [-1, 1].
    mpq_class phase() const;
};

struct sector_info {
    engine_kind engine = engine_kind::borel;
    long M = 0;  // |domain index|
    int sign = 1;
    bool on_line = false;
    std::optional<long> secondary_M;  // second overlapping domain, signed

    long primary_signed() const { return sign < 0 ? -M : M; }
};

// Principal fold of a phase in units of pi: positive inputs land in (-1, 1],
// negative in [-1, 1), so fold(-q) = -fold(q) always.
mpq_class fold_phase(const mpq_class& q);

// Stokes sectors (M-1/2)pi < |p theta| < (M+1/2)pi; lines at the boundaries.
sector_info classify_borel(const polar_arg& arg);

// Convergence domains (M-1)pi < p theta < (M+1)pi; two overlap except at
// integer multiples of pi, where only one applies.
sector_info classify_mb(const polar_arg& arg);

// Which half-integer boundary of domain M the phase sits on, if any.
line_case mb_line_case(const polar_arg& arg, long M);

// |z|^p, exact.
mpq_class powered_modulus(const polar_arg& arg);

hp_real phase_radians(const mpq_class& over_pi, long digits);

// modulus e^{i pi phase}, with exact components on the axes; the sign of a
// zero part follows the sign of the folded phase so downstream atan2 logic
// sees the correct side of the cut.
hp_complex polar_to_complex(const mpq_class& modulus, const mpq_class& phase_over_pi,
                            long digits);

// w = z^p as a principal value.
hp_complex powered_value(const polar_arg& arg, long digits);

}  // namespace stirling
