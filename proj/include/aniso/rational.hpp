#pragma once

#include <gmpxx.h>

#include <string>

namespace aniso {

/// Exact arbitrary-precision rational scalar.
using Rational = mpq_class;

/// Exact rational value of a finite double (every double is dyadic).
Rational rational_of(double x);

double to_double(const Rational& q);

/// Best rational approximation of q with denominator <= max_den, by the
/// continued-fraction convergent/semiconvergent construction.
Rational best_rational(const Rational& q, const mpz_class& max_den);

/// "p/q" (or "p" when q == 1).
std::string to_fraction_string(const Rational& q);

/// Parse "p/q", "p", or a decimal literal (decimal parsed exactly).
Rational parse_fraction(const std::string& text);

inline Rational rat_abs(const Rational& q) { return abs(q); }

inline int rat_sign(const Rational& q) { return sgn(q); }

}  // namespace aniso
