#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace dmlab {

using Rational = mpq_class;
using Integer = mpz_class;

// num/den in lowest terms (den != 0).
Rational fraction(const Integer& num, const Integer& den);

// Accepts "n", "n/d" and plain decimals such as "0.25" (converted exactly).
Rational parse_rational(std::string_view text);

// Canonical "num/den" form; integers are written with a "/1" denominator.
std::string to_string(const Rational& q);

// Correctly rounded scientific rendering for reports. Never parsed back.
std::string to_decimal(const Rational& q, int significant_digits = 17);

double to_double(const Rational& q);

Rational pow(const Rational& base, long exponent);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
bool is_integer(const Rational& q);

// floor(log2(q)) for q > 0.
long floor_log2(const Rational& q);

// Sign of base^exponent - other for base > 0, other > 0 and rational exponent,
// decided with integer powers only.
int compare_pow(const Rational& base, const Rational& exponent, const Rational& other);

// 2^k for any integer k.
Rational pow2(long k);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace dmlab
