#pragma once

#include "dmlab/rational.hpp"

namespace dmlab {

// Closed rational interval [lo, hi] known to contain a real quantity.
// Transcendental operations use MPFR with outward directed rounding and
// convert the (dyadic) results back to exact rationals.
struct Enclosure {
  Rational lo;
  Rational hi;

  Enclosure() = default;
  Enclosure(Rational lower, Rational upper);
  static Enclosure exact(const Rational& value) { return {value, value}; }

  bool is_exact() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a);

namespace enclose {

// Working precision in bits for every transcendental evaluation (default 128).
long precision();
void set_precision(long bits);

Enclosure log2(const Rational& x);
Enclosure log2(const Enclosure& x);
Enclosure exp2(const Enclosure& y);
Enclosure exp(const Enclosure& y);

// base^exponent for base > 0. Exact for integer exponents and for exact roots.
Enclosure pow(const Rational& base, const Rational& exponent);
Enclosure pow(const Enclosure& base, const Rational& exponent);
Enclosure pow(const Enclosure& base, const Enclosure& exponent);

// Rounds the endpoints of an inexact enclosure outward to `bits` significant
// bits once their exact form grows past that size; exact values are kept.
Enclosure outward(const Enclosure& x, long bits);

}  // namespace enclose

}  // namespace dmlab
