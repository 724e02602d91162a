#include "dmlab/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <vector>

#include "dmlab/error.hpp"

namespace dmlab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool all_digits(const std::string& s, std::size_t from) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer parse_integer(const std::string& s) {
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (!all_digits(s, start)) fail(ErrorCode::Parse, "not an integer: '" + s + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) fail(ErrorCode::Parse, "empty rational");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)));
    Integer den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) fail(ErrorCode::Parse, "zero denominator in '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string int_part = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !int_part.empty() && int_part[0] == '-';
    if (int_part.empty() || int_part == "-" || int_part == "+") int_part += "0";
    if (!frac.empty() && !all_digits(frac, 0)) fail(ErrorCode::Parse, "bad decimal '" + s + "'");
    Integer whole = parse_integer(int_part);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer f = frac.empty() ? Integer(0) : Integer(frac, 10);
    Rational q(neg ? Integer(whole * scale - f) : Integer(whole * scale + f), scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int significant_digits) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", significant_digits - 1, x);
  std::string out(buf);
  mpfr_free_str(buf);
  mpfr_clear(x);
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  if (exponent < 0) {
    if (num == 0) fail(ErrorCode::InvalidParameter, "zero to a negative power");
    std::swap(num, den);
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long floor_log2(const Rational& q) {
  require(q > 0, ErrorCode::InvalidParameter, "floor_log2 of non-positive value");
  long k = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  // 2^(k-1) < q < 2^(k+1); settle the last bit exactly.
  while (pow2(k) > q) --k;
  while (pow2(k + 1) <= q) ++k;
  return k;
}

int compare_pow(const Rational& base, const Rational& exponent, const Rational& other) {
  require(base > 0 && other > 0, ErrorCode::InvalidParameter, "compare_pow needs positive operands");
  const Integer& u = exponent.get_num();
  const Integer& v = exponent.get_den();
  require(u.fits_slong_p() && v.fits_ulong_p(), ErrorCode::InvalidParameter, "exponent too large");
  // base^(u/v) <=> other  iff  base^u <=> other^v
  Rational lhs = pow(base, u.get_si());
  Rational rhs = pow(other, static_cast<long>(v.get_ui()));
  return cmp(lhs, rhs);
}

Rational pow2(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(p) : Rational(Integer(1), p);
}

Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational fraction(const Integer& num, const Integer& den) {
  require(den != 0, ErrorCode::InvalidParameter, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace dmlab
