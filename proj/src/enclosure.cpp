#include "dmlab/enclosure.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>

#include "dmlab/error.hpp"

namespace dmlab {

namespace {

long g_precision = 128;

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, g_precision); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }

  Rational to_rational() {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

 private:
  mpfr_t v_;
};

template <class Fn>
Rational directed(const Rational& x, mpfr_rnd_t rnd, Fn fn) {
  Mpfr in, out;
  mpfr_set_q(in.get(), x.get_mpq_t(), rnd);
  fn(out.get(), in.get(), rnd);
  return out.to_rational();
}

// Exact v-th root of q when it exists.
bool exact_root(const Rational& q, unsigned long v, Rational& out) {
  Integer rn, rd;
  if (q < 0) return false;
  if (!mpz_root(rn.get_mpz_t(), q.get_num_mpz_t(), v)) return false;
  if (!mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), v)) return false;
  out = Rational(rn, rd);
  return true;
}

}  // namespace

Enclosure::Enclosure(Rational lower, Rational upper) : lo(std::move(lower)), hi(std::move(upper)) {
  require(lo <= hi, ErrorCode::InvalidParameter, "enclosure with lo > hi");
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Enclosure operator-(const Enclosure& a) { return {-a.hi, -a.lo}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  if (a.lo >= 0 && b.lo >= 0) return {a.lo * b.lo, a.hi * b.hi};
  std::array<Rational, 4> p{a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return {*mn, *mx};
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  require(b.lo > 0 || b.hi < 0, ErrorCode::InvalidParameter, "division by an enclosure containing 0");
  return a * Enclosure(1 / b.hi, 1 / b.lo);
}

namespace enclose {

long precision() { return g_precision; }

void set_precision(long bits) {
  require(bits >= 32 && bits <= 1 << 16, ErrorCode::InvalidParameter, "precision out of range");
  g_precision = bits;
}

Enclosure log2(const Rational& x) {
  require(x > 0, ErrorCode::InvalidParameter, "log2 of non-positive value");
  if (x.get_num() == 1 || x.get_den() == 1) {
    const Integer& m = x.get_num() == 1 ? x.get_den() : x.get_num();
    if (mpz_popcount(m.get_mpz_t()) == 1) {
      long k = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
      return Enclosure::exact(Rational(x.get_num() == 1 ? -k : k));
    }
  }
  return {directed(x, MPFR_RNDD, mpfr_log2), directed(x, MPFR_RNDU, mpfr_log2)};
}

Enclosure log2(const Enclosure& x) {
  if (x.is_exact()) return log2(x.lo);
  return {log2(x.lo).lo, log2(x.hi).hi};
}

Enclosure exp2(const Enclosure& y) {
  auto one = [](const Rational& v, mpfr_rnd_t rnd) {
    if (is_integer(v) && v.get_num().fits_slong_p()) return pow2(v.get_num().get_si());
    return directed(v, rnd, mpfr_exp2);
  };
  return {one(y.lo, MPFR_RNDD), one(y.hi, MPFR_RNDU)};
}

Enclosure exp(const Enclosure& y) {
  auto one = [](const Rational& v, mpfr_rnd_t rnd) {
    if (v == 0) return Rational(1);
    return directed(v, rnd, mpfr_exp);
  };
  return {one(y.lo, MPFR_RNDD), one(y.hi, MPFR_RNDU)};
}

Enclosure pow(const Rational& base, const Rational& exponent) {
  require(base > 0, ErrorCode::InvalidParameter, "pow needs a positive base");
  const Integer& u = exponent.get_num();
  const Integer& v = exponent.get_den();
  if (v == 1 && u.fits_slong_p() && abs(u) <= 1 << 20) return Enclosure::exact(dmlab::pow(base, u.get_si()));
  if (u.fits_slong_p() && v.fits_ulong_p() && abs(u) <= 4096 && v <= 4096) {
    Rational powered = dmlab::pow(base, u.get_si());
    Rational root;
    if (exact_root(powered, v.get_ui(), root)) return Enclosure::exact(root);
    auto rootn = [n = v.get_ui()](mpfr_ptr out, mpfr_srcptr in, mpfr_rnd_t rnd) {
      return mpfr_rootn_ui(out, in, n, rnd);
    };
    return {directed(powered, MPFR_RNDD, rootn), directed(powered, MPFR_RNDU, rootn)};
  }
  return exp2(Enclosure::exact(exponent) * log2(base));
}

Enclosure pow(const Enclosure& base, const Rational& exponent) {
  if (base.is_exact()) return pow(base.lo, exponent);
  require(base.lo > 0, ErrorCode::InvalidParameter, "pow needs a positive base");
  Enclosure a = pow(base.lo, exponent);
  Enclosure b = pow(base.hi, exponent);
  if (exponent >= 0) return {a.lo, b.hi};
  return {b.lo, a.hi};
}

Enclosure pow(const Enclosure& base, const Enclosure& exponent) {
  if (exponent.is_exact()) return pow(base, exponent.lo);
  require(base.lo > 0, ErrorCode::InvalidParameter, "pow needs a positive base");
  return exp2(exponent * log2(base));
}

Enclosure outward(const Enclosure& x, long bits) {
  auto size = [](const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
  };
  auto round = [bits, &size](const Rational& q, mpfr_rnd_t rnd) {
    if (size(q) <= static_cast<std::size_t>(4 * bits)) return q;
    mpfr_t v;
    mpfr_init2(v, bits);
    mpfr_set_q(v, q.get_mpq_t(), rnd);
    Rational out;
    mpfr_get_q(out.get_mpq_t(), v);
    mpfr_clear(v);
    return out;
  };
  return {round(x.lo, MPFR_RNDD), round(x.hi, MPFR_RNDU)};
}

}  // namespace enclose

}  // namespace dmlab
