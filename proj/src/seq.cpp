#include "dmlab/seq.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dmlab/error.hpp"

namespace dmlab::seq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Scaled families unwrap to factor * base, base never Scaled.
struct Flat {
  Rational factor;
  const SequenceFamily* base;
};

Flat flatten(const SequenceFamily& f) {
  Flat out{Rational(1), &f};
  while (auto* s = std::get_if<SequenceFamily::Scaled>(&out.base->kind())) {
    out.factor *= s->c;
    out.base = s->inner.get();
  }
  return out;
}

double log_rational(const Rational& q) {
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

long as_long(const Rational& q) {
  require(is_integer(q) && q.get_num().fits_slong_p(), ErrorCode::InvalidParameter, "exponent too large");
  return q.get_num().get_si();
}

void check_unit(const Rational& x, const char* what) {
  require(x > 0 && x < 1, ErrorCode::InvalidParameter, std::string(what) + " must lie in (0,1), got " + to_string(x));
}

// Log-scale estimate of the first index with alpha_n^p < bound.
double estimate_first_index(const Flat& flat, const Rational& p, const Rational& bound) {
  double target = log_rational(bound) / p.get_d() - log_rational(flat.factor);
  return std::visit(
      overloaded{
          [&](const SequenceFamily::Geometric& g) { return 1.0 + (target - log_rational(g.a)) / log_rational(g.q); },
          [&](const SequenceFamily::Power& pw) {
            return std::exp((log_rational(pw.a) - target) / pw.gamma.get_d()) - pw.offset.get_d();
          },
          [&](const SequenceFamily::LogFloor& lf) {
            double k = std::floor(target / log_rational(lf.base)) + 1.0;
            return std::exp2(k) - 1.0;
          },
          [&](const auto&) { return 1.0; },
      },
      flat.base->kind());
}

}  // namespace

SequenceFamily SequenceFamily::geometric(Rational a, Rational q) {
  check_unit(a, "geometric a");
  check_unit(q, "geometric q");
  return SequenceFamily(Geometric{std::move(a), std::move(q)});
}

SequenceFamily SequenceFamily::power(Rational a, Rational gamma, Rational offset) {
  require(a > 0, ErrorCode::InvalidParameter, "power a must be positive");
  require(gamma > 0, ErrorCode::InvalidParameter, "power gamma must be positive");
  require(offset >= 0, ErrorCode::InvalidParameter, "power offset must be non-negative");
  require(compare_pow(1 + offset, gamma, a) > 0, ErrorCode::InvalidParameter,
          "power family needs a / (1 + offset)^gamma < 1");
  return SequenceFamily(Power{std::move(a), std::move(gamma), std::move(offset)});
}

SequenceFamily SequenceFamily::log_floor(Rational base) {
  check_unit(base, "log-floor base");
  return SequenceFamily(LogFloor{std::move(base)});
}

SequenceFamily SequenceFamily::constant(Rational a) {
  check_unit(a, "constant a");
  return SequenceFamily(Constant{std::move(a)});
}

SequenceFamily SequenceFamily::explicit_finite(std::vector<Rational> terms) {
  require(!terms.empty(), ErrorCode::InvalidParameter, "explicit family needs at least one term");
  for (const auto& t : terms) check_unit(t, "explicit term");
  return SequenceFamily(ExplicitFinite{std::move(terms)});
}

SequenceFamily SequenceFamily::scaled(Rational c, SequenceFamily inner) {
  require(c > 0, ErrorCode::InvalidParameter, "scale factor must be positive");
  require(compare_sup(inner, 1 / c) < 0, ErrorCode::InvalidParameter, "scaled family leaves (0,1)");
  return SequenceFamily(Scaled{std::move(c), std::make_shared<const SequenceFamily>(std::move(inner))});
}

bool SequenceFamily::is_symbolic() const {
  return !std::holds_alternative<ExplicitFinite>(flatten(*this).base->kind());
}

std::optional<std::uint64_t> SequenceFamily::length() const {
  if (auto* e = std::get_if<ExplicitFinite>(&flatten(*this).base->kind())) return e->terms.size();
  return std::nullopt;
}

std::string SequenceFamily::describe() const {
  return std::visit(
      overloaded{
          [](const Geometric& g) { return "geometric(a=" + to_string(g.a) + ", q=" + to_string(g.q) + ")"; },
          [](const Power& p) {
            return "power(a=" + to_string(p.a) + ", gamma=" + to_string(p.gamma) + ", offset=" + to_string(p.offset) +
                   ")";
          },
          [](const LogFloor& l) { return "logfloor(base=" + to_string(l.base) + ")"; },
          [](const Constant& c) { return "constant(a=" + to_string(c.a) + ")"; },
          [](const ExplicitFinite& e) { return "explicit(" + std::to_string(e.terms.size()) + " terms)"; },
          [](const Scaled& s) { return "scaled(c=" + to_string(s.c) + ", " + s.inner->describe() + ")"; },
      },
      kind_);
}

std::uint64_t log_floor_exponent(std::uint64_t j) {
  std::uint64_t x = j + 1;
  std::uint64_t k = 0;
  while (x >>= 1) ++k;
  return k;
}

Rational term(const SequenceFamily& f, std::uint64_t n) {
  require(n >= 1, ErrorCode::IndexOutOfRange, "sequence index starts at 1");
  Flat flat = flatten(f);
  Rational base = std::visit(
      overloaded{
          [&](const SequenceFamily::Geometric& g) -> Rational { return g.a * pow(g.q, static_cast<long>(n - 1)); },
          [&](const SequenceFamily::Power& p) -> Rational {
            Enclosure e = enclose::pow(Rational(n) + p.offset, -p.gamma);
            require(e.is_exact(), ErrorCode::InvalidParameter, "irrational power-family term; use term_pow");
            return Rational(p.a * e.lo);
          },
          [&](const SequenceFamily::LogFloor& l) -> Rational { return pow(l.base, static_cast<long>(log_floor_exponent(n))); },
          [&](const SequenceFamily::Constant& c) -> Rational { return c.a; },
          [&](const SequenceFamily::ExplicitFinite& e) -> Rational {
            require(n <= e.terms.size(), ErrorCode::IndexOutOfRange,
                    "index " + std::to_string(n) + " beyond explicit length " + std::to_string(e.terms.size()));
            return e.terms[n - 1];
          },
          [&](const SequenceFamily::Scaled&) -> Rational { fail(ErrorCode::InvalidParameter, "unflattened family"); },
      },
      flat.base->kind());
  return flat.factor * base;
}

Enclosure term_pow(const SequenceFamily& f, std::uint64_t n, const Rational& p) {
  Flat flat = flatten(f);
  if (auto* pw = std::get_if<SequenceFamily::Power>(&flat.base->kind())) {
    require(n >= 1, ErrorCode::IndexOutOfRange, "sequence index starts at 1");
    return enclose::pow(flat.factor * pw->a, p) * enclose::pow(Rational(n) + pw->offset, -pw->gamma * p);
  }
  return enclose::pow(term(f, n), p);
}

bool term_pow_less(const SequenceFamily& f, std::uint64_t n, const Rational& p, const Rational& bound) {
  require(bound > 0, ErrorCode::InvalidParameter, "bound must be positive");
  Flat flat = flatten(f);
  if (auto* pw = std::get_if<SequenceFamily::Power>(&flat.base->kind())) {
    // (k a)^p (n+off)^(-gamma p) < b  <=>  (k a)^(pL) < b^L (n+off)^(gamma p L)
    Rational gp = pw->gamma * p;
    Rational L(lcm(p.get_den(), gp.get_den()));
    Rational lhs = pow(flat.factor * pw->a, as_long(p * L));
    Rational rhs = pow(bound, as_long(L)) * pow(Rational(n) + pw->offset, as_long(gp * L));
    return lhs < rhs;
  }
  return compare_pow(term(f, n), p, bound) < 0;
}

int compare_sup(const SequenceFamily& f, const Rational& bound) {
  require(bound > 0, ErrorCode::InvalidParameter, "bound must be positive");
  Flat flat = flatten(f);
  Rational b = bound / flat.factor;
  return std::visit(
      overloaded{
          [&](const SequenceFamily::Power& p) { return -compare_pow(1 + p.offset, p.gamma, p.a / b); },
          [&](const SequenceFamily::ExplicitFinite& e) {
            Rational mx = e.terms.front();
            for (const auto& t : e.terms) mx = max(mx, t);
            return cmp(mx, b);
          },
          [&](const auto&) { return cmp(term(*flat.base, 1), b); },
      },
      flat.base->kind());
}

Summability classify_ellp(const SequenceFamily& f, const Rational& p) {
  require(p > 0, ErrorCode::InvalidParameter, "exponent p must be positive");
  Flat flat = flatten(f);
  return std::visit(
      overloaded{
          [](const SequenceFamily::Geometric&) { return Summability::Converges; },
          [&](const SequenceFamily::Power& pw) {
            return pw.gamma * p > 1 ? Summability::Converges : Summability::Diverges;
          },
          [&](const SequenceFamily::LogFloor& l) {
            // sum_k 2^k base^(kp) < infinity  <=>  base^p < 1/2
            return compare_pow(l.base, p, Rational(1, 2)) < 0 ? Summability::Converges : Summability::Diverges;
          },
          [](const SequenceFamily::Constant&) { return Summability::Diverges; },
          [](const SequenceFamily::ExplicitFinite&) -> Summability {
            fail(ErrorCode::Undecidable, "finite data cannot decide summability");
          },
          [](const SequenceFamily::Scaled&) -> Summability { fail(ErrorCode::InvalidParameter, "unflattened"); },
      },
      flat.base->kind());
}

Ell0Result classify_ell0(const SequenceFamily& f) {
  using S = Ell0Result::Status;
  Flat flat = flatten(f);
  return std::visit(
      overloaded{
          [](const SequenceFamily::Geometric&) { return Ell0Result{S::InEll0, std::nullopt}; },
          [](const SequenceFamily::Power& pw) { return Ell0Result{S::NotInEll0, Rational(1 / pw.gamma)}; },
          [](const SequenceFamily::LogFloor& l) {
            Rational p(1);
            while (compare_pow(l.base, p, Rational(1, 2)) < 0) p /= 2;
            return Ell0Result{S::NotInEll0, p};
          },
          [](const SequenceFamily::Constant&) { return Ell0Result{S::NotInEll0, Rational(1)}; },
          [](const SequenceFamily::ExplicitFinite&) { return Ell0Result{S::Undecidable, std::nullopt}; },
          [](const SequenceFamily::Scaled&) -> Ell0Result { fail(ErrorCode::InvalidParameter, "unflattened"); },
      },
      flat.base->kind());
}

Enclosure partial_sum(const SequenceFamily& f, const Rational& p, std::uint64_t N) {
  Enclosure sum = Enclosure::exact(0);
  // Exact while the rationals stay small, outward-rounded after that.
  for (std::uint64_t n = 1; n <= N; ++n) sum = enclose::outward(sum + term_pow(f, n, p), enclose::precision());
  return sum;
}

Enclosure tail_sum(const SequenceFamily& f, const Rational& p, std::uint64_t N) {
  if (classify_ellp(f, p) == Summability::Diverges)
    fail(ErrorCode::DivergentSeries, f.describe() + " is not p-summable at p=" + to_string(p));
  Flat flat = flatten(f);
  Enclosure factor = enclose::pow(flat.factor, p);
  Enclosure one = Enclosure::exact(1);
  Enclosure base = std::visit(
      overloaded{
          [&](const SequenceFamily::Geometric& g) {
            Enclosure ratio = enclose::pow(g.q, p);
            return term_pow(*flat.base, N + 1, p) / (one - ratio);
          },
          [&](const SequenceFamily::Power& pw) {
            // Convexity of x^(-delta): sum_{n>=L} g(n) <= int_{L-1/2}^inf g and >= int_L^inf g.
            Rational delta = pw.gamma * p;
            Enclosure scale = enclose::pow(pw.a, p) / Enclosure::exact(delta - 1);
            Rational from = Rational(N + 1) + pw.offset;
            Enclosure upper = scale * enclose::pow(from - Rational(1, 2), 1 - delta);
            Enclosure lower = scale * enclose::pow(from, 1 - delta);
            return Enclosure(lower.lo, upper.hi);
          },
          [&](const SequenceFamily::LogFloor& l) {
            // Block k holds the 2^k indices j with floor(log2(j+1)) = k.
            std::uint64_t k = log_floor_exponent(N + 1);
            Rational remaining = pow2(static_cast<long>(k) + 1) - 2 - Rational(N);
            Enclosure r = enclose::pow(l.base, p);
            Enclosure rk = enclose::pow(r, Rational(static_cast<long>(k)));
            Enclosure two_r = Enclosure::exact(2) * r;
            Enclosure rest = enclose::pow(two_r, Rational(static_cast<long>(k) + 1)) / (one - two_r);
            return Enclosure::exact(remaining) * rk + rest;
          },
          [](const auto&) -> Enclosure { fail(ErrorCode::InvalidParameter, "unreachable tail kind"); },
      },
      flat.base->kind());
  return factor * base;
}

std::optional<std::uint64_t> first_index_below(const SequenceFamily& f, const Rational& p, const Rational& bound,
                                               std::uint64_t from, std::uint64_t limit) {
  require(from >= 1 && from <= limit, ErrorCode::InvalidParameter, "bad search range");
  Flat flat = flatten(f);
  auto less = [&](std::uint64_t n) { return term_pow_less(f, n, p, bound); };
  if (auto* e = std::get_if<SequenceFamily::ExplicitFinite>(&flat.base->kind())) {
    for (std::uint64_t n = from; n <= std::min<std::uint64_t>(limit, e->terms.size()); ++n)
      if (less(n)) return n;
    return std::nullopt;
  }
  if (std::holds_alternative<SequenceFamily::Constant>(flat.base->kind()))
    return less(from) ? std::optional<std::uint64_t>(from) : std::nullopt;
  if (less(from)) return from;

  double est = estimate_first_index(flat, p, bound);
  std::uint64_t guess = from + 1;
  if (std::isfinite(est) && est > static_cast<double>(guess))
    guess = est >= static_cast<double>(limit) ? limit : static_cast<std::uint64_t>(est);
  std::uint64_t lo = from, hi = guess;  // invariant: !less(lo)
  if (!less(hi)) {
    lo = hi;
    std::uint64_t step = 1;
    for (;;) {
      if (hi == limit) return std::nullopt;
      hi = (limit - lo > step) ? lo + step : limit;
      if (less(hi)) break;
      lo = hi;
      step *= 2;
    }
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (less(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace dmlab::seq
