#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dmlab/enclosure.hpp"
#include "dmlab/rational.hpp"

namespace dmlab::seq {

// A positive sequence alpha_n in (0,1), n >= 1, given symbolically so that
// summability questions about its infinite tail can be decided exactly.
class SequenceFamily {
 public:
  // alpha_n = a * q^(n-1)
  struct Geometric {
    Rational a, q;
  };
  // alpha_n = a / (n + offset)^gamma
  struct Power {
    Rational a, gamma, offset;
  };
  // alpha_n = base^m_n with m_n = floor(log2(n + 1))
  struct LogFloor {
    Rational base;
  };
  // alpha_n = a
  struct Constant {
    Rational a;
  };
  // alpha_1..alpha_len; diagnostics only
  struct ExplicitFinite {
    std::vector<Rational> terms;
  };
  // alpha_n = c * inner_n
  struct Scaled {
    Rational c;
    std::shared_ptr<const SequenceFamily> inner;
  };

  using Kind = std::variant<Geometric, Power, LogFloor, Constant, ExplicitFinite, Scaled>;

  static SequenceFamily geometric(Rational a, Rational q);
  static SequenceFamily power(Rational a, Rational gamma, Rational offset = 0);
  static SequenceFamily log_floor(Rational base);
  static SequenceFamily constant(Rational a);
  static SequenceFamily explicit_finite(std::vector<Rational> terms);
  static SequenceFamily scaled(Rational c, SequenceFamily inner);

  const Kind& kind() const { return kind_; }
  bool is_symbolic() const;
  // Number of terms for ExplicitFinite, nullopt for infinite families.
  std::optional<std::uint64_t> length() const;
  std::string describe() const;

 private:
  explicit SequenceFamily(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

enum class Summability { Converges, Diverges };

struct Ell0Result {
  enum class Status { InEll0, NotInEll0, Undecidable };
  Status status;
  std::optional<Rational> witness;  // exponent p with sum alpha_n^p = infinity
};

// m_j = floor(log2(j + 1))
std::uint64_t log_floor_exponent(std::uint64_t j);

// alpha_n exactly. Throws InvalidParameter when the term is irrational
// (a Power family with a non-integral gamma that has no exact root).
Rational term(const SequenceFamily& f, std::uint64_t n);

// alpha_n^p, exact whenever possible.
Enclosure term_pow(const SequenceFamily& f, std::uint64_t n, const Rational& p);

// Exact decision of alpha_n^p < bound.
bool term_pow_less(const SequenceFamily& f, std::uint64_t n, const Rational& p, const Rational& bound);

// Sign of sup_n alpha_n - bound. All symbolic families are non-increasing, so
// the supremum is alpha_1; ExplicitFinite uses its maximum.
int compare_sup(const SequenceFamily& f, const Rational& bound);

Summability classify_ellp(const SequenceFamily& f, const Rational& p);
Ell0Result classify_ell0(const SequenceFamily& f);

// sum_{n=1}^{N} alpha_n^p
Enclosure partial_sum(const SequenceFamily& f, const Rational& p, std::uint64_t N);

// Enclosure of sum_{n>N} alpha_n^p: closed form for Geometric and LogFloor,
// integral comparison for Power. Throws DivergentSeries if the series diverges.
Enclosure tail_sum(const SequenceFamily& f, const Rational& p, std::uint64_t N);

inline Rational tail_sum_upper(const SequenceFamily& f, const Rational& p, std::uint64_t N) {
  return tail_sum(f, p, N).hi;
}

// Least n >= from with alpha_n^p < bound, searching up to `limit`.
std::optional<std::uint64_t> first_index_below(const SequenceFamily& f, const Rational& p,
                                               const Rational& bound, std::uint64_t from = 1,
                                               std::uint64_t limit = std::uint64_t{1} << 62);

}  // namespace dmlab::seq
