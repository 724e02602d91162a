#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmlab/cutout.hpp"
#include "dmlab/doubling.hpp"
#include "dmlab/enclosure.hpp"
#include "dmlab/kernels/leaf_histogram.hpp"
#include "dmlab/seq.hpp"
#include "dmlab/thick.hpp"

namespace dmlab::certify {

using seq::SequenceFamily;

// Enclosure of prod_{i>=1} (1 - x_i) split at N:
//   partial * tail_lower <= product <= partial * tail_upper.
struct ProductBracket {
  Enclosure partial;     // prod_{i<=N} (1 - x_i); exact for rational terms
  Rational tail_lower;   // max(0, 1 - sum_{i>N} x_i)
  Rational tail_upper;   // exp(-sum_{i>N} x_i); 0 when the sum diverges
  std::uint64_t N = 0;

  Rational lower() const { return partial.lo * tail_lower; }
  Rational upper() const { return partial.hi * tail_upper; }
};

// Terms x_1, x_2, ... of a product together with enclosures of their tails.
struct ProductSource {
  std::function<Enclosure(std::uint64_t i)> term;
  // Enclosure of sum_{i>N} x_i, or nullopt when the sum diverges.
  std::function<std::optional<Enclosure>(std::uint64_t N)> tail;
  std::optional<std::uint64_t> length;  // finite products
};

ProductBracket product_bracket(const ProductSource& src, std::uint64_t N);
ProductBracket product_bracket(const SequenceFamily& x, std::uint64_t N);
// Smallest N = 2^j * N_start whose bracket has a positive lower bound; throws
// TailTooLarge once N exceeds max_N.
ProductBracket product_bracket_auto(const SequenceFamily& x, std::uint64_t N_start = 16,
                                    std::uint64_t max_N = std::uint64_t{1} << 20);

enum class Conclusion { Positive, Inconclusive };

struct FatnessCertificate {
  SequenceFamily alpha;
  Rational t;
  Rational C3N;
  std::uint64_t N0 = 0;
  ProductBracket bound;
  Conclusion conclusion = Conclusion::Inconclusive;
  int verified_depth = 0;
};

// Least N0 with C3N alpha_n^t < 1 and the bracket of prod_{n>=N0}(1 - C3N alpha_n^t)
// truncated after `terms` factors. Throws FailsThickness if the structure does
// not verify and NotInEllT if sum alpha_n^t diverges.
FatnessCertificate certify_fat_thick(const geom::ThickStructure& ts, const Rational& t, const Rational& C3N,
                                     std::uint64_t terms = 256);

struct ThinnessCertificate {
  SequenceFamily alpha;
  Rational s;
  Rational c;
  Rational epsilon;
  seq::Summability divergence_witness = seq::Summability::Diverges;
  std::vector<Rational> decay_curve;  // u_1, u_2, ...: certified upper bounds on mu(F_n)/mu(F_0)
  std::uint64_t n_star = 0;           // least stage with u_n < epsilon
  std::uint64_t index_shift = 0;      // Power offset: stage n is sequence position n + shift
};

// u_n = prod_{k<=n}(1 - c alpha_k^s). Throws SeriesConverges when
// sum alpha_n^s < infinity and ProgressGuard after max_stages stages.
ThinnessCertificate certify_thin_porous(const SequenceFamily& alpha, const Rational& s, const Rational& c,
                                        const Rational& epsilon, std::uint64_t max_stages = 1000000);

// Lambda (D+2)^t 2^(1-tQ) < eps/6, checked with certified enclosures.
bool lemma41_check(const Rational& Lambda, const Rational& t, const Rational& D, const Rational& eps,
                   const Rational& Q);
// Least Q in (1/64)Z, Q >= 1/64, passing lemma41_check.
Rational lemma41_solve(const Rational& Lambda, const Rational& t, const Rational& D, const Rational& eps);

struct Lemma43Check {
  std::uint64_t N;
  Enclosure tail;   // sum_{m>=N} m^-delta
  Enclosure bound;  // eps / N^gamma
  bool holds;       // certified tail < bound
};

struct Lemma43Result {
  std::uint64_t M = 0;
  // Beyond this N the bound N^gamma (N-1/2)^(1-delta)/(delta-1) < eps
  // proves the inequality for every larger N.
  std::uint64_t monotone_from = 0;
  std::vector<Lemma43Check> checks;  // N = M-1 (when M > 1) and N in [M, 4M]
};

// sum_{m>=N} m^-delta enclosed by exact partial sums plus integral tails.
Enclosure zeta_tail(const Rational& delta, std::uint64_t N, std::uint64_t exact_terms = 64);

// Least M with sum_{m>=N} m^-delta < eps / N^gamma for all N >= M. Throws
// PreconditionViolated unless delta > gamma + 1 > 1.
Lemma43Result lemma43_find_M(const Rational& eps, const Rational& delta, const Rational& gamma);

struct Thm11Bound {
  Rational value;            // certified lower bound on nu(E)
  Rational first_term;       // lower bound on C1 N^(-R s)
  Rational subtracted;       // upper bound on c_p^(t/p) C2 sum_{m>=N} m^(-t/p)
  Rational c_p_upper;        // upper bound on sum diam(B_k)^p
  Rational zeta_upper;       // upper bound on sum_{m>=N} m^(-t/p)
  Rational gap_diameter;
  Conclusion conclusion = Conclusion::Inconclusive;
};

// C1 N^(-Rs) - c_p^(t/p) C2 sum_{m>=N} m^(-t/p) with (lambda, s, Lambda, t) from
// the report's scale fit. Throws ExponentWindowEmpty when p >= t/(Rs+1),
// GapTooSmall when the largest gap of E_N is below N^-R.
Thm11Bound thm11_bound(const geom::CutOutConfig& config, const doubling::DoublingReport& nu, const Rational& R,
                       std::uint64_t N, const Rational& p);
Thm11Bound thm11_bound(const geom::CutOutConfig& config, const doubling::Lemma21Fit& fit, const Rational& R,
                       std::uint64_t N, const Rational& p);

// C3 = c^-t C1 C2 C^m, upper enclosure.
Enclosure assemble_C3(const Rational& c, const Rational& t, const Rational& C1, const Rational& C2, const Rational& C,
                      long m);

// Removal schedule: m_j = floor(log2(j+1)), k_1 = 1, k_{j+1} = k_j + m_j.
struct Example54Schedule {
  std::vector<std::uint64_t> m;  // m_1..m_J
  std::vector<std::uint64_t> k;  // k_1..k_{J+1}
  int leaf_depth() const { return static_cast<int>(k.back()) - 1; }
};
Example54Schedule example54_schedule(int stages);
// Leaf schedule for the brute-force enumeration: stage j removes the leaves
// whose path turns left at every level k_j .. k_{j+1}-1.
kernels::LeafSchedule example54_leaf_schedule(int stages);

Rational example54_partial(const Rational& p, int stages);
// Surviving mass after each of the stages 1..J computed from one leaf
// enumeration at the depth of stage J.
std::vector<Rational> example54_brute_force(const Rational& p, int stages, unsigned workers = 1);
// Same, from an existing histogram (several p values share one enumeration).
std::vector<Rational> example54_masses(const std::vector<std::uint64_t>& histogram,
                                       const kernels::LeafSchedule& schedule, const Rational& p);

enum class LimitVerdict { PositiveLimit, ZeroLimit };

struct Example54Result {
  Rational p;
  int stages = 0;
  Rational partial;                    // prod_{i<=stages}(1 - p^{m_i})
  std::optional<Rational> brute_force;  // tree mass of the surviving set
  LimitVerdict verdict = LimitVerdict::ZeroLimit;
  // PositiveLimit: bracket of the full product from `limit_terms` factors.
  std::optional<ProductBracket> limit;
  // ZeroLimit: least stage with partial product below zero_threshold.
  std::optional<std::uint64_t> zero_stage;
  std::optional<Rational> zero_stage_partial;
};

struct Example54Options {
  bool brute_force = true;
  std::uint64_t limit_terms = 4096;
  Rational zero_threshold = Rational(1, 1000000);
  std::uint64_t max_zero_stage = std::uint64_t{1} << 22;
};

Example54Result example54_mass(const Rational& p, int stages, const Example54Options& options = {});

enum class Example51Verdict { Thin, Fat };

// Intervals of [0,1] that stand for [0,T] rescaled; their true lengths are
// T |I_i|. With a declared family the prefix must have lengths alpha_i and the
// family must sum to T. Without one the list is the whole family.
Example51Verdict example51_verdict(const std::vector<geom::RationalInterval>& intervals, const Rational& T = 1,
                                   const std::optional<SequenceFamily>& family = std::nullopt);

std::string to_string(Conclusion c);
std::string to_string(LimitVerdict v);
std::string to_string(Example51Verdict v);

}  // namespace dmlab::certify
