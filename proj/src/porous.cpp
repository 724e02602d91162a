#include "dmlab/porous.hpp"

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::geom {

namespace {

// Dyadic level of a piece of length 2^-a.
long level_of(const RationalInterval& q) { return -floor_log2(q.diameter()); }

}  // namespace

PorousConstruction build_porous(const seq::SequenceFamily& alpha, int stages, int max_level) {
  require(stages >= 0, ErrorCode::InvalidParameter, "stage count must be non-negative");
  PorousConstruction out{alpha, {{RationalInterval(0, 1)}}, {}};
  for (int n = 1; n <= stages; ++n) {
    // Smallest k >= 1 with 2^-k <= alpha_n; the removed length is 2^-(a+k).
    long k = 1;
    while (seq::term_pow_less(alpha, static_cast<std::uint64_t>(n), 1, pow2(-k))) {
      if (++k > max_level) break;
    }
    std::vector<RationalInterval> next, removed;
    for (const auto& q : out.stages.back()) {
      long a = level_of(q);
      if (a + k > max_level)
        fail(ErrorCode::ResolutionExhausted, "stage " + std::to_string(n) + " needs dyadic level " +
                                                 std::to_string(a + k) + " > " + std::to_string(max_level));
      Rational len = pow2(-(a + k));
      removed.emplace_back(q.lo, q.lo + len);
      // [lo+L, lo+2L], [lo+2L, lo+4L], ..., [mid, hi]
      Rational piece = len;
      Rational start = q.lo + len;
      bool first = true;
      while (start < q.hi) {
        next.emplace_back(start, start + piece, first, q.hi_open && start + piece == q.hi);
        first = false;
        start += piece;
        piece *= 2;
      }
      check_nodes(next.size(), "build_porous");
    }
    out.stages.push_back(std::move(next));
    out.removed.push_back(std::move(removed));
  }
  return out;
}

}  // namespace dmlab::geom
