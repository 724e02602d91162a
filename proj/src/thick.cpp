#include "dmlab/thick.hpp"

#include <algorithm>

#include "dmlab/error.hpp"

namespace dmlab::geom {

namespace {

ThickVerdict violation(int condition, int level, std::uint64_t index, std::string detail) {
  return {false, condition, level, index, std::move(detail)};
}

// Largest number of closed intervals sharing a point.
int max_overlap(const std::vector<ThickPiece>& pieces) {
  std::vector<std::pair<Rational, int>> events;
  events.reserve(pieces.size() * 2);
  for (const auto& p : pieces) {
    events.emplace_back(p.outer.lo, +1);
    events.emplace_back(p.outer.hi, -1);
  }
  // Starts before ends at equal coordinates: closed intervals touching share a point.
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  int depth = 0, best = 0;
  for (const auto& [x, d] : events) best = std::max(best, depth += d);
  return best;
}

// Union of open intervals, sorted and disjoint.
std::vector<RationalInterval> merge_open(std::vector<RationalInterval> holes) {
  std::sort(holes.begin(), holes.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::vector<RationalInterval> out;
  for (auto& h : holes) {
    if (h.lo == h.hi) continue;
    if (!out.empty() && h.lo < out.back().hi) {
      if (h.hi > out.back().hi) out.back().hi = h.hi;
    } else {
      out.push_back(RationalInterval(h.lo, h.hi, true, true));
    }
  }
  return out;
}

bool meets_open(const std::vector<RationalInterval>& holes, const Rational& lo, const Rational& hi) {
  auto it = std::upper_bound(holes.begin(), holes.end(), lo,
                             [](const Rational& x, const RationalInterval& h) { return x < h.hi; });
  return it != holes.end() && it->lo < hi;
}

}  // namespace

ThickStructure thick_from_cantor(const ConstructionTree& tree, const Rational& tolerance) {
  require(!tree.gapless() && tree.beta(), ErrorCode::InvalidParameter, "thick structure needs a Cantor tree");
  Rational beta_max = tree.max_gap_ratio();
  if (beta_max >= 1 - tolerance)
    fail(ErrorCode::FailsThickness, "gap ratio " + to_string(beta_max) + " leaves no room for witness balls");
  ThickStructure ts{{}, 1, min(Rational(1), (1 - beta_max) / 4), *tree.beta(), {}};
  for (int level = 0; level < tree.depth(); ++level) {
    std::vector<ThickPiece> stage;
    for (const auto& node : tree.level_nodes(level)) {
      auto [left, right] = tree.children(node, level);
      stage.push_back({node, tree.gap(node, level), (left.lo + left.hi) / 2});
    }
    ts.levels.push_back(std::move(stage));
  }
  ts.target = tree.level_nodes(tree.depth());
  return ts;
}

ThickVerdict verify_thick(const ThickStructure& ts, int depth) {
  require(ts.c > 0 && ts.c <= 1, ErrorCode::InvalidParameter, "thickness constant c must lie in (0,1]");
  const int stages = std::min<int>(depth, static_cast<int>(ts.levels.size()));
  std::vector<RationalInterval> earlier_holes;

  for (int n = 1; n <= stages; ++n) {
    const auto& stage = ts.levels[static_cast<std::size_t>(n - 1)];
    auto previous = merge_open(earlier_holes);
    for (std::size_t j = 0; j < stage.size(); ++j) {
      const auto& p = stage[j];
      // 1: every I lies in the bounded ambient [0,1] by construction of RationalInterval.
      if (!p.outer.covers(p.hole)) return violation(3, n, j, "J is not inside I");
      // 3: c diam(J) <= alpha_n diam(I)
      Rational dI = p.outer.diameter(), dJ = p.hole.diameter();
      if (dJ > 0 && (dI == 0 || seq::term_pow_less(ts.alpha, static_cast<std::uint64_t>(n), 1, ts.c * dJ / dI)))
        return violation(3, n, j, "c diam(J) exceeds alpha_n diam(I)");
      // 4: B(x, c diam I) inside I and clear of all earlier holes
      Rational delta = ts.c * dI;
      Rational lo = p.center - delta, hi = p.center + delta;
      if (delta <= 0 || lo < p.outer.lo || hi > p.outer.hi)
        return violation(4, n, j, "witness ball leaves I");
      if (meets_open(previous, lo, hi)) return violation(4, n, j, "witness ball meets an earlier J");
    }
    // 2: bounded overlap
    if (int k = max_overlap(stage); k > ts.overlap_bound)
      return violation(2, n, 0, std::to_string(k) + " sets I share a point, bound is " +
                                    std::to_string(ts.overlap_bound));
    for (const auto& p : stage) earlier_holes.push_back(p.hole);
  }

  // 5: E_0 minus every hole lies in the declared target.
  std::vector<RationalInterval> outers;
  for (const auto& stage : ts.levels)
    for (const auto& p : stage) outers.push_back(p.outer);
  std::vector<RationalInterval> holes;
  for (const auto& stage : ts.levels)
    for (const auto& p : stage) holes.push_back(p.hole);
  auto all_holes = merge_open(std::move(holes));
  auto target = merge_closed(ts.target);
  for (const auto& piece : merge_closed(std::move(outers))) {
    for (const auto& rest : subtract_open(piece, all_holes)) {
      bool inside = std::any_of(target.begin(), target.end(), [&](const auto& t) { return t.covers(rest); });
      if (!inside)
        return violation(5, 0, 0, "point set [" + to_string(rest.lo) + ", " + to_string(rest.hi) + "] outside E");
    }
  }
  return {};
}

}  // namespace dmlab::geom
