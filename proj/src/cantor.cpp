#include "dmlab/cantor.hpp"

#include <climits>

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::geom {

ConstructionTree ConstructionTree::cantor(const seq::SequenceFamily& beta, int depth) {
  require(depth >= 0, ErrorCode::InvalidParameter, "depth must be non-negative");
  check_depth(depth, "build_cantor");
  ConstructionTree t;
  t.beta_ = beta;
  t.lengths_.push_back(Rational(1));
  for (int k = 1; k <= depth; ++k) {
    Rational b = seq::term(beta, static_cast<std::uint64_t>(k));
    t.ratios_.push_back(b);
    t.lengths_.push_back(t.lengths_.back() * (1 - b) / 2);
  }
  return t;
}

ConstructionTree ConstructionTree::dyadic() {
  ConstructionTree t;
  t.gapless_ = true;
  return t;
}

ConstructionTree build_cantor(const seq::SequenceFamily& beta, int depth) {
  return ConstructionTree::cantor(beta, depth);
}

int ConstructionTree::depth() const { return gapless_ ? INT_MAX : static_cast<int>(ratios_.size()); }

void ConstructionTree::check_level(int level) const {
  require(level >= 0 && level <= depth(), ErrorCode::InvalidNode,
          "level " + std::to_string(level) + " outside tree of depth " + std::to_string(depth()));
}

Rational ConstructionTree::gap_ratio(int level) const {
  require(level >= 0 && level < depth(), ErrorCode::InvalidNode, "no split below level " + std::to_string(level));
  return gapless_ ? Rational(0) : ratios_[static_cast<std::size_t>(level)];
}

Rational ConstructionTree::node_length(int level) const {
  check_level(level);
  if (gapless_) return pow2(-level);
  return lengths_[static_cast<std::size_t>(level)];
}

Rational ConstructionTree::right_shift(int level) const { return node_length(level) - node_length(level + 1); }

RationalInterval ConstructionTree::node(int level, std::uint64_t index) const {
  check_level(level);
  require(level < 64 && index < (std::uint64_t{1} << level), ErrorCode::InvalidNode,
          "node index " + std::to_string(index) + " out of range at level " + std::to_string(level));
  Rational lo = 0;
  for (int k = 0; k < level; ++k) {
    if ((index >> (level - 1 - k)) & 1u) lo += right_shift(k);
  }
  return RationalInterval(lo, lo + node_length(level));
}

std::pair<RationalInterval, RationalInterval> ConstructionTree::children(const RationalInterval& parent,
                                                                         int level) const {
  Rational child = node_length(level + 1);
  return {RationalInterval(parent.lo, parent.lo + child), RationalInterval(parent.hi - child, parent.hi)};
}

RationalInterval ConstructionTree::gap(const RationalInterval& parent, int level) const {
  Rational child = node_length(level + 1);
  return RationalInterval(parent.lo + child, parent.hi - child, true, true);
}

std::vector<RationalInterval> ConstructionTree::level_nodes(int level) const {
  check_level(level);
  require(level < 63, ErrorCode::DepthLimit, "level too deep to materialize");
  check_nodes(std::size_t{1} << level, "level_nodes");
  std::vector<RationalInterval> nodes{RationalInterval(0, 1)};
  for (int k = 0; k < level; ++k) {
    std::vector<RationalInterval> next;
    next.reserve(nodes.size() * 2);
    for (const auto& n : nodes) {
      auto [l, r] = children(n, k);
      next.push_back(std::move(l));
      next.push_back(std::move(r));
    }
    nodes = std::move(next);
  }
  return nodes;
}

std::vector<RationalInterval> ConstructionTree::level_gaps(int level) const {
  std::vector<RationalInterval> gaps;
  for (const auto& n : level_nodes(level)) gaps.push_back(gap(n, level));
  return gaps;
}

Rational ConstructionTree::level_total_length(int level) const {
  check_level(level);
  return node_length(level) * pow2(level);
}

Rational ConstructionTree::max_gap_ratio() const {
  Rational m = 0;
  for (const auto& r : ratios_) m = max(m, r);
  return m;
}

std::optional<Rational> ConstructionTree::perfectness_constant() const {
  if (gapless_) return Rational(2);
  if (ratios_.empty()) return std::nullopt;
  return 2 / (1 - max_gap_ratio());
}

}  // namespace dmlab::geom
