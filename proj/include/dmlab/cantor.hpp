#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dmlab/interval.hpp"
#include "dmlab/seq.hpp"

namespace dmlab::geom {

// Binary construction tree on [0,1]. Level 0 is [0,1]; every level-k node
// splits into two children of length (1 - beta_{k+1})/2 times its own,
// separated by the open middle gap of relative length beta_{k+1}.
// The full dyadic tree is the gapless case (all ratios zero, any depth).
class ConstructionTree {
 public:
  // Middle-interval Cantor tree C(beta) built to `depth` levels.
  static ConstructionTree cantor(const seq::SequenceFamily& beta, int depth);
  static ConstructionTree dyadic();

  bool gapless() const { return gapless_; }
  int depth() const;  // INT_MAX for the dyadic tree
  const std::optional<seq::SequenceFamily>& beta() const { return beta_; }

  // Relative gap removed when splitting nodes at `level` (= beta_{level+1}).
  Rational gap_ratio(int level) const;
  Rational node_length(int level) const;
  // Offset of the right child's left endpoint from its parent's left endpoint.
  Rational right_shift(int level) const;

  RationalInterval node(int level, std::uint64_t index) const;
  std::pair<RationalInterval, RationalInterval> children(const RationalInterval& parent, int level) const;
  // Open middle gap removed from `parent` (a level-`level` node).
  RationalInterval gap(const RationalInterval& parent, int level) const;

  std::vector<RationalInterval> level_nodes(int level) const;
  std::vector<RationalInterval> level_gaps(int level) const;
  Rational level_total_length(int level) const;

  // Largest gap ratio over the built levels (0 for the dyadic tree).
  Rational max_gap_ratio() const;
  // Largest ratio between consecutive construction scales, max 2/(1-beta_k);
  // reported as the realized perfectness constant D, never assumed.
  std::optional<Rational> perfectness_constant() const;

 private:
  ConstructionTree() = default;
  void check_level(int level) const;

  bool gapless_ = false;
  std::optional<seq::SequenceFamily> beta_;
  std::vector<Rational> ratios_;   // beta_1..beta_depth
  std::vector<Rational> lengths_;  // node length per level; unused when gapless
};

ConstructionTree build_cantor(const seq::SequenceFamily& beta, int depth);

}  // namespace dmlab::geom
