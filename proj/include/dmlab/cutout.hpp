#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dmlab/cantor.hpp"

namespace dmlab::geom {

// Closed balls B_1, B_2, ... removed from an ambient space X, which is either
// [0,1] or the level-`ambient_depth` approximation of a construction tree.
struct CutOutConfig {
  std::vector<RationalInterval> balls;
  // Declares diam(B_i) <= alpha_i; checked by validate().
  std::optional<seq::SequenceFamily> diam_family;
  std::shared_ptr<const ConstructionTree> tree;  // null: X = [0,1]
  int ambient_depth = 0;

  // Throws InvalidParameter if a ball is not closed, exceeds its declared
  // diameter, or misses the ambient space.
  void validate() const;
  std::vector<RationalInterval> ambient_pieces() const;
};

CutOutConfig make_unit_config(std::vector<RationalInterval> balls,
                              std::optional<seq::SequenceFamily> diam_family = std::nullopt);
CutOutConfig make_tree_config(std::vector<RationalInterval> balls, std::shared_ptr<const ConstructionTree> tree,
                              int ambient_depth, std::optional<seq::SequenceFamily> diam_family = std::nullopt);

// Stable reorder so diameters are non-increasing.
CutOutConfig normalize_order(CutOutConfig config);

// E_N = X minus the first N balls, as sorted disjoint intervals.
std::vector<RationalInterval> remaining_set(const CutOutConfig& config, std::size_t N);

struct Gap {
  RationalInterval interval;
  Rational diameter;
};

// Leftmost component of maximal diameter of E_N. Throws EmptyRemainder.
Gap largest_gap(const CutOutConfig& config, std::size_t N);

// Open zeta-neighbourhoods B_i(zeta) of the first N balls, clipped to [0,1]
// and returned unmerged.
std::vector<RationalInterval> inflate(const CutOutConfig& config, std::size_t N, const Rational& zeta);

}  // namespace dmlab::geom
