#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "dmlab/cantor.hpp"
#include "dmlab/cutout.hpp"

namespace dmlab::measure {

using geom::ConstructionTree;
using geom::RationalInterval;

// Measure on the closure of a construction tree, defined by the fraction of
// each node's mass that goes to its left child.
class TreeMeasure {
 public:
  struct Binomial {
    Rational p;
  };
  // weights[k][i] is the left fraction of node (k, i) for k < weights.size();
  // deeper nodes split with `fill`.
  struct WeightTable {
    std::vector<std::vector<Rational>> weights;
    Rational fill = Rational(1, 2);
  };
  using Weights = std::variant<Binomial, WeightTable>;

  static TreeMeasure binomial(Rational p, std::shared_ptr<const ConstructionTree> tree = nullptr);
  static TreeMeasure lebesgue() { return binomial(Rational(1, 2)); }
  static TreeMeasure table(WeightTable table, std::shared_ptr<const ConstructionTree> tree = nullptr,
                           Rational total_mass = 1);

  const ConstructionTree& tree() const { return *tree_; }
  std::shared_ptr<const ConstructionTree> tree_ptr() const { return tree_; }
  const Weights& weights() const { return weights_; }
  const Rational& total_mass() const { return total_; }
  bool is_binomial() const { return std::holds_alternative<Binomial>(weights_); }

  // Left fraction of node (level, index).
  Rational weight(int level, std::uint64_t index) const;
  // Deepest level whose nodes carry mass (INT_MAX on the dyadic tree).
  int depth() const { return tree_->depth(); }

 private:
  TreeMeasure(std::shared_ptr<const ConstructionTree> tree, Weights w, Rational total);

  std::shared_ptr<const ConstructionTree> tree_;
  Weights weights_;
  Rational total_;
};

struct MassBracket {
  Rational lower;
  Rational upper;

  bool exact() const { return lower == upper; }
  Rational width() const { return upper - lower; }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }
  friend bool operator==(const MassBracket&, const MassBracket&) = default;
};

MassBracket operator+(const MassBracket& a, const MassBracket& b);

// Exact mass of node (level, index): total mass times the edge weights along
// the root path.
Rational node_mass(const TreeMeasure& m, int level, std::uint64_t index);

// Lower: depth-level nodes inside I; upper: depth-level nodes whose interior
// meets I.
MassBracket interval_mass(const TreeMeasure& m, const RationalInterval& I, int depth);

MassBracket cutout_mass(const TreeMeasure& m, const geom::CutOutConfig& config, std::size_t N, int depth);

// Bracket for mu([0, x]).
MassBracket cdf(const TreeMeasure& m, const Rational& x, int depth);

// Measure on `tree` whose nodes carry the masses m gives to the tree's
// level-D approximation (D = tree depth); left fractions are conditional
// masses of the surviving children. Throws Misaligned unless every node of
// `tree` is a union of nodes of m's tree. A depth-0 tree returns m.
TreeMeasure restrict(const TreeMeasure& m, const ConstructionTree& tree);

// Depth-level leaves in left-to-right order with their exact masses.
struct Leaf {
  Rational lo, hi, mass;
};
std::vector<Leaf> leaves(const TreeMeasure& m, int depth);

// Cumulative masses of the depth-level leaves, answering mu([0,x]) and
// mu([u,v]) brackets by binary search (constant time at grid points of the
// dyadic tree).
class CdfTable {
 public:
  CdfTable(const TreeMeasure& m, int depth);

  int depth() const { return depth_; }
  const Rational& total() const { return prefix_.back(); }
  MassBracket cdf(const Rational& x) const;
  // Bracket for mu of the closed interval [u, v] (clipped to [0, 1]).
  MassBracket mass(const Rational& u, const Rational& v) const;

 private:
  // Number of leaves with hi <= x, and with lo < x.
  std::size_t count_below(const Rational& x) const;
  std::size_t count_starting_before(const Rational& x) const;

  int depth_;
  bool gapless_;
  std::vector<Rational> lo_, hi_;
  std::vector<Rational> prefix_;  // prefix_[i] = mass of the first i leaves
};

}  // namespace dmlab::measure
