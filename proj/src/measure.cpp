#include "dmlab/measure.hpp"

#include <algorithm>
#include <bit>

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::measure {

namespace {

std::shared_ptr<const ConstructionTree> shared_dyadic() {
  static const auto tree = std::make_shared<const ConstructionTree>(ConstructionTree::dyadic());
  return tree;
}

void check_fraction(const Rational& w, const char* what) {
  require(w > 0 && w < 1, ErrorCode::InvalidParameter, std::string(what) + " must lie in (0,1), got " + to_string(w));
}

void check_eval_depth(const TreeMeasure& m, int depth, const char* what) {
  require(depth >= 0, ErrorCode::InvalidParameter, std::string(what) + ": negative depth");
  require(depth <= m.depth(), ErrorCode::DepthLimit,
          std::string(what) + ": depth " + std::to_string(depth) + " beyond the tree depth");
  check_depth(depth, what);
}

void accumulate(const TreeMeasure& m, const RationalInterval& I, int depth, int level, std::uint64_t index,
                const RationalInterval& node, const Rational& mass, Rational& lo, Rational& hi) {
  if (I.covers(node)) {
    lo += mass;
    hi += mass;
    return;
  }
  if (!node.overlaps_interior(I)) return;
  if (level == depth) {
    hi += mass;
    return;
  }
  const ConstructionTree& t = m.tree();
  auto [left, right] = t.children(node, level);
  Rational w = m.weight(level, index);
  Rational lm = mass * w;
  accumulate(m, I, depth, level + 1, 2 * index, left, lm, lo, hi);
  accumulate(m, I, depth, level + 1, 2 * index + 1, right, mass - lm, lo, hi);
}

// Smallest k with x * 2^k integral, or -1 when the denominator is not a power of two.
long dyadic_order(const Rational& x) {
  const Integer& d = x.get_den();
  if (mpz_popcount(d.get_mpz_t()) != 1) return -1;
  return static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1;
}

}  // namespace

TreeMeasure::TreeMeasure(std::shared_ptr<const ConstructionTree> tree, Weights w, Rational total)
    : tree_(tree ? std::move(tree) : shared_dyadic()), weights_(std::move(w)), total_(std::move(total)) {
  require(total_ > 0, ErrorCode::InvalidParameter, "total mass must be positive");
}

TreeMeasure TreeMeasure::binomial(Rational p, std::shared_ptr<const ConstructionTree> tree) {
  check_fraction(p, "binomial weight p");
  return TreeMeasure(std::move(tree), Binomial{std::move(p)}, 1);
}

TreeMeasure TreeMeasure::table(WeightTable table, std::shared_ptr<const ConstructionTree> tree, Rational total_mass) {
  check_fraction(table.fill, "fill weight");
  TreeMeasure m(std::move(tree), WeightTable{}, std::move(total_mass));
  require(static_cast<long>(table.weights.size()) <= static_cast<long>(m.tree_->depth()), ErrorCode::InvalidParameter,
          "weight table deeper than the tree");
  for (std::size_t k = 0; k < table.weights.size(); ++k) {
    require(k < 63 && table.weights[k].size() == (std::size_t{1} << k), ErrorCode::InvalidParameter,
            "weight table level " + std::to_string(k) + " must have 2^k entries");
    for (const auto& w : table.weights[k]) check_fraction(w, "table weight");
  }
  m.weights_ = std::move(table);
  return m;
}

Rational TreeMeasure::weight(int level, std::uint64_t index) const {
  require(level >= 0 && level < depth(), ErrorCode::InvalidNode, "node at level " + std::to_string(level) + " has no children");
  require(level >= 63 || index < (std::uint64_t{1} << level), ErrorCode::InvalidNode, "node index out of range");
  if (const auto* b = std::get_if<Binomial>(&weights_)) return b->p;
  const auto& t = std::get<WeightTable>(weights_);
  if (static_cast<std::size_t>(level) < t.weights.size()) return t.weights[static_cast<std::size_t>(level)][index];
  return t.fill;
}

MassBracket operator+(const MassBracket& a, const MassBracket& b) { return {a.lower + b.lower, a.upper + b.upper}; }

Rational node_mass(const TreeMeasure& m, int level, std::uint64_t index) {
  require(level >= 0 && level <= m.depth() && level < 63, ErrorCode::InvalidNode,
          "no node at level " + std::to_string(level));
  require(index < (std::uint64_t{1} << level), ErrorCode::InvalidNode,
          "node index " + std::to_string(index) + " out of range at level " + std::to_string(level));
  if (const auto* b = std::get_if<TreeMeasure::Binomial>(&m.weights())) {
    long ones = std::popcount(index);
    return m.total_mass() * pow(b->p, level - ones) * pow(1 - b->p, ones);
  }
  Rational mass = m.total_mass();
  std::uint64_t prefix = 0;
  for (int k = 0; k < level; ++k) {
    bool right = (index >> (level - 1 - k)) & 1u;
    Rational w = m.weight(k, prefix);
    mass *= right ? Rational(1 - w) : w;
    prefix = 2 * prefix + (right ? 1 : 0);
  }
  return mass;
}

MassBracket interval_mass(const TreeMeasure& m, const RationalInterval& I, int depth) {
  check_eval_depth(m, depth, "interval_mass");
  Rational lo = 0, hi = 0;
  accumulate(m, I, depth, 0, 0, RationalInterval(0, 1), m.total_mass(), lo, hi);
  return {lo, hi};
}

MassBracket cutout_mass(const TreeMeasure& m, const geom::CutOutConfig& config, std::size_t N, int depth) {
  MassBracket total{0, 0};
  for (const auto& piece : geom::remaining_set(config, N)) total = total + interval_mass(m, piece, depth);
  return total;
}

MassBracket cdf(const TreeMeasure& m, const Rational& x, int depth) {
  require(x >= 0 && x <= 1, ErrorCode::InvalidParameter, "cdf point outside [0,1]");
  return interval_mass(m, RationalInterval(0, x), depth);
}

std::vector<Leaf> leaves(const TreeMeasure& m, int depth) {
  check_eval_depth(m, depth, "leaves");
  check_nodes(std::size_t{1} << depth, "leaves");
  std::vector<Leaf> cur{{0, 1, m.total_mass()}};
  const ConstructionTree& t = m.tree();
  for (int level = 0; level < depth; ++level) {
    std::vector<Leaf> next;
    next.reserve(cur.size() * 2);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      auto [l, r] = t.children(RationalInterval(cur[i].lo, cur[i].hi), level);
      Rational lm = cur[i].mass * m.weight(level, i);
      Rational rm = cur[i].mass - lm;
      next.push_back({l.lo, l.hi, std::move(lm)});
      next.push_back({r.lo, r.hi, std::move(rm)});
    }
    cur = std::move(next);
  }
  return cur;
}

TreeMeasure restrict(const TreeMeasure& m, const ConstructionTree& tree) {
  require(!tree.gapless(), ErrorCode::InvalidParameter, "restriction target must be a Cantor tree");
  const int D = tree.depth();
  if (D == 0) return m;
  check_nodes(std::size_t{1} << D, "restrict");
  auto nodes = tree.level_nodes(D);

  int resolution = 0;
  if (m.tree().gapless()) {
    for (const auto& n : nodes) {
      long a = dyadic_order(n.lo), b = dyadic_order(n.hi);
      require(a >= 0 && b >= 0, ErrorCode::Misaligned, "tree node endpoints are not dyadic");
      resolution = static_cast<int>(std::max<long>({resolution, a, b}));
    }
  } else {
    resolution = m.depth();
  }
  require(resolution <= limits().max_depth, ErrorCode::Misaligned, "tree nodes finer than the depth cap");

  std::vector<std::vector<Rational>> mass(static_cast<std::size_t>(D) + 1);
  mass[static_cast<std::size_t>(D)].reserve(nodes.size());
  for (const auto& n : nodes) {
    MassBracket b = interval_mass(m, n, resolution);
    require(b.exact(), ErrorCode::Misaligned, "tree node is not a union of measure-tree nodes");
    mass[static_cast<std::size_t>(D)].push_back(b.lower);
  }
  for (int k = D - 1; k >= 0; --k) {
    const auto& below = mass[static_cast<std::size_t>(k) + 1];
    auto& here = mass[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < below.size() / 2; ++i) here.push_back(below[2 * i] + below[2 * i + 1]);
  }
  TreeMeasure::WeightTable table;
  for (int k = 0; k < D; ++k) {
    std::vector<Rational> row;
    const auto& here = mass[static_cast<std::size_t>(k)];
    const auto& below = mass[static_cast<std::size_t>(k) + 1];
    for (std::size_t i = 0; i < here.size(); ++i) row.push_back(below[2 * i] / here[i]);
    table.weights.push_back(std::move(row));
  }
  return TreeMeasure::table(std::move(table), std::make_shared<const ConstructionTree>(tree), mass[0][0]);
}

CdfTable::CdfTable(const TreeMeasure& m, int depth) : depth_(depth), gapless_(m.tree().gapless()) {
  auto ls = leaves(m, depth);
  lo_.reserve(ls.size());
  hi_.reserve(ls.size());
  prefix_.reserve(ls.size() + 1);
  prefix_.push_back(0);
  for (auto& l : ls) {
    lo_.push_back(std::move(l.lo));
    hi_.push_back(std::move(l.hi));
    prefix_.push_back(prefix_.back() + l.mass);
  }
}

std::size_t CdfTable::count_below(const Rational& x) const {
  if (gapless_) {
    if (x <= 0) return 0;
    if (x >= 1) return lo_.size();
    Rational t = x * pow2(depth_);
    return static_cast<std::size_t>(floor(t).get_ui());
  }
  return static_cast<std::size_t>(std::upper_bound(hi_.begin(), hi_.end(), x) - hi_.begin());
}

std::size_t CdfTable::count_starting_before(const Rational& x) const {
  if (gapless_) {
    if (x <= 0) return 0;
    if (x >= 1) return lo_.size();
    Rational t = x * pow2(depth_);
    return static_cast<std::size_t>(ceil(t).get_ui());
  }
  return static_cast<std::size_t>(std::lower_bound(lo_.begin(), lo_.end(), x) - lo_.begin());
}

MassBracket CdfTable::cdf(const Rational& x) const {
  return {prefix_[count_below(x)], prefix_[count_starting_before(x)]};
}

MassBracket CdfTable::mass(const Rational& u, const Rational& v) const {
  Rational a = max(u, Rational(0));
  Rational b = min(v, Rational(1));
  if (a > b) return {0, 0};
  Rational lower = prefix_[count_below(b)] - prefix_[count_starting_before(a)];
  if (lower < 0) lower = 0;
  Rational upper = prefix_[count_starting_before(b)] - prefix_[count_below(a)];
  return {lower, upper};
}

}  // namespace dmlab::measure
