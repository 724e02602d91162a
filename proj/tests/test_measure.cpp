#include <gtest/gtest.h>

#include <random>

#include "dmlab/certify.hpp"
#include "dmlab/cutout.hpp"
#include "dmlab/error.hpp"
#include "dmlab/measure.hpp"

using namespace dmlab;
using geom::RationalInterval;
using measure::TreeMeasure;
using seq::SequenceFamily;

namespace {

RationalInterval iv(Rational a, Rational b) { return RationalInterval(a, b); }

// Leaf masses of a binomial measure on the dyadic tree by direct recursion.
std::vector<Rational> binomial_leaves(const Rational& p, int depth) {
  std::vector<Rational> cur{1};
  for (int d = 0; d < depth; ++d) {
    std::vector<Rational> next;
    for (const auto& m : cur) {
      next.push_back(m * p);
      next.push_back(m * (1 - p));
    }
    cur = std::move(next);
  }
  return cur;
}

// Mass of an interval with dyadic endpoints at resolution 2^-depth by summing leaves.
Rational leaf_sum(const std::vector<Rational>& leaves, int depth, const Rational& a, const Rational& b) {
  Rational total = 0;
  const long n = 1L << depth;
  for (long i = 0; i < n; ++i) {
    Rational lo = fraction(i, n), hi = fraction(i + 1, n);
    if (a <= lo && hi <= b) total += leaves[static_cast<std::size_t>(i)];
  }
  return total;
}

// The removed subtrees of the left-most-descendant schedule, as intervals on [0,1].
std::vector<RationalInterval> schedule_holes(int stages) {
  auto sched = certify::example54_schedule(stages);
  std::vector<RationalInterval> alive{iv(0, 1)}, holes;
  for (int j = 0; j < stages; ++j) {
    int from = static_cast<int>(sched.k[static_cast<std::size_t>(j)]) - 1;
    int to = static_cast<int>(sched.k[static_cast<std::size_t>(j) + 1]) - 1;
    std::vector<RationalInterval> next;
    for (const auto& node : alive) {
      // node sits at level `from`; split it to level `to` and drop the first piece
      Rational w = node.diameter() / (Integer(1) << (to - from));
      long count = 1L << (to - from);
      holes.push_back(iv(node.lo, node.lo + w));
      for (long i = 1; i < count; ++i) next.push_back(iv(node.lo + w * i, node.lo + w * (i + 1)));
    }
    alive = std::move(next);
  }
  return holes;
}

}  // namespace

TEST(Measure, NodeMassExamples) {
  EXPECT_EQ(measure::node_mass(TreeMeasure::lebesgue(), 2, 0), Rational(1, 4));
  auto m = TreeMeasure::binomial(Rational(1, 3));
  EXPECT_EQ(measure::node_mass(m, 2, 0), Rational(1, 9));
  EXPECT_EQ(measure::node_mass(m, 2, 3), Rational(4, 9));
  EXPECT_THROW(measure::node_mass(m, 2, 4), Error);
}

TEST(Measure, LevelConsistency) {
  for (auto p : {Rational(1, 3), Rational(2, 7), Rational(1, 2)}) {
    auto m = TreeMeasure::binomial(p);
    for (int level = 0; level < 8; ++level)
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i)
        EXPECT_EQ(measure::node_mass(m, level, i),
                  measure::node_mass(m, level + 1, 2 * i) + measure::node_mass(m, level + 1, 2 * i + 1));
  }
}

TEST(Measure, IntervalMassExamples) {
  auto leb = measure::interval_mass(TreeMeasure::lebesgue(), iv(0, Rational(1, 3)), 10);
  EXPECT_TRUE(leb.contains(Rational(1, 3)));
  EXPECT_LE(leb.width(), Rational(2, 1024));
  auto m = TreeMeasure::binomial(Rational(1, 3));
  for (int depth : {1, 4, 9}) {
    auto a = measure::interval_mass(m, iv(0, Rational(1, 2)), depth);
    EXPECT_TRUE(a.exact());
    EXPECT_EQ(a.lower, Rational(1, 3));
  }
  auto b = measure::interval_mass(m, iv(Rational(1, 4), Rational(1, 2)), 2);
  EXPECT_TRUE(b.exact());
  EXPECT_EQ(b.lower, Rational(2, 9));
}

TEST(Measure, AlignedMassesMatchLeafEnumeration) {
  const int depth = 14;
  auto p = Rational(1, 3);
  auto leaves = binomial_leaves(p, depth);
  auto m = TreeMeasure::binomial(p);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    long a = static_cast<long>(rng() % (1u << depth)), b = static_cast<long>(rng() % (1u << depth));
    if (a > b) std::swap(a, b);
    Rational lo = fraction(a, 1L << depth), hi = fraction(b + 1, 1L << depth);
    auto got = measure::interval_mass(m, iv(lo, hi), depth);
    ASSERT_TRUE(got.exact());
    EXPECT_EQ(got.lower, leaf_sum(leaves, depth, lo, hi));
  }
}

TEST(Measure, LebesgueReproducesLength) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Rational a = fraction(static_cast<long>(rng() % 512), 512), b = fraction(static_cast<long>(rng() % 512), 512);
    if (a > b) std::swap(a, b);
    auto got = measure::interval_mass(TreeMeasure::lebesgue(), iv(a, b), 9);
    EXPECT_TRUE(got.exact());
    EXPECT_EQ(got.lower, b - a);
    // unaligned: bracket contains the length
    Rational c = a + Rational(1, 3) * (b - a);
    EXPECT_TRUE(measure::interval_mass(TreeMeasure::lebesgue(), iv(a, c), 12).contains(c - a));
  }
}

TEST(Measure, CutoutMassExamples) {
  auto c = geom::make_unit_config({iv(0, Rational(1, 4)), iv(Rational(1, 8), Rational(3, 8))});
  auto r = measure::cutout_mass(TreeMeasure::lebesgue(), c, 2, 8);
  EXPECT_TRUE(r.exact());
  EXPECT_EQ(r.lower, Rational(5, 8));
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto r2 = measure::cutout_mass(m, geom::make_unit_config({iv(Rational(1, 2), 1)}), 1, 4);
  EXPECT_EQ(r2.lower, Rational(1, 3));
  EXPECT_EQ(r2.upper, Rational(1, 3));
}

TEST(Measure, CutoutMassEqualsScheduleClosedForm) {
  for (auto p : {Rational(1, 3), Rational(1, 4), Rational(2, 3)}) {
    auto m = TreeMeasure::binomial(p);
    for (int stages = 1; stages <= 6; ++stages) {
      auto holes = schedule_holes(stages);
      auto c = geom::make_unit_config(holes);
      int depth = certify::example54_schedule(stages).leaf_depth();
      auto mass = measure::cutout_mass(m, c, holes.size(), depth);
      ASSERT_TRUE(mass.exact());
      EXPECT_EQ(mass.lower, certify::example54_partial(p, stages)) << to_string(p) << " " << stages;
    }
  }
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto holes = schedule_holes(4);
  auto mass = measure::cutout_mass(m, geom::make_unit_config(holes), holes.size(), 6);
  EXPECT_EQ(mass.lower, Rational(256, 729));
}

TEST(Measure, CutoutAdditivity) {
  auto m = TreeMeasure::binomial(Rational(2, 5));
  auto c = geom::make_unit_config({iv(Rational(1, 10), Rational(1, 5)), iv(Rational(1, 3), Rational(3, 7))});
  auto total = measure::cutout_mass(m, c, 2, 10);
  measure::MassBracket sum{0, 0};
  for (const auto& piece : geom::remaining_set(c, 2)) sum = sum + measure::interval_mass(m, piece, 10);
  EXPECT_EQ(total, sum);
}

TEST(Measure, CdfExamples) {
  auto leb = measure::cdf(TreeMeasure::lebesgue(), Rational(3, 8), 6);
  EXPECT_TRUE(leb.exact());
  EXPECT_EQ(leb.lower, Rational(3, 8));
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto q = measure::cdf(m, Rational(1, 4), 6);
  EXPECT_EQ(q.lower, Rational(1, 9));
  EXPECT_EQ(q.upper, Rational(1, 9));
  auto third = measure::cdf(m, Rational(1, 3), 20);
  // width is at most the heaviest straddling depth-20 node
  Rational heaviest = pow(Rational(2, 3), 20);
  EXPECT_LE(third.width(), heaviest);
  EXPECT_GT(third.width(), 0);
}

TEST(Measure, CdfMonotoneAndTableAgrees) {
  auto m = TreeMeasure::binomial(Rational(1, 5));
  measure::CdfTable table(m, 10);
  Rational prev = -1;
  for (int i = 0; i <= 1024; i += 8) {
    Rational x = fraction(i, 1024);
    auto c = measure::cdf(m, x, 10);
    ASSERT_TRUE(c.exact());
    EXPECT_GE(c.lower, prev);
    prev = c.lower;
    EXPECT_EQ(table.cdf(x), c);
  }
  for (int i = 1; i < 60; ++i) {
    Rational x(i, 61);
    auto direct = measure::cdf(m, x, 10);
    auto t = table.cdf(x);
    EXPECT_EQ(direct, t);
  }
}

TEST(Measure, RestrictLebesgueToMiddleHalf) {
  auto tree = geom::build_cantor(SequenceFamily::constant(Rational(1, 2)), 3);
  auto r = measure::restrict(TreeMeasure::lebesgue(), tree);
  for (int k = 0; k < 3; ++k)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) EXPECT_EQ(r.weight(k, i), Rational(1, 2));
  EXPECT_EQ(r.total_mass(), Rational(1, 8));
  EXPECT_EQ(measure::node_mass(r, 3, 5), Rational(1, 64));
}

TEST(Measure, RestrictBinomialConditionalMass) {
  auto tree = geom::build_cantor(SequenceFamily::constant(Rational(1, 2)), 2);
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto r = measure::restrict(m, tree);
  auto left = measure::interval_mass(m, tree.level_nodes(1)[0], 6).lower;
  auto right = measure::interval_mass(m, tree.level_nodes(1)[1], 6).lower;
  EXPECT_EQ(r.weight(0, 0), left / (left + right));
  // a restricted node carries the base mass of its surviving depth-2 descendants
  auto deepest = tree.level_nodes(2);
  for (int k = 0; k <= 2; ++k) {
    auto nodes = tree.level_nodes(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Rational expect = 0;
      for (const auto& d : deepest)
        if (nodes[i].covers(d)) expect += measure::interval_mass(m, d, 6).lower;
      EXPECT_EQ(measure::node_mass(r, k, i), expect);
    }
  }
}

TEST(Measure, RestrictEdgeCases) {
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto same = measure::restrict(m, geom::build_cantor(SequenceFamily::constant(Rational(1, 3)), 0));
  EXPECT_EQ(measure::node_mass(same, 3, 0), measure::node_mass(m, 3, 0));
  try {
    measure::restrict(m, geom::build_cantor(SequenceFamily::constant(Rational(1, 3)), 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Misaligned);
  }
}

TEST(Measure, LeavesSumToTotal) {
  auto tree = std::make_shared<const geom::ConstructionTree>(geom::build_cantor(SequenceFamily::constant(Rational(1, 3)), 5));
  auto m = TreeMeasure::binomial(Rational(1, 4), tree);
  auto ls = measure::leaves(m, 5);
  ASSERT_EQ(ls.size(), 32u);
  Rational total = 0;
  for (const auto& l : ls) total += l.mass;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(ls[0].mass, pow(Rational(1, 4), 5));
}

TEST(Measure, DepthBeyondTreeIsAnError) {
  auto tree = std::make_shared<const geom::ConstructionTree>(geom::build_cantor(SequenceFamily::constant(Rational(1, 3)), 3));
  auto m = TreeMeasure::binomial(Rational(1, 3), tree);
  EXPECT_THROW(measure::interval_mass(m, iv(0, Rational(1, 2)), 4), Error);
}
