#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dmlab/doubling.hpp"
#include "dmlab/error.hpp"

using namespace dmlab;
using doubling::Eq21Status;
using geom::RationalInterval;
using measure::TreeMeasure;
using seq::SequenceFamily;

namespace {

measure::MassBracket ball(const TreeMeasure& m, const Rational& x, const Rational& r, int depth) {
  return measure::interval_mass(m, RationalInterval(max(Rational(0), x - r), min(Rational(1), x + r)), depth);
}

// Exact Lebesgue mass of a clipped ball.
Rational leb_ball(const Rational& x, const Rational& r) {
  return min(Rational(1), x + r) - max(Rational(0), x - r);
}

}  // namespace

TEST(Doubling, LebesgueIsTwo) {
  auto rep = doubling::doubling_scan(TreeMeasure::lebesgue(), 10);
  EXPECT_EQ(rep.C, 2);
  EXPECT_EQ(rep.upper_witness.ratio, 2);
  EXPECT_TRUE(rep.s.is_exact());
  EXPECT_EQ(rep.s.lo, 1);
  EXPECT_EQ(rep.r_min, Rational(1, 1024));
  EXPECT_EQ(rep.r_max, 1);
}

TEST(Doubling, BinomialThirdWitness) {
  const int depth = 12;
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto rep = doubling::doubling_scan(m, depth);
  EXPECT_GE(rep.C, 3);
  EXPECT_GE(rep.C, rep.C_lower);
  // the witness reproduces C from independent mass queries
  const auto& w = rep.upper_witness;
  auto big = ball(m, w.x, 2 * w.r, rep.eval_depth);
  auto small = ball(m, w.x, w.r, rep.eval_depth);
  EXPECT_EQ(big.upper / small.lower, rep.C);
  // the chain at x = 1/2 alone forces ratios near 1/p
  Rational best = 0;
  for (int k = 2; k <= 8; ++k) {
    Rational r = pow2(-k);
    auto b2 = ball(m, Rational(1, 2), 2 * r, depth + 1), b1 = ball(m, Rational(1, 2), r, depth + 1);
    best = max(best, b2.lower / b1.upper);
  }
  EXPECT_GE(best, Rational(2));
  EXPECT_LE(best, rep.C);
}

TEST(Doubling, ReflectionSymmetry) {
  for (auto [a, b] : {std::pair{Rational(1, 3), Rational(2, 3)}, std::pair{Rational(1, 5), Rational(4, 5)}}) {
    auto ra = doubling::doubling_scan(TreeMeasure::binomial(a), 8);
    auto rb = doubling::doubling_scan(TreeMeasure::binomial(b), 8);
    EXPECT_EQ(ra.C, rb.C);
    EXPECT_EQ(ra.C_lower, rb.C_lower);
    EXPECT_EQ(ra.upper_witness.x, 1 - rb.upper_witness.x);
  }
}

TEST(Doubling, MonotoneInDepth) {
  auto m = TreeMeasure::binomial(Rational(2, 5));
  Rational prev = 1;
  for (int d = 2; d <= 9; ++d) {
    auto rep = doubling::doubling_scan(m, d, {std::nullopt, false});
    EXPECT_GE(rep.C, prev) << d;
    prev = rep.C;
  }
}

TEST(Doubling, CantorTreeScan) {
  auto tree = std::make_shared<const geom::ConstructionTree>(geom::build_cantor(SequenceFamily::constant(Rational(1, 3)), 10));
  auto m = TreeMeasure::binomial(Rational(1, 3), tree);
  auto r9 = doubling::doubling_scan(m, 9);
  auto r10 = doubling::doubling_scan(m, 10);
  EXPECT_GE(r9.C, 1);
  EXPECT_GE(r10.C, r9.C);
  EXPECT_TRUE(r10.violations.empty());
  for (const auto& x : doubling::scan_centers(m, 3)) {
    bool in_node = false;
    for (const auto& n : tree->level_nodes(3)) in_node = in_node || n.contains(x);
    EXPECT_TRUE(in_node);
  }
}

TEST(Doubling, DegenerateWeightsRejected) {
  measure::TreeMeasure::WeightTable w;
  w.weights = {{Rational(1)}};
  EXPECT_THROW(TreeMeasure::table(w), Error);
}

TEST(DecayExponent, LebesgueExponentIsOne) {
  auto fit = doubling::fit_eq22(TreeMeasure::lebesgue(), 10);
  EXPECT_EQ(fit.t, 1);
  EXPECT_GE(fit.Lambda, 1);
  EXPECT_LE(fit.Lambda, 2);
}

TEST(DecayExponent, BinomialExponentPositiveAndHoldsOnHoldout) {
  auto m = TreeMeasure::binomial(Rational(1, 3));
  const int depth = 10;
  auto fit = doubling::fit_eq22(m, depth);
  EXPECT_GT(fit.t, 0);
  // fresh sample: centres on the finest grid, radius pairs drawn independently of the fitting loop
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    Rational x = fraction(static_cast<long>(rng() % (1u << (depth + 1))), 1L << (depth + 1));
    int k = 1 + static_cast<int>(rng() % (depth - 1));
    int d = 1 + static_cast<int>(rng() % (depth - k));
    Rational R = pow2(-k), r = pow2(-(k + d));
    auto small = ball(m, x, r, depth + 1), large = ball(m, x, R, depth + 1);
    Enclosure rhs = enclose::pow(r / R, fit.t) * Enclosure::exact(fit.Lambda);
    EXPECT_LE(small.upper, rhs.hi * large.lower) << to_string(x) << " k=" << k << " d=" << d;
  }
}

TEST(DecayExponent, LebesgueHoldoutOffGrid) {
  auto fit = doubling::fit_eq22(TreeMeasure::lebesgue(), 10);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Rational x = fraction(static_cast<long>(rng() % 997), 997);
    int k = 1 + static_cast<int>(rng() % 9);
    int d = 1 + static_cast<int>(rng() % 6);
    Rational R = pow2(-k), r = pow2(-(k + d));
    EXPECT_LE(leb_ball(x, r), fit.Lambda * pow(r / R, 1) * leb_ball(x, R));
  }
}

TEST(DecayExponent, NotUniformlyPerfectGuard) {
  auto beta = SequenceFamily::explicit_finite({Rational(1, 3), Rational(1, 2), Rational(3, 4), Rational(9, 10),
                                               Rational(19, 20)});
  auto tree = std::make_shared<const geom::ConstructionTree>(geom::build_cantor(beta, 5));
  auto m = TreeMeasure::binomial(Rational(1, 2), tree);
  try {
    doubling::fit_eq22(m, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUniformlyPerfect);
  }
  auto rep = doubling::doubling_scan(m, 5);
  EXPECT_FALSE(rep.violations.empty());
  EXPECT_FALSE(rep.eq22.has_value());
}

TEST(ScaleConstants, LebesgueConstants) {
  auto rep = doubling::doubling_scan(TreeMeasure::lebesgue(), 8);
  ASSERT_TRUE(rep.lemma21.has_value());
  const auto& f = *rep.lemma21;
  EXPECT_EQ(f.s, 1);
  EXPECT_EQ(f.t, 1);
  // lambda r^s <= |B(x,r)| <= Lambda r^t at every grid scale
  for (int k = 0; k <= 8; ++k) {
    Rational r = pow2(-k);
    for (const auto& x : doubling::scan_centers(TreeMeasure::lebesgue(), 8)) {
      EXPECT_LE(f.lambda * r, leb_ball(x, r));
      EXPECT_GE(f.Lambda * r, leb_ball(x, r));
    }
  }
}

TEST(BallSetInequality, Examples) {
  auto leb = TreeMeasure::lebesgue();
  std::vector<doubling::Eq21Config> one{{RationalInterval(0, 1), 0, Rational(1, 4)}};
  auto ok = doubling::verify_eq21(leb, 2, one, 10);
  EXPECT_EQ(ok.status, Eq21Status::Holds);
  EXPECT_EQ(ok.checked, 1u);
  // s = 1/2 (C = sqrt 2): 1/100 < 2^{-1/2} (1/100)^{1/2}
  std::vector<doubling::Eq21Config> wrong{{RationalInterval(0, 1), 0, Rational(1, 100)}};
  auto bad = doubling::verify_eq21_exponent(leb, Rational(1, 2), wrong, 12);
  EXPECT_EQ(bad.status, Eq21Status::Counterexample);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_EQ(bad.witness->r, Rational(1, 100));
  EXPECT_LT(bad.ball.upper, bad.rhs.lo * bad.set.lower);
}

TEST(BallSetInequality, ScannedConstantNeverFails) {
  for (auto p : {Rational(1, 2), Rational(1, 3), Rational(1, 5)}) {
    auto m = TreeMeasure::binomial(p);
    auto rep = doubling::doubling_scan(m, 8);
    auto configs = doubling::sample_eq21(m, 8, 400, 1234);
    auto out = doubling::verify_eq21(m, rep.C, configs, rep.eval_depth);
    EXPECT_NE(out.status, Eq21Status::Counterexample) << to_string(p);
    EXPECT_EQ(out.checked, 400u);
  }
}

TEST(BallSetInequality, SamplerIsSeedDeterministic) {
  auto m = TreeMeasure::binomial(Rational(1, 3));
  auto a = doubling::sample_eq21(m, 6, 50, 42), b = doubling::sample_eq21(m, 6, 50, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].A, b[i].A);
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].r, b[i].r);
    EXPECT_TRUE(a[i].A.contains(a[i].x));
    EXPECT_GT(a[i].A.diameter(), a[i].r);
  }
}
