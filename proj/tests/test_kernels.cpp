#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "dmlab/kernels/leaf_histogram.hpp"

using namespace dmlab::kernels;

namespace {

std::vector<std::uint64_t> naive(const LeafSchedule& s, std::uint64_t begin, std::uint64_t end) {
  std::vector<std::uint64_t> counts(s.rows() * s.cols(), 0);
  for (std::uint64_t leaf = begin; leaf < end; ++leaf) {
    std::size_t stage = s.stage_masks.size();
    for (std::size_t j = 0; j < s.stage_masks.size(); ++j)
      if ((leaf & s.stage_masks[j]) == 0) {
        stage = j;
        break;
      }
    counts[stage * s.cols() + static_cast<std::size_t>(std::popcount(leaf))]++;
  }
  return counts;
}

LeafSchedule random_schedule(std::mt19937_64& rng, int depth) {
  LeafSchedule s;
  s.leaf_depth = depth;
  const int stages = 1 + static_cast<int>(rng() % 6);
  const std::uint64_t full = (std::uint64_t{1} << depth) - 1;
  for (int j = 0; j < stages; ++j) s.stage_masks.push_back(static_cast<std::uint32_t>(rng() & full) | 1u);
  return s;
}

struct IsaGuard {
  ~IsaGuard() { set_isa_override(std::nullopt); }
};

}  // namespace

TEST(Kernels, ScalarMatchesNaive) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int depth = 1 + static_cast<int>(rng() % 14);
    auto s = random_schedule(rng, depth);
    std::uint64_t n = std::uint64_t{1} << depth;
    std::uint64_t b = rng() % n, e = b + rng() % (n - b + 1);
    std::vector<std::uint64_t> counts(s.rows() * s.cols(), 0);
    leaf_histogram_scalar(s, b, e, counts);
    EXPECT_EQ(counts, naive(s, b, e)) << "depth " << depth << " [" << b << ", " << e << ")";
  }
}

TEST(Kernels, Avx2MatchesScalar) {
  if (!supported(Isa::Avx2)) GTEST_SKIP() << "no AVX2 on this CPU";
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int depth = 1 + static_cast<int>(rng() % 20);
    auto s = random_schedule(rng, depth);
    std::uint64_t n = std::uint64_t{1} << depth;
    // Unaligned ranges exercise the vector tails.
    std::uint64_t b = rng() % n, e = b + rng() % (n - b + 1);
    std::vector<std::uint64_t> a(s.rows() * s.cols(), 0), v(a.size(), 0);
    leaf_histogram(Isa::Scalar, s, b, e, a);
    leaf_histogram(Isa::Avx2, s, b, e, v);
    ASSERT_EQ(a, v) << "depth " << depth << " [" << b << ", " << e << ")";
  }
}

TEST(Kernels, Avx2FullDepth) {
  if (!supported(Isa::Avx2)) GTEST_SKIP() << "no AVX2 on this CPU";
  LeafSchedule s{32, {0xF0000000u, 0x0F000000u, 0x00FF0000u, 0x0000FFFFu}};
  const std::uint64_t top = std::uint64_t{1} << 32;
  for (std::uint64_t b : {top - 1000, std::uint64_t{0}, std::uint64_t{123456789}}) {
    std::uint64_t e = std::min(top, b + 777);
    std::vector<std::uint64_t> a(s.rows() * s.cols(), 0), v(a.size(), 0);
    leaf_histogram(Isa::Scalar, s, b, e, a);
    leaf_histogram(Isa::Avx2, s, b, e, v);
    EXPECT_EQ(a, v);
    EXPECT_EQ(a, naive(s, b, e));
  }
}

TEST(Kernels, AccumulatesIntoCounts) {
  LeafSchedule s{6, {0b110000u, 0b001100u}};
  std::vector<std::uint64_t> counts(s.rows() * s.cols(), 0);
  leaf_histogram_scalar(s, 0, 20, counts);
  leaf_histogram_scalar(s, 20, 64, counts);
  EXPECT_EQ(counts, naive(s, 0, 64));
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  EXPECT_EQ(total, 64u);
}

TEST(Kernels, DispatchOverride) {
  IsaGuard guard;
  set_isa_override(Isa::Scalar);
  EXPECT_EQ(active_isa(), Isa::Scalar);
  if (supported(Isa::Avx2)) {
    set_isa_override(Isa::Avx2);
    EXPECT_EQ(active_isa(), Isa::Avx2);
  }
  set_isa_override(std::nullopt);
  EXPECT_TRUE(supported(active_isa()));
  EXPECT_EQ(to_string(Isa::Scalar), "scalar");
  EXPECT_EQ(to_string(Isa::Avx2), "avx2");
}

TEST(Kernels, WorkerCountInvariant) {
  IsaGuard guard;
  std::mt19937_64 rng(3);
  auto s = random_schedule(rng, 18);
  const std::uint64_t n = std::uint64_t{1} << 18;
  auto ref = naive(s, 0, n);
  for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
    if (!supported(isa)) continue;
    set_isa_override(isa);
    for (unsigned w : {1u, 2u, 3u, 8u}) EXPECT_EQ(leaf_histogram(s, 0, n, w), ref) << to_string(isa) << " " << w;
  }
}
