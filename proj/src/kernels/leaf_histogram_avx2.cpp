// Built with -mavx2; only called after a runtime CPU check.
#include <immintrin.h>

#include <array>
#include <bit>

#include "dmlab/kernels/leaf_histogram.hpp"

namespace dmlab::kernels {

namespace {

// Per-lane popcount of eight 32-bit integers (nibble lookup, then byte sums).
inline __m256i popcount_epi32(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_shuffle_epi8(lut, _mm256_and_si256(v, low));
  __m256i hi = _mm256_shuffle_epi8(lut, _mm256_and_si256(_mm256_srli_epi32(v, 4), low));
  __m256i bytes = _mm256_add_epi8(lo, hi);
  __m256i pairs = _mm256_maddubs_epi16(bytes, _mm256_set1_epi8(1));
  return _mm256_madd_epi16(pairs, _mm256_set1_epi16(1));
}

}  // namespace

void leaf_histogram_avx2(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                         std::span<std::uint64_t> counts) {
  const std::size_t cols = schedule.cols();
  const std::size_t cells = schedule.rows() * cols;
  const auto stages = static_cast<int>(schedule.stage_masks.size());

  // One private histogram per lane keeps the scatter free of collisions.
  std::vector<std::uint64_t> lanes(cells * 8, 0);
  struct Broadcast {
    __m256i v;
  };
  std::vector<Broadcast> masks;
  for (auto m : schedule.stage_masks) masks.push_back({_mm256_set1_epi32(static_cast<int>(m))});

  const __m256i step = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i zero = _mm256_setzero_si256();
  const __m256i cols_v = _mm256_set1_epi32(static_cast<int>(cols));
  alignas(32) std::array<std::uint32_t, 8> bucket{};

  std::uint64_t leaf = begin;
  for (; leaf + 8 <= end; leaf += 8) {
    __m256i x = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(leaf))), step);
    __m256i stage = _mm256_set1_epi32(stages);
    __m256i alive = _mm256_set1_epi32(-1);
    for (int s = 0; s < stages; ++s) {
      __m256i removed = _mm256_cmpeq_epi32(_mm256_and_si256(x, masks[static_cast<std::size_t>(s)].v), zero);
      __m256i hit = _mm256_and_si256(removed, alive);
      stage = _mm256_blendv_epi8(stage, _mm256_set1_epi32(s), hit);
      alive = _mm256_andnot_si256(removed, alive);
      if (_mm256_testz_si256(alive, alive)) break;
    }
    __m256i idx = _mm256_add_epi32(_mm256_mullo_epi32(stage, cols_v), popcount_epi32(x));
    _mm256_store_si256(reinterpret_cast<__m256i*>(bucket.data()), idx);
    for (std::size_t lane = 0; lane < 8; ++lane) ++lanes[lane * cells + bucket[lane]];
  }
  for (std::size_t lane = 0; lane < 8; ++lane)
    for (std::size_t c = 0; c < cells; ++c) counts[c] += lanes[lane * cells + c];
  if (leaf < end) leaf_histogram_scalar(schedule, leaf, end, counts);
}

}  // namespace dmlab::kernels
