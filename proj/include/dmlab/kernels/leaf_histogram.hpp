#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

// Brute-force enumeration of dyadic-tree leaves.
//
// A leaf at depth L is an L-bit index whose most significant bit is the
// first left/right choice below the root (0 = left). For every leaf in
// [begin, end) the kernels find the first stage s whose block mask selects
// only zero bits (the leaf lies in a subtree removed at stage s; s = S when
// the leaf survives all S stages) and count it under (s, popcount(leaf)).
// Binomial masses follow from the counts: a leaf with `ones` right turns has
// mass p^(L-ones) (1-p)^ones.

namespace dmlab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Best variant the running CPU supports.
Isa detected_isa();
// Variant used by `leaf_histogram` below: DMLAB_SIMD=scalar|avx2 or an
// explicit override take precedence over detection.
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);
bool supported(Isa isa);

struct LeafSchedule {
  int leaf_depth = 0;                 // 0..32
  std::vector<std::uint32_t> stage_masks;

  std::size_t rows() const { return stage_masks.size() + 1; }
  std::size_t cols() const { return static_cast<std::size_t>(leaf_depth) + 1; }
};

// counts has rows() * cols() entries, row-major by stage; it is accumulated
// into, not cleared.
void leaf_histogram_scalar(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                           std::span<std::uint64_t> counts);
void leaf_histogram_avx2(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                         std::span<std::uint64_t> counts);

void leaf_histogram(Isa isa, const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                    std::span<std::uint64_t> counts);

// Whole-range histogram using the active variant, split across `workers`
// threads; partial counts are merged by addition so the result does not
// depend on the worker count.
std::vector<std::uint64_t> leaf_histogram(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                                          unsigned workers = 1);

}  // namespace dmlab::kernels
