#include <bit>

#include "dmlab/error.hpp"
#include "dmlab/kernels/leaf_histogram.hpp"

namespace dmlab::kernels {

void leaf_histogram_scalar(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                           std::span<std::uint64_t> counts) {
  const std::size_t cols = schedule.cols();
  const std::size_t stages = schedule.stage_masks.size();
  const std::uint32_t* masks = schedule.stage_masks.data();
  for (std::uint64_t leaf = begin; leaf < end; ++leaf) {
    const auto x = static_cast<std::uint32_t>(leaf);
    std::size_t s = 0;
    while (s < stages && (x & masks[s]) != 0) ++s;
    ++counts[s * cols + static_cast<std::size_t>(std::popcount(x))];
  }
}

}  // namespace dmlab::kernels
