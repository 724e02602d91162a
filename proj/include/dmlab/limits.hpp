#pragma once

#include <cstddef>

namespace dmlab {

// Global resource caps. Builders and scans check against these and throw
// ErrorCode::DepthLimit instead of degrading silently.
struct Limits {
  int max_depth = 30;
  std::size_t max_nodes = std::size_t{1} << 22;
};

// Process-wide limits; max_depth is initialised from DMLAB_MAX_DEPTH when set.
Limits& limits();

void check_depth(int depth, const char* what);
void check_nodes(std::size_t nodes, const char* what);

}  // namespace dmlab
