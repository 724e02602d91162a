#include "dmlab/limits.hpp"

#include <cstdlib>
#include <string>

#include "dmlab/error.hpp"

namespace dmlab {

Limits& limits() {
  static Limits instance = [] {
    Limits l;
    if (const char* env = std::getenv("DMLAB_MAX_DEPTH")) {
      try {
        l.max_depth = std::stoi(env);
      } catch (const std::exception&) {
        fail(ErrorCode::Parse, std::string("DMLAB_MAX_DEPTH is not an integer: ") + env);
      }
    }
    return l;
  }();
  return instance;
}

void check_depth(int depth, const char* what) {
  if (depth > limits().max_depth)
    fail(ErrorCode::DepthLimit, std::string(what) + ": depth " + std::to_string(depth) + " exceeds cap " +
                                    std::to_string(limits().max_depth));
}

void check_nodes(std::size_t nodes, const char* what) {
  if (nodes > limits().max_nodes)
    fail(ErrorCode::DepthLimit, std::string(what) + ": " + std::to_string(nodes) + " nodes exceed cap " +
                                    std::to_string(limits().max_nodes));
}

}  // namespace dmlab
