#pragma once

#include <vector>

#include "dmlab/interval.hpp"
#include "dmlab/seq.hpp"

namespace dmlab::geom {

// Dyadic porous Cantor construction on [0,1]: F_0 = [0,1], and at stage n
// every dyadic piece Q of F_{n-1} loses its leftmost aligned dyadic
// subinterval of length L = largest power of two <= alpha_n diam(Q), so that
// alpha_n diam(Q)/2 < L <= alpha_n diam(Q). What is left of Q is split into
// maximal dyadic pieces.
struct PorousConstruction {
  seq::SequenceFamily alpha;
  std::vector<std::vector<RationalInterval>> stages;   // F_0 .. F_n
  std::vector<std::vector<RationalInterval>> removed;  // removed pieces of stages 1 .. n
};

// Throws ResolutionExhausted when a removal needs a dyadic level beyond
// `max_level`, DepthLimit when the piece count exceeds the node cap.
PorousConstruction build_porous(const seq::SequenceFamily& alpha, int stages, int max_level = 60);

}  // namespace dmlab::geom
