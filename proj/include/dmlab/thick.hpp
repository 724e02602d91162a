#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmlab/cantor.hpp"

namespace dmlab::geom {

// One (I_{n,j}, J_{n,j}) pair with the centre x_{n,j} of its witness ball;
// the witness radius is always c * diam(I).
struct ThickPiece {
  RationalInterval outer;  // I
  RationalInterval hole;   // J, J inside I
  Rational center;
};

// Data witnessing that a set is (alpha_n)-thick: nested families with bounded
// overlap, holes small relative to alpha_n, and witness balls avoiding all
// earlier holes.
struct ThickStructure {
  std::vector<std::vector<ThickPiece>> levels;  // levels[n-1] holds stage n
  int overlap_bound = 1;                        // N
  Rational c = 1;
  seq::SequenceFamily alpha;
  // Declared approximation of E that E_0 minus all holes must lie in.
  std::vector<RationalInterval> target;
};

// I_{n,j} = level-(n-1) nodes, J_{n,j} = their open middle gaps, alpha = beta,
// N = 1, c = min(1, (1 - beta_max)/4), witness centred at the left child's
// midpoint. Throws FailsThickness if beta_max >= 1 - tolerance.
ThickStructure thick_from_cantor(const ConstructionTree& tree, const Rational& tolerance = 0);

struct ThickVerdict {
  bool valid = true;
  int condition = 0;  // failing condition 1..5; 0 when valid
  int level = 0;
  std::uint64_t index = 0;
  std::string detail;
};

// Checks conditions 1-4 on the first `depth` stages and 5 on all
// stored stages, by exact interval arithmetic.
ThickVerdict verify_thick(const ThickStructure& ts, int depth);

}  // namespace dmlab::geom
