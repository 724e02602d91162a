#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dmlab/enclosure.hpp"
#include "dmlab/measure.hpp"

namespace dmlab::qs {

using measure::MassBracket;
using measure::TreeMeasure;

// f(x) = mu([0, x]), evaluated with brackets at eval_depth.
struct QSMap {
  TreeMeasure source;
  int eval_depth = 20;
};

MassBracket evaluate(const QSMap& f, const Rational& x);

// Exact values f(j / 2^depth), j = 0 .. 2^depth. Throws ResolutionExhausted
// when a grid value is not exact at the map's evaluation depth.
std::vector<Rational> tabulate(const QSMap& f, int depth);

// Dyadic-tree measure with left fractions (f(mid) - f(lo)) / (f(hi) - f(lo))
// from a table on the grid j / 2^depth (2^depth + 1 values). Throws
// NonMonotone unless the table is strictly increasing.
TreeMeasure measure_from_map(const std::vector<Rational>& table);

struct RatioRow {
  Rational tau;
  Rational max_ratio;  // upper bound of |f(x)-f(y)| / |f(x)-f(z)|
  Rational x, y, z;    // witness triple
};

struct RatioScanOptions {
  // Finest step 2^-depth for both the centers and the offsets; grid_depth
  // (default depth) coarsens the centers and the offsets together.
  std::optional<int> grid_depth;
  // Additional uniformly random triples on the grid (0 = symmetric triples only).
  std::size_t random_triples = 0;
  std::uint64_t seed = 1;
};

// For tau in {1/4, 1/2, 1, 2, 4}: largest image ratio over triples (x, y, z)
// on the grid with |x-y|/|x-z| <= tau. Symmetric triples use offsets a h and
// b h with a, b in {1, 2, 4} and h = 2^-k.
std::vector<RatioRow> qs_ratio_scan(const QSMap& f, int depth, const RatioScanOptions& options = {});

// C^(2 log2 eta2 + 1); exact when eta2 is a power of two.
Enclosure pullback_constant(const Rational& C, const Rational& eta2);

}  // namespace dmlab::qs
