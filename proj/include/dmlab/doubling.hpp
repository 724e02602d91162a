#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmlab/enclosure.hpp"
#include "dmlab/measure.hpp"

namespace dmlab::doubling {

using measure::TreeMeasure;

// A sampled ball pair B(x, r) and B(x, 2r) together with the ratio bound it
// produced.
struct Witness {
  Rational x;
  Rational r;
  Rational ratio;
};

// mu(B(x,r))/mu(B(x,R)) <= Lambda (r/R)^t on every sampled x and r <= R < diam X.
struct Eq22Fit {
  Rational Lambda;
  Rational t;
  Rational cap;  // largest Lambda accepted while searching t
};

// lambda r^s <= mu(B(x,r)) <= Lambda r^t on every sampled x and r < diam X.
struct Lemma21Fit {
  Rational lambda;
  Rational s;
  Rational Lambda;
  Rational t;
};

struct ScaleRow {
  Rational r;
  Rational max_ratio;  // certified upper bound over the centers at this radius
};

struct DoublingReport {
  int depth = 0;
  int eval_depth = 0;
  Rational C = 1;        // certified upper bound of mu(B(x,2r))/mu(B(x,r)) over the grid
  Rational C_lower = 1;  // certified lower bound attained by lower_witness
  Witness upper_witness;
  Witness lower_witness;
  Enclosure s;  // log2 C
  Rational r_min, r_max;
  std::size_t centers = 0;
  std::size_t radii = 0;
  std::string grid;
  std::vector<ScaleRow> ratio_by_scale;
  std::optional<Eq22Fit> eq22;
  std::optional<Lemma21Fit> lemma21;
  std::vector<std::string> violations;
};

struct ScanOptions {
  // Depth at which ball masses are evaluated; defaults to depth + 1 on the
  // dyadic tree (exact on the grid) and to the tree depth otherwise.
  std::optional<int> eval_depth;
  bool fit_exponents = true;
  // Trees whose largest gap ratio reaches this are not treated as
  // uniformly perfect.
  Rational perfectness_threshold = Rational(9, 10);
};

// Centers are the endpoints of depth-level nodes, plus their midpoints when
// the tree has no gaps (midpoints of Cantor nodes fall into gaps, outside X).
// Radii are 2^-k, 0 <= k <= depth.
DoublingReport doubling_scan(const TreeMeasure& m, int depth, const ScanOptions& options = {});

// Throws NotUniformlyPerfect when the tree's gap ratios reach the threshold
// and NoValidatedExponent when no grid exponent fits under the cap.
Eq22Fit fit_eq22(const TreeMeasure& m, int depth, const ScanOptions& options = {});

std::vector<Rational> scan_centers(const TreeMeasure& m, int depth);

enum class Eq21Status { Holds, Counterexample, Inconclusive };

struct Eq21Config {
  geom::RationalInterval A;
  Rational x;
  Rational r;
};

struct Eq21Outcome {
  Eq21Status status = Eq21Status::Holds;
  std::size_t checked = 0;
  std::size_t inconclusive = 0;
  std::optional<Eq21Config> witness;  // first counterexample (or inconclusive case)
  measure::MassBracket ball{0, 0};
  measure::MassBracket set{0, 0};
  Enclosure rhs;
};

// mu(B(x,r))/mu(A) >= 2^-s (r/diam A)^s with s = log2 C, decided per
// configuration with lower/upper masses at `depth`.
Eq21Outcome verify_eq21(const TreeMeasure& m, const Rational& C, const std::vector<Eq21Config>& configs, int depth);
// Same inequality for an explicit exponent s (C = 2^s need not be rational).
Eq21Outcome verify_eq21_exponent(const TreeMeasure& m, const Rational& s, const std::vector<Eq21Config>& configs,
                                 int depth);

// Random configurations on the scan grid of `grid_depth`: x a grid center,
// r = 2^-k, A an interval around x with grid endpoints and diam A > r.
std::vector<Eq21Config> sample_eq21(const TreeMeasure& m, int grid_depth, std::size_t count, std::uint64_t seed);

std::string to_string(Eq21Status s);

}  // namespace dmlab::doubling
