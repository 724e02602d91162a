#pragma once

#include <vector>

#include "dmlab/rational.hpp"

namespace dmlab::geom {

// Interval inside [0,1] with exact endpoints. Endpoint openness is
// bookkeeping only: the measures in this library carry no atoms, so masses
// never depend on it.
struct RationalInterval {
  Rational lo;
  Rational hi;
  bool lo_open = false;
  bool hi_open = false;

  RationalInterval() = default;
  RationalInterval(Rational lower, Rational upper, bool open_lo = false, bool open_hi = false);

  Rational diameter() const { return hi - lo; }
  bool closed() const { return !lo_open && !hi_open; }
  bool contains(const Rational& x) const;
  // Positive-length overlap of the closures.
  bool overlaps_interior(const RationalInterval& other) const;
  // Closure of `other` lies inside the closure of *this.
  bool covers(const RationalInterval& other) const { return lo <= other.lo && other.hi <= hi; }

  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

// Merge closed intervals (overlapping or touching) into a sorted disjoint list.
std::vector<RationalInterval> merge_closed(std::vector<RationalInterval> intervals);

// Remove closed `holes` (sorted, disjoint) from closed `piece`; the surviving
// pieces get open endpoints where they abut a hole.
std::vector<RationalInterval> subtract_closed(const RationalInterval& piece,
                                              const std::vector<RationalInterval>& holes);

// Remove open `holes` (sorted, disjoint) from `piece`; surviving pieces keep
// closed endpoints at the cut points.
std::vector<RationalInterval> subtract_open(const RationalInterval& piece, const std::vector<RationalInterval>& holes);

Rational total_length(const std::vector<RationalInterval>& intervals);

}  // namespace dmlab::geom
