#include "dmlab/interval.hpp"

#include <algorithm>

#include "dmlab/error.hpp"

namespace dmlab::geom {

RationalInterval::RationalInterval(Rational lower, Rational upper, bool open_lo, bool open_hi)
    : lo(std::move(lower)), hi(std::move(upper)), lo_open(open_lo), hi_open(open_hi) {
  require(0 <= lo && lo <= hi && hi <= 1, ErrorCode::InvalidParameter,
          "interval [" + to_string(lo) + ", " + to_string(hi) + "] not inside [0,1]");
}

bool RationalInterval::contains(const Rational& x) const {
  bool above = lo_open ? x > lo : x >= lo;
  bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

bool RationalInterval::overlaps_interior(const RationalInterval& other) const {
  return lo < other.hi && other.lo < hi;
}

std::vector<RationalInterval> merge_closed(std::vector<RationalInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const RationalInterval& a, const RationalInterval& b) { return a.lo < b.lo; });
  std::vector<RationalInterval> out;
  for (auto& iv : intervals) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = iv.hi;
    } else {
      out.push_back(RationalInterval(iv.lo, iv.hi));
    }
  }
  return out;
}

std::vector<RationalInterval> subtract_closed(const RationalInterval& piece,
                                              const std::vector<RationalInterval>& holes) {
  std::vector<RationalInterval> out;
  Rational cursor = piece.lo;
  bool cursor_open = piece.lo_open;
  bool exhausted = false;
  auto lower = std::lower_bound(holes.begin(), holes.end(), piece.lo,
                                [](const RationalInterval& h, const Rational& x) { return h.hi < x; });
  for (auto it = lower; it != holes.end() && it->lo <= piece.hi; ++it) {
    if (it->lo > cursor) out.emplace_back(cursor, it->lo, cursor_open, true);
    if (it->hi >= piece.hi) {
      exhausted = true;
      break;
    }
    if (it->hi >= cursor) {
      cursor = it->hi;
      cursor_open = true;
    }
  }
  if (!exhausted && (cursor < piece.hi || (cursor == piece.hi && !cursor_open && !piece.hi_open)))
    out.emplace_back(cursor, piece.hi, cursor_open, piece.hi_open);
  return out;
}

std::vector<RationalInterval> subtract_open(const RationalInterval& piece, const std::vector<RationalInterval>& holes) {
  std::vector<RationalInterval> out;
  Rational cursor = piece.lo;
  bool cursor_open = piece.lo_open;
  bool exhausted = false;
  auto lower = std::lower_bound(holes.begin(), holes.end(), piece.lo,
                                [](const RationalInterval& h, const Rational& x) { return h.hi <= x; });
  for (auto it = lower; it != holes.end() && it->lo < piece.hi; ++it) {
    if (it->lo >= cursor) out.emplace_back(cursor, it->lo, cursor_open, false);
    if (it->hi > piece.hi || (it->hi == piece.hi && piece.hi_open)) {
      exhausted = true;
      break;
    }
    if (it->hi > cursor) {
      cursor = it->hi;
      cursor_open = false;
    }
  }
  if (!exhausted) out.emplace_back(cursor, piece.hi, cursor_open, piece.hi_open);
  // Drop degenerate pieces that are empty as sets.
  std::erase_if(out, [](const RationalInterval& iv) { return iv.lo == iv.hi && (iv.lo_open || iv.hi_open); });
  return out;
}

Rational total_length(const std::vector<RationalInterval>& intervals) {
  Rational sum = 0;
  for (const auto& iv : intervals) sum += iv.diameter();
  return sum;
}

}  // namespace dmlab::geom
