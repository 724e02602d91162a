#include "dmlab/cutout.hpp"

#include <algorithm>

#include "dmlab/error.hpp"

namespace dmlab::geom {

void CutOutConfig::validate() const {
  require(tree == nullptr || ambient_depth <= tree->depth(), ErrorCode::InvalidParameter,
          "ambient depth beyond tree depth");
  auto pieces = ambient_pieces();
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto& b = balls[i];
    const std::string where = "ball " + std::to_string(i + 1);
    require(b.closed(), ErrorCode::InvalidParameter, where + " is not closed");
    if (diam_family) {
      auto n = static_cast<std::uint64_t>(i + 1);
      auto len = diam_family->length();
      require(!len || n <= *len, ErrorCode::InvalidParameter, where + " has no declared diameter");
      // diam <= alpha_n  <=>  not (alpha_n < diam)
      require(b.diameter() == 0 || !seq::term_pow_less(*diam_family, n, 1, b.diameter()), ErrorCode::InvalidParameter,
              where + " exceeds its declared diameter");
    }
    if (tree) {
      bool hits = std::any_of(pieces.begin(), pieces.end(), [&](const RationalInterval& p) {
        return p.lo <= b.hi && b.lo <= p.hi;
      });
      require(hits, ErrorCode::InvalidParameter, where + " misses the ambient space");
    }
  }
}

std::vector<RationalInterval> CutOutConfig::ambient_pieces() const {
  if (!tree) return {RationalInterval(0, 1)};
  return tree->level_nodes(ambient_depth);
}

CutOutConfig make_unit_config(std::vector<RationalInterval> balls, std::optional<seq::SequenceFamily> diam_family) {
  CutOutConfig c{std::move(balls), std::move(diam_family), nullptr, 0};
  c.validate();
  return c;
}

CutOutConfig make_tree_config(std::vector<RationalInterval> balls, std::shared_ptr<const ConstructionTree> tree,
                              int ambient_depth, std::optional<seq::SequenceFamily> diam_family) {
  require(tree != nullptr, ErrorCode::InvalidParameter, "tree ambient needs a tree");
  CutOutConfig c{std::move(balls), std::move(diam_family), std::move(tree), ambient_depth};
  c.validate();
  return c;
}

CutOutConfig normalize_order(CutOutConfig config) {
  std::stable_sort(config.balls.begin(), config.balls.end(),
                   [](const RationalInterval& a, const RationalInterval& b) { return a.diameter() > b.diameter(); });
  return config;
}

std::vector<RationalInterval> remaining_set(const CutOutConfig& config, std::size_t N) {
  require(N <= config.balls.size(), ErrorCode::InvalidParameter, "N exceeds the number of balls");
  auto holes = merge_closed({config.balls.begin(), config.balls.begin() + static_cast<std::ptrdiff_t>(N)});
  std::vector<RationalInterval> out;
  for (const auto& piece : config.ambient_pieces()) {
    auto rest = subtract_closed(piece, holes);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

Gap largest_gap(const CutOutConfig& config, std::size_t N) {
  auto rest = remaining_set(config, N);
  if (rest.empty()) fail(ErrorCode::EmptyRemainder, "the first " + std::to_string(N) + " balls cover X");
  const RationalInterval* best = &rest.front();
  for (const auto& iv : rest)
    if (iv.diameter() > best->diameter()) best = &iv;
  return {*best, best->diameter()};
}

std::vector<RationalInterval> inflate(const CutOutConfig& config, std::size_t N, const Rational& zeta) {
  require(zeta > 0, ErrorCode::InvalidParameter, "zeta must be positive");
  require(N <= config.balls.size(), ErrorCode::InvalidParameter, "N exceeds the number of balls");
  std::vector<RationalInterval> out;
  for (std::size_t i = 0; i < N; ++i) {
    const auto& b = config.balls[i];
    Rational lo = b.lo - zeta, hi = b.hi + zeta;
    bool lo_open = lo > 0, hi_open = hi < 1;
    out.emplace_back(max(lo, Rational(0)), min(hi, Rational(1)), lo_open, hi_open);
  }
  return out;
}

}  // namespace dmlab::geom
