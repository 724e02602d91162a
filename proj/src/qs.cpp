#include "dmlab/qs.hpp"

#include <random>

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::qs {

MassBracket evaluate(const QSMap& f, const Rational& x) {
  require(x >= 0 && x <= 1, ErrorCode::InvalidParameter, "evaluation point outside [0,1]");
  return measure::cdf(f.source, x, f.eval_depth);
}

std::vector<Rational> tabulate(const QSMap& f, int depth) {
  require(depth >= 0 && depth <= f.eval_depth, ErrorCode::InvalidParameter, "tabulation depth beyond evaluation depth");
  check_depth(depth, "tabulate");
  check_nodes((std::size_t{1} << depth) + 1, "tabulate");
  measure::CdfTable table(f.source, f.eval_depth);
  std::vector<Rational> out;
  const Rational step = pow2(-depth);
  for (std::uint64_t j = 0; j <= (std::uint64_t{1} << depth); ++j) {
    Rational x = Rational(j) * step;
    MassBracket b = table.cdf(x);
    require(b.exact(), ErrorCode::ResolutionExhausted, "f(" + to_string(x) + ") is not exact at the evaluation depth");
    out.push_back(b.lower);
  }
  return out;
}

TreeMeasure measure_from_map(const std::vector<Rational>& table) {
  require(table.size() >= 2, ErrorCode::InvalidParameter, "table needs at least the values f(0) and f(1)");
  const std::size_t cells = table.size() - 1;
  require((cells & (cells - 1)) == 0, ErrorCode::InvalidParameter, "table must hold 2^depth + 1 values");
  int depth = 0;
  while ((std::size_t{1} << depth) < cells) ++depth;
  for (std::size_t j = 1; j < table.size(); ++j)
    require(table[j - 1] < table[j], ErrorCode::NonMonotone, "table is not strictly increasing at index " + std::to_string(j));

  TreeMeasure::WeightTable w;
  for (int k = 0; k < depth; ++k) {
    const std::size_t span = std::size_t{1} << (depth - k);
    std::vector<Rational> row;
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
      const std::size_t lo = i * span, hi = lo + span, mid = lo + span / 2;
      row.push_back((table[mid] - table[lo]) / (table[hi] - table[lo]));
    }
    w.weights.push_back(std::move(row));
  }
  return TreeMeasure::table(std::move(w), nullptr, table.back() - table.front());
}

std::vector<RatioRow> qs_ratio_scan(const QSMap& f, int depth, const RatioScanOptions& options) {
  const int g = options.grid_depth.value_or(depth);
  require(g >= 0 && g <= depth && depth <= f.eval_depth, ErrorCode::InvalidParameter,
          "need grid_depth <= depth <= evaluation depth");
  check_depth(depth, "qs_ratio_scan");
  check_nodes((std::size_t{1} << g) + 1, "qs_ratio_scan");
  measure::CdfTable table(f.source, f.eval_depth);
  const std::int64_t n = std::int64_t{1} << g;
  const Rational step = pow2(-g);
  std::vector<MassBracket> F;
  for (std::int64_t j = 0; j <= n; ++j) F.push_back(table.cdf(Rational(static_cast<unsigned long>(j)) * step));

  const std::array<Rational, 5> taus{Rational(1, 4), Rational(1, 2), Rational(1), Rational(2), Rational(4)};
  std::vector<RatioRow> rows;
  for (const auto& t : taus) rows.push_back({t, 0, 0, 0, 0});

  auto upper_diff = [&](std::int64_t a, std::int64_t b) {
    if (a > b) std::swap(a, b);
    return F[static_cast<std::size_t>(b)].upper - F[static_cast<std::size_t>(a)].lower;
  };
  auto lower_diff = [&](std::int64_t a, std::int64_t b) {
    if (a > b) std::swap(a, b);
    Rational d = F[static_cast<std::size_t>(b)].lower - F[static_cast<std::size_t>(a)].upper;
    return d > 0 ? d : Rational(0);
  };
  auto record = [&](std::int64_t x, std::int64_t y, std::int64_t z, const Rational& tau) {
    Rational den = lower_diff(x, z);
    require(den > 0, ErrorCode::ResolutionExhausted, "image of a grid interval has no certified mass");
    Rational ratio = upper_diff(x, y) / den;
    for (auto& row : rows) {
      if (tau <= row.tau && ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.x = Rational(static_cast<unsigned long>(x)) * step;
        row.y = Rational(static_cast<unsigned long>(y)) * step;
        row.z = Rational(static_cast<unsigned long>(z)) * step;
      }
    }
  };

  const std::array<std::int64_t, 3> mult{1, 2, 4};
  for (std::int64_t x = 0; x <= n; ++x) {
    for (int k = 0; k <= g; ++k) {
      const std::int64_t h = std::int64_t{1} << (g - k);
      for (auto a : mult) {
        for (auto b : mult) {
          for (int sy : {-1, 1}) {
            for (int sz : {-1, 1}) {
              if (sy == sz && a == b) continue;
              std::int64_t y = x + sy * a * h, z = x + sz * b * h;
              if (y < 0 || y > n || z < 0 || z > n) continue;
              record(x, y, z, Rational(a) / b);
            }
          }
        }
      }
    }
  }
  if (options.random_triples > 0) {
    require(n >= 2, ErrorCode::InvalidParameter, "random triples need at least three grid points");
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.random_triples;) {
      auto x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n + 1));
      auto y = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n + 1));
      auto z = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n + 1));
      if (x == y || x == z || y == z) continue;
      ++i;
      Rational tau = Rational(std::abs(x - y)) / std::abs(x - z);
      record(x, y, z, tau);
    }
  }
  return rows;
}

Enclosure pullback_constant(const Rational& C, const Rational& eta2) {
  require(C >= 1, ErrorCode::InvalidParameter, "C must be at least 1");
  require(eta2 >= 1, ErrorCode::InvalidParameter, "eta(2) must be at least 1");
  Enclosure e = Enclosure::exact(2) * enclose::log2(eta2) + Enclosure::exact(1);
  return enclose::pow(Enclosure::exact(C), e);
}

}  // namespace dmlab::qs
