#include "dmlab/doubling.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::doubling {

using measure::CdfTable;
using measure::MassBracket;
using dmlab::to_string;

namespace {

// Ball masses on the scan grid; mass[c][i] brackets mu(B(center_c, 2^(1-i))),
// so i = 0 is radius 2 and i = k + 1 is radius 2^-k.
struct BallGrid {
  int depth = 0;
  int eval_depth = 0;
  std::vector<Rational> centers;
  std::vector<std::vector<MassBracket>> mass;

  const MassBracket& at(std::size_t c, int k) const { return mass[c][static_cast<std::size_t>(k + 1)]; }
};

int default_eval_depth(const TreeMeasure& m, int depth, const ScanOptions& options) {
  if (options.eval_depth) return *options.eval_depth;
  return m.tree().gapless() ? depth + 1 : m.depth();
}

BallGrid build_grid(const TreeMeasure& m, int depth, const ScanOptions& options) {
  require(depth >= 1, ErrorCode::InvalidParameter, "scan depth must be at least 1");
  require(depth <= m.depth(), ErrorCode::DepthLimit, "scan depth beyond the tree depth");
  check_depth(depth, "doubling_scan");
  BallGrid g;
  g.depth = depth;
  g.eval_depth = default_eval_depth(m, depth, options);
  require(g.eval_depth >= depth, ErrorCode::InvalidParameter, "evaluation depth below scan depth");
  CdfTable table(m, g.eval_depth);
  g.centers = scan_centers(m, depth);
  g.mass.reserve(g.centers.size());
  for (const auto& x : g.centers) {
    std::vector<MassBracket> row;
    row.reserve(static_cast<std::size_t>(depth) + 2);
    for (int k = -1; k <= depth; ++k) {
      Rational r = pow2(-k);
      MassBracket b = table.mass(x - r, x + r);
      require(b.upper > 0, ErrorCode::ZeroMassBall,
              "ball B(" + to_string(x) + ", " + to_string(r) + ") carries no mass");
      require(b.lower > 0, ErrorCode::ResolutionExhausted,
              "ball B(" + to_string(x) + ", " + to_string(r) + ") has no certified mass at evaluation depth " +
                  std::to_string(g.eval_depth));
      row.push_back(std::move(b));
    }
    g.mass.push_back(std::move(row));
  }
  return g;
}

void check_perfect(const TreeMeasure& m, const ScanOptions& options) {
  Rational beta = m.tree().max_gap_ratio();
  require(beta < options.perfectness_threshold, ErrorCode::NotUniformlyPerfect,
          "largest gap ratio " + to_string(beta) + " reaches the threshold " + to_string(options.perfectness_threshold));
}

Rational grid_ceil(const Rational& v) {
  Integer q = ceil(v * 64);
  if (q < 1) q = 1;
  return fraction(q, 64);
}

Eq22Fit fit_from_grid(const BallGrid& g, const Rational& C) {
  // M[d] = max over centers and R = 2^-k of mu(B(x, 2^-(k+d)))/mu(B(x, R)), upper bounds.
  std::vector<Rational> M(static_cast<std::size_t>(g.depth), Rational(0));
  for (std::size_t c = 0; c < g.centers.size(); ++c) {
    for (int k = 1; k <= g.depth; ++k) {
      const Rational& big = g.at(c, k).lower;
      for (int d = 0; k + d <= g.depth; ++d) {
        Rational ratio = g.at(c, k + d).upper / big;
        auto& slot = M[static_cast<std::size_t>(d)];
        if (ratio > slot) slot = ratio;
      }
    }
  }
  Rational cap = max(C, Rational(2));
  auto lambda_for = [&](const Rational& t) {
    Rational best = 0;
    for (std::size_t d = 0; d < M.size(); ++d) {
      Rational v = M[d] * enclose::exp2(Enclosure::exact(Rational(static_cast<long>(d)) * t)).hi;
      if (v > best) best = v;
    }
    return best;
  };
  std::optional<Eq22Fit> fit;
  for (long j = 1; j <= 64 * 8; ++j) {
    Rational t = fraction(j, 64);
    Rational L = lambda_for(t);
    if (L > cap) break;
    fit = Eq22Fit{L, t, cap};
  }
  require(fit.has_value(), ErrorCode::NoValidatedExponent, "no exponent t >= 1/64 fits under Lambda <= " + to_string(cap));
  return *fit;
}

Lemma21Fit lemma21_from_grid(const BallGrid& g, const Enclosure& s_enc, const Eq22Fit& eq22) {
  Lemma21Fit fit;
  fit.s = grid_ceil(s_enc.hi);
  fit.t = eq22.t;
  std::optional<Rational> lambda, Lambda;
  for (int k = 1; k <= g.depth; ++k) {
    Rational lo = g.at(0, k).lower, hi = g.at(0, k).upper;
    for (std::size_t c = 1; c < g.centers.size(); ++c) {
      lo = min(lo, g.at(c, k).lower);
      hi = max(hi, g.at(c, k).upper);
    }
    // r^s = 2^(-k s)
    Rational lam = lo / enclose::exp2(Enclosure::exact(-k * fit.s)).hi;
    Rational Lam = hi / enclose::exp2(Enclosure::exact(-k * fit.t)).lo;
    if (!lambda || lam < *lambda) lambda = lam;
    if (!Lambda || Lam > *Lambda) Lambda = Lam;
  }
  fit.lambda = *lambda;
  fit.Lambda = *Lambda;
  return fit;
}

std::string grid_description(const TreeMeasure& m, int depth, int eval_depth) {
  std::string d = std::to_string(depth);
  std::string centers = m.tree().gapless() ? "endpoints and midpoints of level-" + d + " nodes"
                                           : "endpoints of level-" + d + " nodes";
  return "centers: " + centers + "; radii: 2^-k for 0 <= k <= " + d + "; masses at depth " +
         std::to_string(eval_depth);
}

}  // namespace

std::vector<Rational> scan_centers(const TreeMeasure& m, int depth) {
  std::vector<Rational> out;
  if (m.tree().gapless()) {
    check_nodes((std::size_t{1} << depth) * 2 + 1, "scan_centers");
    Rational step = pow2(-(depth + 1));
    for (std::uint64_t j = 0; j <= (std::uint64_t{1} << (depth + 1)); ++j) out.push_back(Rational(j) * step);
    return out;
  }
  for (const auto& n : m.tree().level_nodes(depth)) {
    if (out.empty() || out.back() != n.lo) out.push_back(n.lo);
    out.push_back(n.hi);
  }
  return out;
}

DoublingReport doubling_scan(const TreeMeasure& m, int depth, const ScanOptions& options) {
  BallGrid g = build_grid(m, depth, options);
  DoublingReport rep;
  rep.depth = depth;
  rep.eval_depth = g.eval_depth;
  rep.centers = g.centers.size();
  rep.radii = static_cast<std::size_t>(depth) + 1;
  rep.r_min = pow2(-depth);
  rep.r_max = 1;
  rep.grid = grid_description(m, depth, g.eval_depth);
  rep.upper_witness = {g.centers[0], 1, 0};
  rep.lower_witness = {g.centers[0], 1, 0};
  for (int k = 0; k <= depth; ++k) rep.ratio_by_scale.push_back({pow2(-k), 0});

  for (std::size_t c = 0; c < g.centers.size(); ++c) {
    for (int k = 0; k <= depth; ++k) {
      const MassBracket& small = g.at(c, k);
      const MassBracket& big = g.at(c, k - 1);
      Rational up = big.upper / small.lower;
      Rational low = big.lower / small.upper;
      auto& row = rep.ratio_by_scale[static_cast<std::size_t>(k)];
      if (up > row.max_ratio) row.max_ratio = up;
      if (up > rep.upper_witness.ratio) rep.upper_witness = {g.centers[c], pow2(-k), up};
      if (low > rep.lower_witness.ratio) rep.lower_witness = {g.centers[c], pow2(-k), low};
    }
  }
  rep.C = max(rep.upper_witness.ratio, Rational(1));
  rep.C_lower = max(rep.lower_witness.ratio, Rational(1));
  rep.s = enclose::log2(rep.C);

  if (options.fit_exponents) {
    Rational beta = m.tree().max_gap_ratio();
    if (beta >= options.perfectness_threshold) {
      rep.violations.push_back("NotUniformlyPerfect: largest gap ratio " + to_string(beta));
    } else {
      try {
        rep.eq22 = fit_from_grid(g, rep.C);
        rep.lemma21 = lemma21_from_grid(g, rep.s, *rep.eq22);
      } catch (const Error& e) {
        rep.violations.push_back(e.what());
      }
    }
  }
  return rep;
}

Eq22Fit fit_eq22(const TreeMeasure& m, int depth, const ScanOptions& options) {
  check_perfect(m, options);
  BallGrid g = build_grid(m, depth, options);
  Rational C = 1;
  for (std::size_t c = 0; c < g.centers.size(); ++c)
    for (int k = 0; k <= depth; ++k) C = max(C, g.at(c, k - 1).upper / g.at(c, k).lower);
  return fit_from_grid(g, C);
}

namespace {

Eq21Outcome verify_with(const TreeMeasure& m, const std::vector<Eq21Config>& configs, int depth,
                        const std::function<Enclosure(const Rational& r, const Rational& diam)>& rhs_of) {
  Eq21Outcome out;
  CdfTable table(m, depth);
  bool have_inconclusive = false;
  for (const auto& cfg : configs) {
    Rational diam = cfg.A.diameter();
    require(cfg.A.contains(cfg.x) || cfg.x == cfg.A.lo || cfg.x == cfg.A.hi, ErrorCode::InvalidParameter,
            "center outside A");
    require(cfg.r > 0 && cfg.r < diam, ErrorCode::InvalidParameter, "radius must lie in (0, diam A)");
    MassBracket ball = table.mass(cfg.x - cfg.r, cfg.x + cfg.r);
    MassBracket set = table.mass(cfg.A.lo, cfg.A.hi);
    require(set.upper > 0, ErrorCode::ZeroMassBall, "set A carries no mass");
    Enclosure rhs = rhs_of(cfg.r, diam);
    ++out.checked;
    bool holds = ball.lower >= rhs.hi * set.upper;
    bool fails = set.lower > 0 && ball.upper < rhs.lo * set.lower;
    if (fails) {
      out.status = Eq21Status::Counterexample;
      out.witness = cfg;
      out.ball = ball;
      out.set = set;
      out.rhs = rhs;
      return out;
    }
    if (!holds) {
      ++out.inconclusive;
      if (!have_inconclusive) {
        have_inconclusive = true;
        out.witness = cfg;
        out.ball = ball;
        out.set = set;
        out.rhs = rhs;
      }
    }
  }
  out.status = have_inconclusive ? Eq21Status::Inconclusive : Eq21Status::Holds;
  return out;
}

}  // namespace

Eq21Outcome verify_eq21(const TreeMeasure& m, const Rational& C, const std::vector<Eq21Config>& configs, int depth) {
  require(C >= 1, ErrorCode::InvalidParameter, "doubling constant must be at least 1");
  return verify_with(m, configs, depth, [&](const Rational& r, const Rational& diam) {
    // 2^-s (r/diam)^s = C^(-log2(2 diam / r)); exact when 2 diam / r is a power of two.
    Enclosure e = enclose::log2(2 * diam / r);
    return enclose::pow(Enclosure::exact(C), -e);
  });
}

Eq21Outcome verify_eq21_exponent(const TreeMeasure& m, const Rational& s, const std::vector<Eq21Config>& configs,
                                 int depth) {
  require(s >= 0, ErrorCode::InvalidParameter, "exponent must be non-negative");
  return verify_with(m, configs, depth,
                     [&](const Rational& r, const Rational& diam) { return enclose::pow(r / (2 * diam), s); });
}

std::vector<Eq21Config> sample_eq21(const TreeMeasure& m, int grid_depth, std::size_t count, std::uint64_t seed) {
  std::vector<Rational> centers = scan_centers(m, grid_depth);
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  std::vector<Eq21Config> out;
  out.reserve(count);
  while (out.size() < count) {
    std::size_t c = pick(centers.size());
    const Rational& x = centers[c];
    int k = 1 + static_cast<int>(pick(static_cast<std::uint64_t>(grid_depth)));
    Rational r = pow2(-k);
    // A's endpoints are grid centers on either side of x.
    std::size_t a = pick(c + 1);
    std::size_t b = c + pick(centers.size() - c);
    geom::RationalInterval A(centers[a], centers[b]);
    if (A.diameter() <= r) continue;
    out.push_back({A, x, r});
  }
  return out;
}

std::string to_string(Eq21Status s) {
  switch (s) {
    case Eq21Status::Holds: return "Holds";
    case Eq21Status::Counterexample: return "Counterexample";
    case Eq21Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

}  // namespace dmlab::doubling
