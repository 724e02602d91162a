#include "dmlab/certify.hpp"

#include <algorithm>

#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"

namespace dmlab::certify {

using dmlab::to_string;

namespace {

constexpr long kWorkBits = 256;

Rational one_minus_upper(const Enclosure& x) { return 1 - x.lo; }

std::optional<Enclosure> family_tail(const SequenceFamily& f, const Rational& p, std::uint64_t N) {
  if (seq::classify_ellp(f, p) == seq::Summability::Diverges) return std::nullopt;
  return seq::tail_sum(f, p, N);
}

ProductSource family_source(const SequenceFamily& x) {
  ProductSource src;
  src.term = [x](std::uint64_t i) { return seq::term_pow(x, i, 1); };
  src.length = x.length();
  if (!src.length) src.tail = [x](std::uint64_t N) { return family_tail(x, 1, N); };
  return src;
}

}  // namespace

ProductBracket product_bracket(const ProductSource& src, std::uint64_t N) {
  if (src.length) N = std::min(N, *src.length);
  ProductBracket b;
  b.N = N;
  Enclosure partial = Enclosure::exact(1);
  for (std::uint64_t i = 1; i <= N; ++i) {
    Enclosure x = src.term(i);
    require(x.lo > 0 && x.hi < 1, ErrorCode::InvalidParameter,
            "product factor " + std::to_string(i) + " is not of the form 1 - x with x in (0,1)");
    partial = enclose::outward(Enclosure(partial.lo * (1 - x.hi), partial.hi * one_minus_upper(x)), kWorkBits);
  }
  b.partial = partial;
  if (src.length && N == *src.length) {
    b.tail_lower = 1;
    b.tail_upper = 1;
    return b;
  }
  std::optional<Enclosure> tail = src.tail(N);
  if (!tail) {
    // prod (1 - x_i) <= exp(-sum x_i) = 0
    b.tail_lower = 0;
    b.tail_upper = 0;
    return b;
  }
  b.tail_lower = max(Rational(0), 1 - tail->hi);
  b.tail_upper = min(Rational(1), enclose::exp(-Enclosure::exact(tail->lo)).hi);
  return b;
}

ProductBracket product_bracket(const SequenceFamily& x, std::uint64_t N) {
  return product_bracket(family_source(x), N);
}

ProductBracket product_bracket_auto(const SequenceFamily& x, std::uint64_t N_start, std::uint64_t max_N) {
  ProductSource src = family_source(x);
  for (std::uint64_t N = std::max<std::uint64_t>(N_start, 1); N <= max_N; N *= 2) {
    ProductBracket b = product_bracket(src, N);
    if (b.lower() > 0) return b;
  }
  fail(ErrorCode::TailTooLarge, "Weierstrass tail bound not below 1 up to N = " + std::to_string(max_N));
}

FatnessCertificate certify_fat_thick(const geom::ThickStructure& ts, const Rational& t, const Rational& C3N,
                                     std::uint64_t terms) {
  require(t > 0, ErrorCode::InvalidParameter, "exponent t must be positive");
  require(C3N > 0, ErrorCode::InvalidParameter, "C3N must be positive");
  const int depth = static_cast<int>(ts.levels.size());
  geom::ThickVerdict v = geom::verify_thick(ts, depth);
  require(v.valid, ErrorCode::FailsThickness,
          "condition " + std::to_string(v.condition) + " fails at level " + std::to_string(v.level) + ": " + v.detail);
  require(seq::classify_ellp(ts.alpha, t) == seq::Summability::Converges, ErrorCode::NotInEllT,
          "sum alpha_n^t diverges for t = " + to_string(t));

  auto n0 = seq::first_index_below(ts.alpha, t, 1 / C3N, 1);
  require(n0.has_value(), ErrorCode::ProgressGuard, "C3N alpha_n^t never drops below 1");

  FatnessCertificate cert{ts.alpha, t, C3N, *n0, {}, Conclusion::Inconclusive, depth};
  const std::uint64_t shift = *n0 - 1;
  ProductSource src;
  const SequenceFamily alpha = ts.alpha;
  src.term = [alpha, t, C3N, shift](std::uint64_t i) {
    return Enclosure::exact(C3N) * seq::term_pow(alpha, shift + i, t);
  };
  src.tail = [alpha, t, C3N, shift](std::uint64_t N) -> std::optional<Enclosure> {
    return Enclosure::exact(C3N) * seq::tail_sum(alpha, t, shift + N);
  };
  cert.bound = product_bracket(src, terms);
  cert.conclusion = cert.bound.lower() > 0 ? Conclusion::Positive : Conclusion::Inconclusive;
  return cert;
}

ThinnessCertificate certify_thin_porous(const SequenceFamily& alpha, const Rational& s, const Rational& c,
                                        const Rational& epsilon, std::uint64_t max_stages) {
  require(s > 0, ErrorCode::InvalidParameter, "exponent s must be positive");
  require(c > 0 && c <= 1, ErrorCode::InvalidParameter, "c must lie in (0,1]");
  require(epsilon > 0, ErrorCode::InvalidParameter, "epsilon must be positive");
  require(seq::classify_ellp(alpha, s) == seq::Summability::Diverges, ErrorCode::SeriesConverges,
          "sum alpha_n^s converges; the decay bound does not reach 0");

  ThinnessCertificate cert{alpha, s, c, epsilon, seq::Summability::Diverges, {}, 0, 0};
  if (const auto* pw = std::get_if<SequenceFamily::Power>(&alpha.kind()); pw && is_integer(pw->offset))
    cert.index_shift = pw->offset.get_num().get_ui();

  Enclosure u = Enclosure::exact(1);
  for (std::uint64_t n = 1; n <= max_stages; ++n) {
    Enclosure x = Enclosure::exact(c) * seq::term_pow(alpha, n, s);
    u = enclose::outward(Enclosure(u.lo * (1 - x.hi), u.hi * (1 - x.lo)), kWorkBits);
    cert.decay_curve.push_back(u.hi);
    if (u.hi < epsilon) {
      cert.n_star = n;
      return cert;
    }
  }
  fail(ErrorCode::ProgressGuard, "decay bound above epsilon after " + std::to_string(max_stages) + " stages");
}

bool lemma41_check(const Rational& Lambda, const Rational& t, const Rational& D, const Rational& eps,
                   const Rational& Q) {
  Enclosure v = Enclosure::exact(Lambda) * enclose::pow(D + 2, t) * enclose::exp2(Enclosure::exact(1 - t * Q));
  return v.hi < eps / 6;
}

Rational lemma41_solve(const Rational& Lambda, const Rational& t, const Rational& D, const Rational& eps) {
  require(Lambda > 0 && t > 0 && D > 0 && eps > 0, ErrorCode::InvalidParameter, "all inputs must be positive");
  // Threshold Q* = (1 + log2(6 Lambda (D+2)^t / eps)) / t.
  Enclosure arg = Enclosure::exact(6 * Lambda / eps) * enclose::pow(D + 2, t);
  Enclosure qstar = (Enclosure::exact(1) + enclose::log2(arg)) / Enclosure::exact(t);
  Integer j = floor(qstar.lo * 64) - 1;
  if (j < 1) j = 1;
  for (long guard = 0; !lemma41_check(Lambda, t, D, eps, fraction(j, 64)); ++guard) {
    require(guard < 1 << 20, ErrorCode::ProgressGuard, "lemma41_solve did not converge");
    ++j;
  }
  while (j > 1 && lemma41_check(Lambda, t, D, eps, fraction(j - 1, 64))) --j;
  return fraction(j, 64);
}

Enclosure zeta_tail(const Rational& delta, std::uint64_t N, std::uint64_t exact_terms) {
  require(delta > 1, ErrorCode::InvalidParameter, "zeta tail needs delta > 1");
  require(N >= 1, ErrorCode::InvalidParameter, "zeta tail starts at N >= 1");
  Enclosure sum = Enclosure::exact(0);
  for (std::uint64_t m = N; m < N + exact_terms; ++m)
    sum = enclose::outward(sum + enclose::pow(Rational(m), -delta), kWorkBits);
  // Integral comparison for the convex tail: int_{L} <= sum_{m>=L} <= int_{L-1/2}.
  Rational L(N + exact_terms);
  Rational k = delta - 1;
  Enclosure lo = enclose::pow(L, -k) / Enclosure::exact(k);
  Enclosure hi = enclose::pow(L - Rational(1, 2), -k) / Enclosure::exact(k);
  return sum + Enclosure(lo.lo, hi.hi);
}

Lemma43Result lemma43_find_M(const Rational& eps, const Rational& delta, const Rational& gamma) {
  require(gamma > 0 && delta > gamma + 1, ErrorCode::PreconditionViolated, "requires delta > gamma + 1 > 1");
  require(eps > 0, ErrorCode::InvalidParameter, "epsilon must be positive");
  const Rational k = delta - 1;
  // h(N) = N^gamma (N - 1/2)^(1-delta) / (delta - 1) bounds N^gamma sum_{m>=N} m^-delta and
  // decreases in N because gamma < delta - 1.
  auto h_upper = [&](std::uint64_t N) {
    Enclosure v = enclose::pow(Rational(N), gamma) * enclose::pow(Rational(N) - Rational(1, 2), -k) /
                  Enclosure::exact(k);
    return v.hi;
  };
  std::uint64_t hi = 1;
  while (!(h_upper(hi) < eps)) {
    require(hi < (std::uint64_t{1} << 40), ErrorCode::ProgressGuard, "tail bound does not drop below epsilon");
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // h(lo) >= eps or lo == 0
  while (lo + 1 < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (h_upper(mid) < eps) hi = mid;
    else lo = mid;
  }
  Lemma43Result res;
  res.monotone_from = hi;

  auto check = [&](std::uint64_t N) {
    Enclosure tail = zeta_tail(delta, N);
    Enclosure bound = Enclosure::exact(eps) * enclose::pow(Rational(N), -gamma);
    return Lemma43Check{N, tail, bound, tail.hi < bound.lo};
  };
  require(hi <= (std::uint64_t{1} << 20), ErrorCode::ProgressGuard, "tail scan range too large");
  std::uint64_t M = hi;
  while (M > 1 && check(M - 1).holds) --M;
  res.M = M;
  if (M > 1) res.checks.push_back(check(M - 1));
  for (std::uint64_t N = M; N <= 4 * M; ++N) res.checks.push_back(check(N));
  return res;
}

Thm11Bound thm11_bound(const geom::CutOutConfig& config, const doubling::DoublingReport& nu, const Rational& R,
                       std::uint64_t N, const Rational& p) {
  require(nu.lemma21.has_value(), ErrorCode::PreconditionViolated, "doubling report carries no validated exponents");
  return thm11_bound(config, *nu.lemma21, R, N, p);
}

Thm11Bound thm11_bound(const geom::CutOutConfig& config, const doubling::Lemma21Fit& fit, const Rational& R,
                       std::uint64_t N, const Rational& p) {
  require(config.diam_family.has_value(), ErrorCode::InvalidParameter, "configuration declares no diameter family");
  require(N >= 1 && N <= config.balls.size(), ErrorCode::InvalidParameter, "N must lie in [1, number of balls]");
  require(R > 0, ErrorCode::InvalidParameter, "R must be positive");
  const Rational& s = fit.s;
  const Rational& t = fit.t;
  require(p > 0 && p < t / (R * s + 1), ErrorCode::ExponentWindowEmpty,
          "need 0 < p < t/(Rs+1) = " + to_string(Rational(t / (R * s + 1))));
  const SequenceFamily& f = *config.diam_family;
  require(seq::classify_ellp(f, p) == seq::Summability::Converges, ErrorCode::PreconditionViolated,
          "diameters are not p-summable");

  Thm11Bound out;
  geom::Gap gap = geom::largest_gap(config, N);
  out.gap_diameter = gap.diameter;
  // N^-R <= diam(G_N)
  require(compare_pow(Rational(N), -R, gap.diameter) <= 0, ErrorCode::GapTooSmall,
          "largest gap " + to_string(gap.diameter) + " below N^-R");

  out.first_term = fit.lambda * enclose::pow(Rational(N), -R * s).lo;
  std::uint64_t K = std::max<std::uint64_t>(config.balls.size(), 64);
  out.c_p_upper = (seq::partial_sum(f, p, K) + seq::tail_sum(f, p, K)).hi;
  out.zeta_upper = zeta_tail(t / p, N).hi;
  out.subtracted = enclose::pow(out.c_p_upper, t / p).hi * fit.Lambda * out.zeta_upper;
  out.value = enclose::outward(Enclosure::exact(out.first_term - out.subtracted), enclose::precision()).lo;
  out.conclusion = out.value > 0 ? Conclusion::Positive : Conclusion::Inconclusive;
  return out;
}

Enclosure assemble_C3(const Rational& c, const Rational& t, const Rational& C1, const Rational& C2, const Rational& C,
                      long m) {
  require(c > 0 && C1 > 0 && C2 > 0 && C >= 1, ErrorCode::InvalidParameter, "constants must be positive");
  return enclose::pow(c, -t) * Enclosure::exact(C1 * C2 * pow(C, m));
}

Example54Schedule example54_schedule(int stages) {
  require(stages >= 0, ErrorCode::InvalidParameter, "stage count must be non-negative");
  Example54Schedule s;
  s.k.push_back(1);
  for (int j = 1; j <= stages; ++j) {
    s.m.push_back(seq::log_floor_exponent(static_cast<std::uint64_t>(j)));
    s.k.push_back(s.k.back() + s.m.back());
  }
  return s;
}

kernels::LeafSchedule example54_leaf_schedule(int stages) {
  Example54Schedule s = example54_schedule(stages);
  const int L = s.leaf_depth();
  require(L <= 32, ErrorCode::DepthLimit, "leaf enumeration beyond depth 32");
  check_depth(L, "example54 leaf enumeration");
  kernels::LeafSchedule out;
  out.leaf_depth = L;
  for (int j = 0; j < stages; ++j) {
    std::uint32_t mask = 0;
    // 1-based level b from the root is bit L - b of the leaf index.
    for (auto b = s.k[static_cast<std::size_t>(j)]; b < s.k[static_cast<std::size_t>(j) + 1]; ++b)
      mask |= std::uint32_t{1} << (L - static_cast<int>(b));
    out.stage_masks.push_back(mask);
  }
  return out;
}

Rational example54_partial(const Rational& p, int stages) {
  require(p > 0 && p < 1, ErrorCode::InvalidParameter, "p must lie in (0,1)");
  Example54Schedule s = example54_schedule(stages);
  Rational prod = 1;
  for (auto m : s.m) prod *= 1 - pow(p, static_cast<long>(m));
  return prod;
}

std::vector<Rational> example54_masses(const std::vector<std::uint64_t>& histogram,
                                       const kernels::LeafSchedule& schedule, const Rational& p) {
  require(p > 0 && p < 1, ErrorCode::InvalidParameter, "p must lie in (0,1)");
  const std::size_t rows = schedule.rows(), cols = schedule.cols();
  require(histogram.size() == rows * cols, ErrorCode::InvalidParameter, "histogram shape mismatch");
  const long L = schedule.leaf_depth;
  std::vector<Rational> leaf_mass(cols);
  for (std::size_t ones = 0; ones < cols; ++ones)
    leaf_mass[ones] = pow(p, L - static_cast<long>(ones)) * pow(1 - p, static_cast<long>(ones));
  std::vector<Rational> row_mass(rows, Rational(0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t o = 0; o < cols; ++o)
      if (auto n = histogram[r * cols + o]) row_mass[r] += Rational(Integer(n)) * leaf_mass[o];
  // Survivors of the first J stages: rows J .. S (removed later, or never).
  std::vector<Rational> out(rows - 1);
  Rational suffix = row_mass[rows - 1];
  for (std::size_t J = rows - 1; J-- > 0;) {
    out[J] = suffix;
    suffix += row_mass[J];
  }
  return out;
}

std::vector<Rational> example54_brute_force(const Rational& p, int stages, unsigned workers) {
  kernels::LeafSchedule sched = example54_leaf_schedule(stages);
  auto hist = kernels::leaf_histogram(sched, 0, std::uint64_t{1} << sched.leaf_depth, workers);
  return example54_masses(hist, sched, p);
}

Example54Result example54_mass(const Rational& p, int stages, const Example54Options& options) {
  require(p > 0 && p < 1, ErrorCode::InvalidParameter, "p must lie in (0,1)");
  require(stages >= 1, ErrorCode::InvalidParameter, "need at least one stage");
  Example54Result res;
  res.p = p;
  res.stages = stages;
  res.partial = example54_partial(p, stages);
  if (options.brute_force) res.brute_force = example54_brute_force(p, stages).back();

  SequenceFamily x = SequenceFamily::log_floor(p);
  if (seq::classify_ellp(x, 1) == seq::Summability::Converges) {
    res.verdict = LimitVerdict::PositiveLimit;
    res.limit = product_bracket(x, options.limit_terms);
  } else {
    res.verdict = LimitVerdict::ZeroLimit;
    Rational prod = 1;
    for (std::uint64_t j = 1; j <= options.max_zero_stage; ++j) {
      prod *= 1 - seq::term(x, j);
      if (prod < options.zero_threshold) {
        res.zero_stage = j;
        res.zero_stage_partial = prod;
        break;
      }
    }
  }
  return res;
}

Example51Verdict example51_verdict(const std::vector<geom::RationalInterval>& intervals, const Rational& T,
                                   const std::optional<SequenceFamily>& family) {
  require(T > 0, ErrorCode::InvalidParameter, "T must be positive");
  Rational total = 0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    Rational len = intervals[i].diameter() * T;
    if (family)
      require(len == seq::term(*family, i + 1), ErrorCode::LengthMismatch,
              "interval " + std::to_string(i + 1) + " does not have length alpha_" + std::to_string(i + 1));
    total += len;
  }
  require(total <= T, ErrorCode::LengthMismatch, "interval lengths exceed T");
  if (family) {
    Enclosure sum = seq::tail_sum(*family, 1, 0);
    require(sum.is_exact() && sum.lo == T, ErrorCode::LengthMismatch, "declared lengths do not sum to T");
  }

  std::vector<geom::RationalInterval> sorted = intervals;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi) return Example51Verdict::Fat;
  if (family) return Example51Verdict::Thin;
  return total == T ? Example51Verdict::Thin : Example51Verdict::Fat;
}

std::string to_string(Conclusion c) { return c == Conclusion::Positive ? "Positive" : "Inconclusive"; }
std::string to_string(LimitVerdict v) { return v == LimitVerdict::PositiveLimit ? "PositiveLimit" : "ZeroLimit"; }
std::string to_string(Example51Verdict v) { return v == Example51Verdict::Thin ? "Thin" : "Fat"; }

}  // namespace dmlab::certify
