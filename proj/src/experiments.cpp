#include "dmlab/experiments.hpp"

#include <chrono>
#include <set>
#include <thread>

#include "dmlab/certify.hpp"
#include "dmlab/error.hpp"
#include "dmlab/limits.hpp"
#include "dmlab/porous.hpp"
#include "dmlab/thick.hpp"

namespace dmlab::experiments {

using io::Json;
using seq::SequenceFamily;
using dmlab::to_string;

namespace {

// Typed access to the override object; leftover keys are an error.
class Params {
 public:
  explicit Params(Json j) : j_(std::move(j)) {
    require(j_.is_object(), ErrorCode::Parse, "overrides must be a JSON object");
  }

  Rational rational(const std::string& key, const Rational& fallback) {
    if (!take(key)) return fallback;
    return io::rational_from_json(j_.at(key));
  }

  int integer(const std::string& key, int fallback) {
    if (!take(key)) return fallback;
    const Json& v = j_.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
      Rational q = parse_rational(v.get<std::string>());
      require(is_integer(q) && q.get_num().fits_sint_p(), ErrorCode::Parse, key + " must be an integer");
      return static_cast<int>(q.get_num().get_si());
    }
    fail(ErrorCode::Parse, key + " must be an integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!take(key)) return fallback;
    const Json& v = j_.at(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v == "true") return true;
    if (v == "false") return false;
    fail(ErrorCode::Parse, key + " must be true or false");
  }

  SequenceFamily family(const std::string& key, const SequenceFamily& fallback) {
    if (!take(key)) return fallback;
    const Json& v = j_.at(key);
    return io::family_from_json(v.is_string() ? Json::parse(v.get<std::string>()) : v);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      require(used_.count(k) > 0, ErrorCode::Parse, "unknown override \"" + k + "\"");
  }

 private:
  bool take(const std::string& key) {
    if (!j_.contains(key)) return false;
    used_.insert(key);
    return true;
  }

  Json j_;
  std::set<std::string> used_;
};

Json check(const std::string& statement, Status status, const std::string& detail) {
  return {{"statement", statement}, {"status", to_string(status)}, {"detail", detail}};
}

Json report(const std::string& name, Json inputs, Json results, Json chk, Json plot = Json::array()) {
  Json r;
  r["schema_version"] = io::kSchemaVersion;
  r["experiment"] = name;
  r["inputs"] = std::move(inputs);
  r["results"] = std::move(results);
  r["check"] = std::move(chk);
  r["plot"] = std::move(plot);
  return r;
}

// Closed intervals of lengths alpha_1..alpha_n laid end to end from 0.
std::vector<geom::RationalInterval> left_packed(const SequenceFamily& alpha, std::size_t n) {
  std::vector<geom::RationalInterval> out;
  Rational at = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    Rational len = seq::term(alpha, i);
    out.emplace_back(at, at + len);
    at += len;
  }
  return out;
}

Json ex5_1(Params& P, const RunOptions&) {
  SequenceFamily alpha = P.family("alpha", SequenceFamily::geometric(Rational(1, 2), Rational(1, 2)));
  int count = P.integer("intervals", 16);
  P.finish();
  require(count >= 2, ErrorCode::InvalidParameter, "need at least two intervals");
  check_nodes(static_cast<std::size_t>(count), "ex5_1 intervals");

  Enclosure T = seq::tail_sum(alpha, 1, 0);
  require(T.is_exact(), ErrorCode::Undecidable, "the total length must be an exact rational");
  auto ell0 = seq::classify_ell0(alpha);

  auto tiling = left_packed(alpha, static_cast<std::size_t>(count));
  for (auto& I : tiling) I = geom::RationalInterval(I.lo / T.lo, I.hi / T.lo);
  // Slide the second interval halfway back over the first.
  auto overlap = tiling;
  Rational shift = overlap[1].diameter() / 2;
  overlap[1] = geom::RationalInterval(overlap[1].lo - shift, overlap[1].hi - shift);

  auto v_tiling = certify::example51_verdict(tiling, T.lo, alpha);
  auto v_overlap = certify::example51_verdict(overlap, T.lo, alpha);

  // Lebesgue mass of E: the tail for the tiling, at least the uncovered slot for the overlap.
  Rational tail_tiling = 1 - geom::total_length(geom::merge_closed(tiling));
  Rational uncovered = shift * T.lo;

  Json inputs = {{"alpha", io::family_json(alpha)}, {"intervals", count}, {"T", io::number_json(T.lo)}};
  Json results;
  results["ell0"] = ell0.status == seq::Ell0Result::Status::InEll0      ? "InEll0"
                    : ell0.status == seq::Ell0Result::Status::NotInEll0 ? "NotInEll0"
                                                                        : "Undecidable";
  results["tiling"] = {{"verdict", certify::to_string(v_tiling)},
                       {"lebesgue_uncovered_after_prefix", io::number_json(tail_tiling * T.lo)}};
  results["overlapping"] = {{"verdict", certify::to_string(v_overlap)},
                            {"moved_interval", io::interval_json(overlap[1])},
                            {"lebesgue_lower_bound", io::number_json(uncovered)}};

  bool ok = v_tiling == certify::Example51Verdict::Thin && v_overlap == certify::Example51Verdict::Fat;
  Status st = ell0.status != seq::Ell0Result::Status::InEll0 ? Status::Inconclusive : ok ? Status::Pass : Status::Fail;
  return report("ex5_1", inputs, results,
                check("E is thin if and only if the interiors of the intervals are pairwise disjoint", st,
                      "disjoint tiling: " + certify::to_string(v_tiling) +
                          "; overlapping variant: " + certify::to_string(v_overlap)));
}

Json ex5_2(Params& P, const RunOptions&) {
  SequenceFamily beta = P.family("beta", SequenceFamily::power(1, 2, 1));
  Rational s = P.rational("s", Rational(3, 5));
  Rational r = P.rational("r", Rational(2, 5));
  int N = P.integer("N", 10000);
  int depth = P.integer("depth", 16);
  P.finish();
  require(0 < r && r < s && s < 1, ErrorCode::InvalidParameter, "need 0 < r < s < 1");
  require(N >= 1, ErrorCode::InvalidParameter, "N must be positive");

  auto in_s = seq::classify_ellp(beta, s);
  auto in_r = seq::classify_ellp(beta, r);
  auto tree = geom::build_cantor(beta, depth);
  auto bracket = certify::product_bracket(beta, static_cast<std::uint64_t>(N));

  std::vector<std::pair<Rational, Rational>> pts;
  bool lengths_match = true;
  Rational running = 1;
  for (int k = 1; k <= depth; ++k) {
    running *= 1 - seq::term(beta, static_cast<std::uint64_t>(k));
    Rational len = tree.level_total_length(k);
    lengths_match = lengths_match && len == running;
    pts.emplace_back(k, len);
  }

  auto word = [](seq::Summability x) { return x == seq::Summability::Converges ? "Converges" : "Diverges"; };
  Json inputs = {{"beta", io::family_json(beta)}, {"s", to_string(s)}, {"r", to_string(r)}, {"N", N}, {"depth", depth}};
  Json results;
  results["sum_beta_pow_s"] = word(in_s);
  results["sum_beta_pow_r"] = word(in_r);
  results["lebesgue_mass"] = io::product_json(bracket);
  results["tree_lengths_match_product"] = lengths_match;
  results["not_thin_witnessed"] = bracket.lower() > 0;
  results["fatness"] = {{"status", "open"},
                        {"flag", "desk-scale cannot refute"},
                        {"note", "no finite computation separates fat from not fat; the literature answers neither thin nor fat"}};

  bool membership = in_s == seq::Summability::Converges && in_r == seq::Summability::Diverges;
  Status st = membership && lengths_match && bracket.lower() > 0 ? Status::Pass : Status::Fail;
  return report("ex5_2", inputs, results,
                check("beta lies in l^s but not l^r and C(beta) has positive Lebesgue measure, so it is not thin", st,
                      "Lebesgue mass in [" + to_decimal(bracket.lower()) + ", " + to_decimal(bracket.upper()) + "]"),
                Json::array({io::plot_series("lebesgue_mass", pts)}));
}

Json ex5_4(Params& P, const RunOptions& opt) {
  Rational p = P.rational("p", Rational(1, 3));
  int stages = P.integer("stages", 12);
  bool brute = P.boolean("brute_force", true);
  P.finish();
  require(0 < p && p < 1, ErrorCode::InvalidParameter, "p must lie in (0,1)");

  certify::Example54Options eo;
  eo.brute_force = brute;
  certify::Example54Result res = certify::example54_mass(p, stages, eo);

  std::vector<Rational> masses;
  if (brute) {
    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    masses = certify::example54_brute_force(p, stages, workers);
  }
  std::vector<std::pair<Rational, Rational>> pts;
  Json rows = Json::array();
  bool monotone = true, agree = true;
  Rational prev = 1;
  for (int j = 1; j <= stages; ++j) {
    Rational part = certify::example54_partial(p, j);
    monotone = monotone && part <= prev;
    prev = part;
    pts.emplace_back(j, part);
    Json row = {{"stage", j}, {"partial_product", io::number_json(part)}};
    if (brute) {
      const Rational& b = masses[static_cast<std::size_t>(j - 1)];
      agree = agree && b == part;
      row["brute_force"] = io::number_json(b);
    }
    rows.push_back(std::move(row));
  }

  auto sched = certify::example54_schedule(stages);
  Json inputs = {{"p", to_string(p)}, {"stages", stages}, {"brute_force", brute}};
  Json results = io::example54_json(res);
  results["schedule"] = {{"m", sched.m}, {"k", sched.k}, {"leaf_depth", sched.leaf_depth()}};
  results["stages_table"] = std::move(rows);
  results["monotone_nonincreasing"] = monotone;

  const bool expect_positive = p < Rational(1, 2);
  bool verdict_ok = (res.verdict == certify::LimitVerdict::PositiveLimit) == expect_positive;
  bool certified = expect_positive ? res.limit && res.limit->lower() > 0
                                   : res.zero_stage_partial && *res.zero_stage_partial < eo.zero_threshold;
  Status st = verdict_ok && certified && monotone && agree ? Status::Pass : Status::Fail;
  std::string detail = "verdict " + certify::to_string(res.verdict);
  if (res.limit) detail += ", limit in [" + to_decimal(res.limit->lower()) + ", " + to_decimal(res.limit->upper()) + "]";
  if (res.zero_stage) detail += ", partial product below 1e-6 at stage " + std::to_string(*res.zero_stage);
  if (brute) detail += agree ? ", brute force matches" : ", brute force MISMATCH";
  return report("ex5_4", inputs, results,
                check("mu_p(E) > 0 exactly when p < 1/2 (mu_1/3(E) > 0 and mu_2/3(E) = 0)", st, detail),
                Json::array({io::plot_series("partial_product", pts)}));
}

Json prop2_3(Params& P, const RunOptions&) {
  SequenceFamily alpha = P.family("alpha", SequenceFamily::constant(Rational(1, 2)));
  Rational s = P.rational("s", 1);
  Rational c = P.rational("c", Rational(1, 2));
  Rational eps = P.rational("epsilon", Rational(1, 1000));
  int stages = P.integer("stages", 8);
  P.finish();

  auto cert = certify::certify_thin_porous(alpha, s, c, eps);
  auto porous = geom::build_porous(alpha, stages);
  Rational base = geom::total_length(porous.stages[0]);

  std::vector<std::pair<Rational, Rational>> lebesgue, curve;
  bool below = true;
  for (int n = 1; n <= stages; ++n) {
    Rational m = geom::total_length(porous.stages[static_cast<std::size_t>(n)]) / base;
    lebesgue.emplace_back(n, m);
    if (static_cast<std::size_t>(n) <= cert.decay_curve.size()) {
      const Rational& u = cert.decay_curve[static_cast<std::size_t>(n - 1)];
      curve.emplace_back(n, u);
      below = below && m <= u;
    }
  }

  Json inputs = {{"alpha", io::family_json(alpha)}, {"s", to_string(s)}, {"c", to_string(c)},
                 {"epsilon", to_string(eps)},       {"stages", stages}};
  Json results;
  results["certificate"] = io::thinness_json(cert);
  results["lebesgue_below_curve"] = below;
  Status st = below ? Status::Pass : Status::Fail;
  return report("prop2_3", inputs, results,
                check("mu(F_n) decays below epsilon by a certified stage when sum alpha_n^s diverges", st,
                      "n* = " + std::to_string(cert.n_star) + (below ? ", Lebesgue masses stay below the curve"
                                                                     : ", Lebesgue mass exceeds the curve")),
                Json::array({io::plot_series("decay_curve", curve), io::plot_series("lebesgue_relative_mass", lebesgue)}));
}

Json thm3_2(Params& P, const RunOptions&) {
  SequenceFamily beta = P.family("beta", SequenceFamily::geometric(Rational(1, 2), Rational(1, 2)));
  int depth = P.integer("depth", 8);
  Rational t = P.rational("t", 1);
  Rational C3N = P.rational("C3N", 1);
  int terms = P.integer("terms", 256);
  P.finish();

  auto tree = geom::build_cantor(beta, depth);
  auto ts = geom::thick_from_cantor(tree);
  auto cert = certify::certify_fat_thick(ts, t, C3N, static_cast<std::uint64_t>(terms));

  std::vector<std::pair<Rational, Rational>> pts;
  for (int k = 0; k <= depth; ++k) pts.emplace_back(k, tree.level_total_length(k));

  Json inputs = {{"beta", io::family_json(beta)}, {"depth", depth}, {"t", to_string(t)}, {"C3N", to_string(C3N)},
                 {"terms", terms}};
  Json results;
  results["tree"] = io::tree_json(tree, false);
  results["thick_structure"] = {{"c", to_string(ts.c)}, {"overlap_bound", ts.overlap_bound}};
  results["certificate"] = io::fatness_json(cert);
  Status st = cert.conclusion == certify::Conclusion::Positive ? Status::Pass : Status::Inconclusive;
  return report("thm3_2", inputs, results,
                check("an (alpha_n)-thick set with alpha in l^0 is fat", st,
                      "product lower bound " + to_decimal(cert.bound.lower()) + " from N0 = " + std::to_string(cert.N0)),
                Json::array({io::plot_series("level_total_length", pts)}));
}

Json thm1_1(Params& P, const RunOptions&) {
  SequenceFamily diam = P.family("diameters", SequenceFamily::geometric(Rational(1, 4), Rational(1, 2)));
  int balls = P.integer("balls", 32);
  int depth = P.integer("depth", 8);
  Rational R = P.rational("R", 1);
  Rational p = P.rational("p", Rational(1, 4));
  P.finish();
  require(balls >= 1, ErrorCode::InvalidParameter, "need at least one ball");

  auto config = geom::make_unit_config(left_packed(diam, static_cast<std::size_t>(balls)), diam);
  config.validate();
  auto nu = measure::TreeMeasure::lebesgue();
  auto scan = doubling::doubling_scan(nu, depth);

  std::vector<std::pair<Rational, Rational>> pts;
  Json rows = Json::array();
  std::optional<int> first;
  std::optional<certify::Thm11Bound> first_bound;
  Json skipped = Json::array();
  for (int N = 1; N <= balls; ++N) {
    certify::Thm11Bound b;
    try {
      b = certify::thm11_bound(config, scan, R, static_cast<std::uint64_t>(N), p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GapTooSmall) throw;
      skipped.push_back(N);  // largest gap still below N^-R
      continue;
    }
    pts.emplace_back(N, b.value);
    if (!first && b.conclusion == certify::Conclusion::Positive) {
      first = N;
      first_bound = b;
    }
  }

  Json inputs = {{"diameters", io::family_json(diam)}, {"balls", balls}, {"depth", depth}, {"R", to_string(R)},
                 {"p", to_string(p)}};
  Json results;
  results["configuration"] = io::config_json(config);
  results["doubling"] = io::doubling_json(scan);
  results["gap_too_small_N"] = std::move(skipped);
  if (first) {
    results["first_positive_N"] = *first;
    results["bound"] = io::thm11_json(*first_bound);
  } else {
    results["first_positive_N"] = nullptr;
  }
  Status st = first ? Status::Pass : Status::Inconclusive;
  return report("thm1_1", inputs, results,
                check("the cut-out set has positive measure for every doubling measure", st,
                      first ? "bound positive from N = " + std::to_string(*first) + ": " + to_decimal(first_bound->value)
                            : "bound never positive within the scanned balls"),
                Json::array({io::plot_series("thm11_bound", pts)}));
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"ex5_1", "ex5_2", "ex5_4", "prop2_3", "thm3_2", "thm1_1"};
  return names;
}

Json run_example(const std::string& name, const Json& overrides, const RunOptions& options) {
  Params P(overrides.is_null() ? Json::object() : overrides);
  auto start = std::chrono::steady_clock::now();
  Json out;
  try {
    if (name == "ex5_1") out = ex5_1(P, options);
    else if (name == "ex5_2") out = ex5_2(P, options);
    else if (name == "ex5_4") out = ex5_4(P, options);
    else if (name == "prop2_3") out = prop2_3(P, options);
    else if (name == "thm3_2") out = thm3_2(P, options);
    else if (name == "thm1_1") out = thm1_1(P, options);
    else fail(ErrorCode::InvalidParameter, "unknown example \"" + name + "\"");
  } catch (const Error& e) {
    std::string msg = e.what();
    auto cut = msg.find(": ");
    throw Error(e.code(), "example " + name + ": " + (cut == std::string::npos ? msg : msg.substr(cut + 2)));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, "example " + name + ": " + e.what());
  }
  if (options.timing) {
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    out["wall_time_seconds"] = dt.count();
  }
  return out;
}

Status report_status(const Json& report) {
  const std::string s = report.at("check").at("status").get<std::string>();
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  return Status::Inconclusive;
}

int exit_code(Status s) {
  switch (s) {
    case Status::Pass: return 0;
    case Status::Inconclusive: return 2;
    case Status::Fail: return 1;
  }
  return 1;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "fail";
}

}  // namespace dmlab::experiments
