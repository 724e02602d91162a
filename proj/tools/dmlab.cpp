#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dmlab/cantor.hpp"
#include "dmlab/certify.hpp"
#include "dmlab/error.hpp"
#include "dmlab/experiments.hpp"
#include "dmlab/io.hpp"
#include "dmlab/limits.hpp"
#include "dmlab/porous.hpp"
#include "dmlab/thick.hpp"

using namespace dmlab;
using io::Json;

namespace {

struct Output {
  std::string out;   // report path; stdout when empty
  std::string plot;  // CSV path for plot data
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Parse, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Parse, "cannot write " + path);
  out << text;
}

// Inline JSON, or @path to read it from a file.
Json json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text.size() > 1 && text[0] == '@' ? slurp(text.substr(1)) : text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

Rational rat(const std::string& s) { return parse_rational(s); }

Json envelope(const std::string& command, Json inputs, Json results, Json plot = Json::array()) {
  Json r;
  r["schema_version"] = io::kSchemaVersion;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  r["results"] = std::move(results);
  r["plot"] = std::move(plot);
  return r;
}

void emit(const Json& report, const Output& o) {
  if (o.out.empty())
    std::cout << io::dump(report);
  else
    spill(o.out, io::dump(report));
  if (!o.plot.empty()) spill(o.plot, io::emit_plotdata(report));
}

void add_output(CLI::App* app, Output& o) {
  app->add_option("--out", o.out, "Write the JSON report here instead of stdout");
  app->add_option("--plot", o.plot, "Write long-format plot CSV here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact doubling-measure laboratory: Cantor sets, cut-out sets, masses and certificates"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  app.add_option_function<int>(
         "--max-depth", [](int d) { limits().max_depth = d; }, "Depth cap for every builder (default 30, or DMLAB_MAX_DEPTH)")
      ->trigger_on_parse()
      ->check(CLI::Range(0, 62));
  app.add_option_function<std::size_t>(
         "--max-nodes", [](std::size_t n) { limits().max_nodes = n; }, "Node cap for enumerations")
      ->trigger_on_parse();
  app.add_option("--seed", seed, "Seed for sampled configurations");

  int code = 0;
  Output o;

  // seq
  auto* seq_cmd = app.add_subcommand("seq", "Classify a sequence family and bound its power sums");
  std::string family_text;
  std::vector<std::string> ps{"1"};
  std::uint64_t n_terms = 8, tail_N = 16;
  seq_cmd->add_option("--family", family_text, "Family JSON, e.g. {\"kind\":\"geometric\",\"a\":\"1/2\",\"q\":\"1/2\"}")
      ->required();
  seq_cmd->add_option("--p", ps, "Exponents to classify");
  seq_cmd->add_option("--terms", n_terms, "Number of leading terms to list");
  seq_cmd->add_option("--tail", tail_N, "N for partial/tail sums");
  add_output(seq_cmd, o);
  seq_cmd->callback([&] {
    auto f = io::family_from_json(json_arg(family_text, "--family"));
    Json res;
    res["terms"] = Json::array();
    for (std::uint64_t n = 1; n <= n_terms && (!f.length() || n <= *f.length()); ++n)
      res["terms"].push_back(to_string(seq::term(f, n)));
    res["ell_p"] = Json::array();
    for (const auto& p : ps) {
      Rational pv = rat(p);
      Json row = {{"p", to_string(pv)}};
      row["summability"] = seq::classify_ellp(f, pv) == seq::Summability::Converges ? "Converges" : "Diverges";
      row["partial_sum"] = io::enclosure_json(seq::partial_sum(f, pv, tail_N));
      if (row["summability"] == "Converges") row["tail_sum"] = io::enclosure_json(seq::tail_sum(f, pv, tail_N));
      res["ell_p"].push_back(std::move(row));
    }
    auto e0 = seq::classify_ell0(f);
    res["ell0"] = e0.status == seq::Ell0Result::Status::InEll0      ? "InEll0"
                  : e0.status == seq::Ell0Result::Status::NotInEll0 ? "NotInEll0"
                                                                    : "Undecidable";
    if (e0.witness) res["ell0_witness_p"] = to_string(*e0.witness);
    emit(envelope("seq", {{"family", io::family_json(f)}, {"N", tail_N}}, res), o);
  });

  // cantor
  auto* cantor_cmd = app.add_subcommand("cantor", "Build a middle-interval Cantor tree");
  std::string beta_text;
  int depth = 4;
  bool with_nodes = false;
  cantor_cmd->add_option("--beta", beta_text, "Gap-ratio family JSON")->required();
  cantor_cmd->add_option("--depth", depth, "Number of levels");
  cantor_cmd->add_flag("--nodes", with_nodes, "List every node and gap");
  add_output(cantor_cmd, o);
  cantor_cmd->callback([&] {
    auto beta = io::family_from_json(json_arg(beta_text, "--beta"));
    auto tree = geom::build_cantor(beta, depth);
    std::vector<std::pair<Rational, Rational>> pts;
    for (int k = 0; k <= depth; ++k) pts.emplace_back(k, tree.level_total_length(k));
    emit(envelope("cantor", {{"beta", io::family_json(beta)}, {"depth", depth}}, io::tree_json(tree, with_nodes),
                  Json::array({io::plot_series("level_total_length", pts)})),
         o);
  });

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Exact masses of intervals and cut-out sets");
  std::string measure_text = R"({"kind":"binomial","p":"1/2"})";
  std::vector<std::string> interval_text;
  std::string config_text, cdf_text;
  std::size_t cut_N = 0;
  int mdepth = 10;
  measure_cmd->add_option("--measure", measure_text, "Measure JSON");
  measure_cmd->add_option("--interval", interval_text, "Closed interval endpoints: LO HI")->expected(2);
  measure_cmd->add_option("--cutout", config_text, "Cut-out configuration JSON");
  measure_cmd->add_option("--N", cut_N, "Number of balls removed (default: all)");
  measure_cmd->add_option("--cdf", cdf_text, "Evaluate the distribution function at x");
  measure_cmd->add_option("--depth", mdepth, "Resolution depth");
  add_output(measure_cmd, o);
  measure_cmd->callback([&] {
    auto m = io::measure_from_json(json_arg(measure_text, "--measure"));
    Json inputs = {{"measure", io::measure_json(m)}, {"depth", mdepth}};
    Json res;
    if (!interval_text.empty()) {
      geom::RationalInterval I(rat(interval_text[0]), rat(interval_text[1]));
      inputs["interval"] = io::interval_json(I);
      res["interval_mass"] = io::mass_json(measure::interval_mass(m, I, mdepth));
    }
    if (!config_text.empty()) {
      auto c = io::config_from_json(json_arg(config_text, "--cutout"));
      std::size_t N = cut_N ? cut_N : c.balls.size();
      inputs["cutout"] = io::config_json(c);
      inputs["N"] = N;
      res["cutout_mass"] = io::mass_json(measure::cutout_mass(m, c, N, mdepth));
      res["largest_gap"] = io::interval_json(geom::largest_gap(c, N).interval);
    }
    if (!cdf_text.empty()) {
      inputs["x"] = to_string(rat(cdf_text));
      res["cdf"] = io::mass_json(measure::cdf(m, rat(cdf_text), mdepth));
    }
    require(!res.is_null(), ErrorCode::InvalidParameter, "give --interval, --cutout or --cdf");
    emit(envelope("measure", inputs, res), o);
  });

  // doubling scan
  auto* doubling_cmd = app.add_subcommand("doubling", "Doubling-constant scans");
  doubling_cmd->require_subcommand(1);
  auto* scan_cmd = doubling_cmd->add_subcommand("scan", "Scan mu(B(x,2r))/mu(B(x,r)) over a dyadic grid");
  std::string scan_measure = R"({"kind":"binomial","p":"1/2"})";
  int scan_depth = 10;
  std::size_t eq21_samples = 0;
  scan_cmd->add_option("--measure", scan_measure, "Measure JSON");
  scan_cmd->add_option("--depth", scan_depth, "Finest radius 2^-depth");
  scan_cmd->add_option("--eq21", eq21_samples, "Also check the ball/set inequality on this many sampled configurations");
  add_output(scan_cmd, o);
  scan_cmd->callback([&] {
    auto m = io::measure_from_json(json_arg(scan_measure, "--measure"));
    auto rep = doubling::doubling_scan(m, scan_depth);
    Json res = io::doubling_json(rep);
    if (eq21_samples) {
      auto configs = doubling::sample_eq21(m, scan_depth, eq21_samples, seed);
      auto out = doubling::verify_eq21(m, rep.C, configs, rep.eval_depth);
      res["eq21"] = io::eq21_json(out);
      if (out.status != doubling::Eq21Status::Holds) code = 2;
    }
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& row : rep.ratio_by_scale) pts.emplace_back(row.r, row.max_ratio);
    emit(envelope("doubling scan", {{"measure", io::measure_json(m)}, {"depth", scan_depth}, {"seed", seed}}, res,
                  Json::array({io::plot_series("doubling_ratio_by_scale", pts)})),
         o);
  });

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "Fatness and thinness certificates");
  certify_cmd->require_subcommand(1);

  auto* fat_cmd = certify_cmd->add_subcommand("fat", "Product lower bound for a thick Cantor tree");
  std::string fat_beta = R"({"kind":"geometric","a":"1/2","q":"1/2"})";
  int fat_depth = 8;
  std::string fat_t = "1", fat_C3N = "1";
  fat_cmd->add_option("--beta", fat_beta, "Gap-ratio family JSON (also the thickness sequence)");
  fat_cmd->add_option("--depth", fat_depth, "Verified depth");
  fat_cmd->add_option("--t", fat_t, "Exponent t");
  fat_cmd->add_option("--C3N", fat_C3N, "Constant C3*N");
  add_output(fat_cmd, o);
  fat_cmd->callback([&] {
    auto beta = io::family_from_json(json_arg(fat_beta, "--beta"));
    auto tree = geom::build_cantor(beta, fat_depth);
    auto cert = certify::certify_fat_thick(geom::thick_from_cantor(tree), rat(fat_t), rat(fat_C3N));
    if (cert.conclusion != certify::Conclusion::Positive) code = 2;
    emit(envelope("certify fat", {{"beta", io::family_json(beta)}, {"depth", fat_depth}}, io::fatness_json(cert)), o);
  });

  auto* thin_cmd = certify_cmd->add_subcommand("thin", "Decay curve for a porous construction");
  std::string thin_alpha = R"({"kind":"constant","a":"1/2"})", thin_s = "1", thin_c = "1", thin_eps = "1/1000";
  thin_cmd->add_option("--alpha", thin_alpha, "Porosity family JSON");
  thin_cmd->add_option("--s", thin_s, "Exponent s");
  thin_cmd->add_option("--c", thin_c, "Constant c");
  thin_cmd->add_option("--epsilon", thin_eps, "Target mass fraction");
  add_output(thin_cmd, o);
  thin_cmd->callback([&] {
    auto alpha = io::family_from_json(json_arg(thin_alpha, "--alpha"));
    auto cert = certify::certify_thin_porous(alpha, rat(thin_s), rat(thin_c), rat(thin_eps));
    std::vector<std::pair<Rational, Rational>> pts;
    for (std::size_t i = 0; i < cert.decay_curve.size() && i < 64; ++i) pts.emplace_back(i + 1, cert.decay_curve[i]);
    emit(envelope("certify thin", {{"alpha", io::family_json(alpha)}}, io::thinness_json(cert),
                  Json::array({io::plot_series("decay_curve", pts)})),
         o);
  });

  auto* cut_cmd = certify_cmd->add_subcommand("cutout", "Lower bound on the measure of a cut-out set");
  std::string cut_config, cut_measure = R"({"kind":"binomial","p":"1/2"})", cut_R = "1", cut_p = "1/4";
  int cut_depth = 8;
  std::uint64_t cut_bound_N = 0;
  cut_cmd->add_option("--config", cut_config, "Cut-out configuration JSON (with diam_family)")->required();
  cut_cmd->add_option("--measure", cut_measure, "Doubling measure JSON to scan for constants");
  cut_cmd->add_option("--depth", cut_depth, "Scan depth");
  cut_cmd->add_option("--R", cut_R, "Gap exponent R");
  cut_cmd->add_option("--p", cut_p, "Summability exponent p");
  cut_cmd->add_option("--N", cut_bound_N, "Use this N (default: first positive)");
  add_output(cut_cmd, o);
  cut_cmd->callback([&] {
    auto c = io::config_from_json(json_arg(cut_config, "--config"));
    auto m = io::measure_from_json(json_arg(cut_measure, "--measure"));
    auto scan = doubling::doubling_scan(m, cut_depth);
    Json res;
    res["doubling"] = io::doubling_json(scan);
    std::vector<std::pair<Rational, Rational>> pts;
    std::optional<certify::Thm11Bound> chosen;
    std::uint64_t chosen_N = 0;
    Json too_small = Json::array();
    for (std::uint64_t N = cut_bound_N ? cut_bound_N : 1; N <= (cut_bound_N ? cut_bound_N : c.balls.size()); ++N) {
      certify::Thm11Bound b;
      try {
        b = certify::thm11_bound(c, scan, rat(cut_R), N, rat(cut_p));
      } catch (const Error& e) {
        // While searching, N whose largest gap is below N^-R are skipped.
        if (cut_bound_N || e.code() != ErrorCode::GapTooSmall) throw;
        too_small.push_back(N);
        continue;
      }
      pts.emplace_back(N, b.value);
      if (!chosen && (cut_bound_N || b.conclusion == certify::Conclusion::Positive)) {
        chosen = b;
        chosen_N = N;
      }
    }
    if (!cut_bound_N) res["gap_too_small_N"] = too_small;
    if (chosen) {
      res["N"] = chosen_N;
      res["bound"] = io::thm11_json(*chosen);
    }
    if (!chosen || chosen->conclusion != certify::Conclusion::Positive) code = 2;
    emit(envelope("certify cutout",
                  {{"config", io::config_json(c)}, {"measure", io::measure_json(m)}, {"R", cut_R}, {"p", cut_p}}, res,
                  Json::array({io::plot_series("thm11_bound", pts)})),
         o);
  });

  auto* ex54_cmd = certify_cmd->add_subcommand("example54", "Binomial mass of the stage-schedule removal set");
  ex54_cmd->description("Binomial mass of the left-most-interval removal set with stages m_j = floor(log2(j+1))");
  std::string ex54_p = "1/3";
  int ex54_stages = 12;
  bool ex54_no_brute = false;
  ex54_cmd->add_option("--p", ex54_p, "Left weight p");
  ex54_cmd->add_option("--stages", ex54_stages, "Number of stages");
  ex54_cmd->add_flag("--no-brute-force", ex54_no_brute, "Skip the leaf enumeration");
  add_output(ex54_cmd, o);
  ex54_cmd->callback([&] {
    certify::Example54Options eo;
    eo.brute_force = !ex54_no_brute;
    auto res = certify::example54_mass(rat(ex54_p), ex54_stages, eo);
    if (res.brute_force && *res.brute_force != res.partial) code = 1;
    std::vector<std::pair<Rational, Rational>> pts;
    for (int j = 1; j <= ex54_stages; ++j) pts.emplace_back(j, certify::example54_partial(res.p, j));
    emit(envelope("certify example54", {{"p", to_string(res.p)}, {"stages", ex54_stages}}, io::example54_json(res),
                  Json::array({io::plot_series("partial_product", pts)})),
         o);
  });

  // qs
  auto* qs_cmd = app.add_subcommand("qs", "Quasisymmetric maps from measures");
  qs_cmd->require_subcommand(1);
  auto* qscan_cmd = qs_cmd->add_subcommand("scan", "Triple-ratio distortion table");
  std::string qs_measure = R"({"kind":"binomial","p":"1/3"})";
  int qs_depth = 8;
  std::size_t qs_random = 0;
  bool qs_csv = false;
  qscan_cmd->add_option("--measure", qs_measure, "Measure JSON");
  qscan_cmd->add_option("--depth", qs_depth, "Finest spacing 2^-depth");
  qscan_cmd->add_option("--random", qs_random, "Extra random triples (seeded by --seed)");
  qscan_cmd->add_flag("--csv", qs_csv, "Print the table as CSV");
  add_output(qscan_cmd, o);
  qscan_cmd->callback([&] {
    auto m = io::measure_from_json(json_arg(qs_measure, "--measure"));
    qs::QSMap f{m, qs_depth + 2};
    qs::RatioScanOptions ro;
    ro.random_triples = qs_random;
    ro.seed = seed;
    auto rows = qs::qs_ratio_scan(f, qs_depth, ro);
    if (qs_csv) {
      if (o.out.empty())
        std::cout << io::ratio_rows_csv(rows);
      else
        spill(o.out, io::ratio_rows_csv(rows));
      return;
    }
    emit(envelope("qs scan", {{"measure", io::measure_json(m)}, {"depth", qs_depth}, {"seed", seed}},
                  {{"rows", io::ratio_rows_json(rows)}}),
         o);
  });
  auto* pull_cmd = qs_cmd->add_subcommand("pullback", "Doubling constant of a pulled-back measure");
  std::string pull_C, pull_eta2;
  pull_cmd->add_option("--C", pull_C, "Doubling constant of the target measure")->required();
  pull_cmd->add_option("--eta2", pull_eta2, "eta(2) of the quasisymmetric gauge")->required();
  add_output(pull_cmd, o);
  pull_cmd->callback([&] {
    auto e = qs::pullback_constant(rat(pull_C), rat(pull_eta2));
    emit(envelope("qs pullback", {{"C", to_string(rat(pull_C))}, {"eta2", to_string(rat(pull_eta2))}},
                  {{"constant", io::enclosure_json(e)}}),
         o);
  });

  // example
  auto* ex_cmd = app.add_subcommand("example", "Run a named experiment and check its statement");
  std::string ex_name, ex_config;
  std::vector<std::string> ex_sets;
  bool ex_timing = false;
  unsigned ex_workers = 0;
  ex_cmd->add_option("name", ex_name, "Experiment name")
      ->required()
      ->check(CLI::IsMember(experiments::example_names()));
  ex_cmd->add_option("--config", ex_config, "JSON object of parameter overrides (inline or @file)");
  ex_cmd->add_option("--set", ex_sets, "Override one parameter: key=value");
  ex_cmd->add_flag("--timing", ex_timing, "Record wall time (breaks byte-stability)");
  ex_cmd->add_option("--workers", ex_workers, "Worker threads for enumerations (0: all cores)");
  add_output(ex_cmd, o);
  ex_cmd->callback([&] {
    Json overrides = ex_config.empty() ? Json::object() : json_arg(ex_config, "--config");
    for (const auto& s : ex_sets) {
      auto eq = s.find('=');
      require(eq != std::string::npos && eq > 0, ErrorCode::Parse, "--set expects key=value, got " + s);
      std::string value = s.substr(eq + 1);
      Json v = Json::parse(value, nullptr, false);
      overrides[s.substr(0, eq)] = v.is_discarded() ? Json(value) : v;
    }
    experiments::RunOptions ro;
    ro.timing = ex_timing;
    ro.workers = ex_workers;
    Json rep = experiments::run_example(ex_name, overrides, ro);
    emit(rep, o);
    code = experiments::exit_code(experiments::report_status(rep));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
