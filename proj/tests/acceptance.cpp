// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dmlab/certify.hpp"
#include "dmlab/doubling.hpp"
#include "dmlab/error.hpp"
#include "dmlab/experiments.hpp"
#include "dmlab/kernels/leaf_histogram.hpp"
#include "dmlab/qs.hpp"

using namespace dmlab;
using measure::TreeMeasure;
using seq::SequenceFamily;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string dec(const Rational& q) { return to_decimal(q, 10); }

Outcome schedule_exactness() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const int stages = 12;
  auto schedule = certify::example54_leaf_schedule(stages);
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  auto hist = kernels::leaf_histogram(schedule, 0, std::uint64_t{1} << schedule.leaf_depth, workers);
  for (const Rational& p : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
    auto masses = certify::example54_masses(hist, schedule, p);
    for (int j = 1; j <= stages; ++j) {
      // Closed form with m_i = floor(log2(i+1)).
      Rational closed = 1;
      for (int i = 1; i <= j; ++i) closed *= 1 - pow(p, static_cast<long>(std::floor(std::log2(i + 1.0))));
      o.expect(masses[static_cast<std::size_t>(j - 1)] == closed,
               "p=" + to_string(p) + " stage " + std::to_string(j) + " mismatch");
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.expect(secs < 10, "took " + std::to_string(secs) + " s");
  if (o.pass)
    o.detail = "4 x 12 stages exact, leaf depth " + std::to_string(schedule.leaf_depth) + ", " +
               std::to_string(secs).substr(0, 5) + " s";
  return o;
}

Outcome schedule_verdicts() {
  Outcome o;
  certify::Example54Options opt;
  opt.brute_force = false;
  opt.limit_terms = 4096;
  auto lo = certify::example54_mass(Rational(1, 3), 12, opt);
  o.expect(lo.verdict == certify::LimitVerdict::PositiveLimit, "p=1/3 not PositiveLimit");
  o.expect(lo.limit.has_value() && lo.limit->N >= 4096, "p=1/3 bracket missing or short");
  if (!o.pass) return o;
  o.expect(lo.limit->lower() >= Rational(1, 10), "p=1/3 lower bound " + dec(lo.limit->lower()));
  auto hi = certify::example54_mass(Rational(2, 3), 12, opt);
  o.expect(hi.verdict == certify::LimitVerdict::ZeroLimit, "p=2/3 not ZeroLimit");
  o.expect(hi.zero_stage_partial && *hi.zero_stage_partial < Rational(1, 1000000), "p=2/3 partial not below 1e-6");
  if (o.pass)
    o.detail = "p=1/3 in [" + dec(lo.limit->lower()) + ", " + dec(lo.limit->upper()) + "]; p=2/3 below 1e-6 at stage " +
               std::to_string(*hi.zero_stage);
  return o;
}

Outcome telescoping() {
  Outcome o;
  auto b = certify::product_bracket(SequenceFamily::power(1, 2, 1), 10000);
  const Rational half(1, 2);
  o.expect(b.lower() <= half && half <= b.upper(), "1/2 not enclosed");
  o.expect(b.upper() - b.lower() <= Rational(1, 1000), "width " + dec(b.upper() - b.lower()));
  if (o.pass) o.detail = "[" + dec(b.lower()) + ", " + dec(b.upper()) + "]";
  return o;
}

Outcome thick_product() {
  Outcome o;
  auto tree = geom::ConstructionTree::cantor(SequenceFamily::geometric(Rational(1, 2), Rational(1, 2)), 8);
  auto cert = certify::certify_fat_thick(geom::thick_from_cantor(tree), 1, 1);
  double oracle = 1;
  for (int n = 1; n <= 100; ++n) oracle *= 1 - std::ldexp(1.0, -n);
  o.expect(cert.conclusion == certify::Conclusion::Positive, "not Positive");
  double lo = to_double(cert.bound.lower()), hi = to_double(cert.bound.upper());
  o.expect(std::abs(lo - oracle) <= 1e-8 && std::abs(hi - oracle) <= 1e-8, "bracket far from oracle");
  o.expect(lo <= 0.2887880951 + 1e-10 && hi >= 0.2887880951 - 1e-10, "0.2887880951 not enclosed");
  if (o.pass) o.detail = "[" + dec(cert.bound.lower()) + ", " + dec(cert.bound.upper()) + "]";
  return o;
}

Outcome tail_solver() {
  Outcome o;
  auto r = certify::lemma43_find_M(1, 2, Rational(1, 2));
  o.expect(r.M == 2, "M = " + std::to_string(r.M));
  bool seen1 = false;
  std::vector<bool> seen(9, false);
  for (const auto& c : r.checks) {
    if (c.N == 1) {
      seen1 = true;
      o.expect(!c.holds, "N = 1 holds");
    } else if (c.N >= 2 && c.N <= 8) {
      seen[c.N] = true;
      o.expect(c.holds, "N = " + std::to_string(c.N) + " fails");
    }
  }
  o.expect(seen1, "N = 1 not checked");
  for (std::uint64_t N = 2; N <= 8; ++N) o.expect(seen[N], "N = " + std::to_string(N) + " not checked");
  if (o.pass) o.detail = "M = 2; N = 1 fails, N = 2..8 hold";
  return o;
}

Outcome doubling_scans() {
  Outcome o;
  auto leb = doubling::doubling_scan(TreeMeasure::binomial(Rational(1, 2)), 10);
  o.expect(leb.C == 2 && leb.C_lower == 2, "Binomial(1/2) C = " + to_string(leb.C));
  auto a = doubling::doubling_scan(TreeMeasure::binomial(Rational(1, 3)), 10);
  auto b = doubling::doubling_scan(TreeMeasure::binomial(Rational(2, 3)), 10);
  o.expect(a.C_lower >= 3, "Binomial(1/3) certified lower " + dec(a.C_lower));
  o.expect(a.lower_witness.ratio >= 3 && a.lower_witness.r > 0, "no witness");
  o.expect(a.C == b.C && a.C_lower == b.C_lower, "reflection changes C");
  if (o.pass)
    o.detail = "C(1/2) = 2; C(1/3) = C(2/3) = " + dec(a.C) + ", witness x=" + to_string(a.lower_witness.x) +
               " r=" + to_string(a.lower_witness.r);
  return o;
}

Outcome ball_set_inequality() {
  Outcome o;
  std::size_t checked = 0;
  const Rational ps[] = {Rational(1, 2), Rational(1, 3), Rational(1, 5), Rational(3, 4)};
  std::uint64_t seed = 2024;
  for (const auto& p : ps) {
    auto m = TreeMeasure::binomial(p);
    auto rep = doubling::doubling_scan(m, 8);
    auto configs = doubling::sample_eq21(m, 8, 250, seed++);
    auto out = doubling::verify_eq21(m, rep.C, configs, rep.eval_depth);
    checked += out.checked;
    o.expect(out.status != doubling::Eq21Status::Counterexample, "counterexample for p=" + to_string(p));
  }
  o.expect(checked == 1000, "checked " + std::to_string(checked));
  // C = 3/2 is below the true constant 2 of Lebesgue measure.
  auto leb = TreeMeasure::lebesgue();
  auto wrong = doubling::verify_eq21(leb, Rational(3, 2), doubling::sample_eq21(leb, 8, 250, 7), 9);
  o.expect(wrong.status == doubling::Eq21Status::Counterexample, "wrong C not refuted");
  if (o.pass) o.detail = "1000 configurations hold; C = 3/2 refuted at r = " + to_string(wrong.witness->r);
  return o;
}

Outcome qs_round_trip() {
  Outcome o;
  for (const Rational& p : {Rational(1, 2), Rational(1, 3), Rational(1, 5)}) {
    auto back = qs::measure_from_map(qs::tabulate({TreeMeasure::binomial(p), 8}, 8));
    for (int k = 0; k < 8; ++k)
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i)
        o.expect(back.weight(k, i) == p, "p=" + to_string(p) + " weight at (" + std::to_string(k) + ", " +
                                             std::to_string(i) + ")");
  }
  auto c = qs::pullback_constant(2, 2);
  o.expect(c.is_exact() && c.lo == 8, "pullback_constant(2, 2) = " + dec(c.lo));
  if (o.pass) o.detail = "weights recovered at depth 8; pullback 8 exact";
  return o;
}

Outcome thinness_decay() {
  Outcome o;
  auto a = certify::certify_thin_porous(SequenceFamily::constant(Rational(1, 2)), 1, 1, Rational(1, 1000));
  o.expect(a.n_star == 10, "n* = " + std::to_string(a.n_star));
  for (std::size_t i = 0; i < a.decay_curve.size(); ++i)
    o.expect(a.decay_curve[i] == pow2(-static_cast<long>(i) - 1), "constant curve at " + std::to_string(i + 1));
  // Power(1, 1, 1) is 1/(n+1): the sequence 1/n started at n = 2.
  auto b = certify::certify_thin_porous(SequenceFamily::power(1, 1, 1), 1, 1, Rational(1, 1000));
  for (std::size_t i = 0; i < b.decay_curve.size(); ++i)
    o.expect(b.decay_curve[i] == fraction(1, i + 2), "harmonic curve at " + std::to_string(i + 1));
  o.expect(b.decay_curve.size() == 1000, "harmonic n* = " + std::to_string(b.n_star));
  if (o.pass) o.detail = "2^-n with n* = 10; 1/n exact over " + std::to_string(b.decay_curve.size()) + " stages";
  return o;
}

int system_capture(const std::string& args, const std::filesystem::path& out) {
  std::string cmd = "'" + std::string(DMLAB_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  auto dir = std::filesystem::temp_directory_path() / ("dmlab_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  for (const auto& name : experiments::example_names()) {
    int a = system_capture("example " + name, dir / "a.json");
    int b = system_capture("example " + name, dir / "b.json");
    o.expect(a == 0 && b == 0, name + " exit " + std::to_string(a) + "/" + std::to_string(b));
    std::string x = slurp(dir / "a.json"), y = slurp(dir / "b.json");
    o.expect(!x.empty() && x == y, name + " reports differ");
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(experiments::example_names().size()) + " examples byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"stage schedule brute force equals partial product", schedule_exactness},
      {"stage schedule limits positive at 1/3, zero at 2/3", schedule_verdicts},
      {"telescoping product encloses 1/2", telescoping},
      {"thick-set product bracket", thick_product},
      {"tail-sum threshold solver", tail_solver},
      {"doubling constants of binomial measures", doubling_scans},
      {"ball/set inequality on sampled configurations", ball_set_inequality},
      {"quasisymmetric round trip and pullback constant", qs_round_trip},
      {"porous decay curves", thinness_decay},
      {"example reports are deterministic", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
