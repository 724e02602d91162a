#include "dmlab/io.hpp"

#include <sstream>

#include "dmlab/error.hpp"

namespace dmlab::io {

namespace {

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorCode::Parse, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Rational field_rational(const Json& j, const char* key, std::optional<Rational> fallback = std::nullopt) {
  if (fallback && (!j.is_object() || !j.contains(key))) return *fallback;
  return rational_from_json(field(j, key));
}

int field_int(const Json& j, const char* key, std::optional<int> fallback = std::nullopt) {
  if (fallback && (!j.is_object() || !j.contains(key))) return *fallback;
  const Json& v = field(j, key);
  require(v.is_number_integer(), ErrorCode::Parse, std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::string decimal_or_empty(const Rational& q) { return to_decimal(q); }

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  fail(ErrorCode::Parse, "expected a rational string such as \"1/3\", got " + j.dump());
}

Json rational_json(const Rational& q) { return to_string(q); }

Json number_json(const Rational& q, const char* exactness) {
  Json j;
  j["value"] = to_string(q);
  j["decimal"] = decimal_or_empty(q);
  j["exactness"] = exactness;
  return j;
}

Json bracket_json(const Rational& lo, const Rational& hi, const char* exactness) {
  Json j;
  j["lower"] = to_string(lo);
  j["upper"] = to_string(hi);
  j["lower_decimal"] = to_decimal(lo);
  j["upper_decimal"] = to_decimal(hi);
  j["exactness"] = lo == hi ? "exact" : exactness;
  return j;
}

Json enclosure_json(const Enclosure& e) { return bracket_json(e.lo, e.hi); }

seq::SequenceFamily family_from_json(const Json& j) {
  using F = seq::SequenceFamily;
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "geometric") return F::geometric(field_rational(j, "a"), field_rational(j, "q"));
  if (kind == "power")
    return F::power(field_rational(j, "a", Rational(1)), field_rational(j, "gamma"), field_rational(j, "offset", Rational(0)));
  if (kind == "logfloor") return F::log_floor(field_rational(j, "base"));
  if (kind == "constant") return F::constant(field_rational(j, "a"));
  if (kind == "explicit") {
    std::vector<Rational> terms;
    for (const auto& t : field(j, "terms")) terms.push_back(rational_from_json(t));
    return F::explicit_finite(std::move(terms));
  }
  if (kind == "scaled") return F::scaled(field_rational(j, "c"), family_from_json(field(j, "inner")));
  fail(ErrorCode::Parse, "unknown sequence kind \"" + kind + "\"");
}

Json family_json(const seq::SequenceFamily& f) {
  using F = seq::SequenceFamily;
  Json j;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, F::Geometric>) {
          j["kind"] = "geometric";
          j["a"] = to_string(k.a);
          j["q"] = to_string(k.q);
        } else if constexpr (std::is_same_v<K, F::Power>) {
          j["kind"] = "power";
          j["a"] = to_string(k.a);
          j["gamma"] = to_string(k.gamma);
          j["offset"] = to_string(k.offset);
        } else if constexpr (std::is_same_v<K, F::LogFloor>) {
          j["kind"] = "logfloor";
          j["base"] = to_string(k.base);
        } else if constexpr (std::is_same_v<K, F::Constant>) {
          j["kind"] = "constant";
          j["a"] = to_string(k.a);
        } else if constexpr (std::is_same_v<K, F::ExplicitFinite>) {
          j["kind"] = "explicit";
          j["terms"] = Json::array();
          for (const auto& t : k.terms) j["terms"].push_back(to_string(t));
        } else {
          j["kind"] = "scaled";
          j["c"] = to_string(k.c);
          j["inner"] = family_json(*k.inner);
        }
      },
      f.kind());
  return j;
}

std::shared_ptr<const geom::ConstructionTree> tree_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "dyadic") return std::make_shared<const geom::ConstructionTree>(geom::ConstructionTree::dyadic());
  if (kind == "cantor")
    return std::make_shared<const geom::ConstructionTree>(
        geom::build_cantor(family_from_json(field(j, "beta")), field_int(j, "depth")));
  fail(ErrorCode::Parse, "unknown tree kind \"" + kind + "\"");
}

Json tree_json(const geom::ConstructionTree& t, bool with_nodes) {
  Json j;
  if (t.gapless()) {
    j["kind"] = "dyadic";
    return j;
  }
  j["kind"] = "cantor";
  j["beta"] = family_json(*t.beta());
  j["depth"] = t.depth();
  j["max_gap_ratio"] = number_json(t.max_gap_ratio());
  if (auto D = t.perfectness_constant()) j["perfectness_constant"] = number_json(*D);
  Json levels = Json::array();
  for (int k = 0; k <= t.depth(); ++k) {
    Json level;
    level["level"] = k;
    level["node_length"] = to_string(t.node_length(k));
    level["total_length"] = number_json(t.level_total_length(k));
    if (with_nodes) {
      level["nodes"] = Json::array();
      for (const auto& n : t.level_nodes(k)) level["nodes"].push_back(interval_json(n));
      if (k < t.depth()) {
        level["gaps"] = Json::array();
        for (const auto& g : t.level_gaps(k)) level["gaps"].push_back(interval_json(g));
      }
    }
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  return j;
}

measure::TreeMeasure measure_from_json(const Json& j) {
  using measure::TreeMeasure;
  std::shared_ptr<const geom::ConstructionTree> tree;
  if (j.contains("tree")) tree = tree_from_json(j.at("tree"));
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "binomial") return TreeMeasure::binomial(field_rational(j, "p"), tree);
  if (kind == "lebesgue") return TreeMeasure::binomial(Rational(1, 2), tree);
  if (kind == "table") {
    TreeMeasure::WeightTable w;
    for (const auto& row : field(j, "weights")) {
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(rational_from_json(v));
      w.weights.push_back(std::move(r));
    }
    w.fill = field_rational(j, "fill", Rational(1, 2));
    return TreeMeasure::table(std::move(w), tree, field_rational(j, "total_mass", Rational(1)));
  }
  fail(ErrorCode::Parse, "unknown measure kind \"" + kind + "\"");
}

Json measure_json(const measure::TreeMeasure& m) {
  Json j;
  if (const auto* b = std::get_if<measure::TreeMeasure::Binomial>(&m.weights())) {
    j["kind"] = "binomial";
    j["p"] = to_string(b->p);
  } else {
    const auto& t = std::get<measure::TreeMeasure::WeightTable>(m.weights());
    j["kind"] = "table";
    j["weights"] = Json::array();
    for (const auto& row : t.weights) {
      Json r = Json::array();
      for (const auto& w : row) r.push_back(to_string(w));
      j["weights"].push_back(std::move(r));
    }
    j["fill"] = to_string(t.fill);
    j["total_mass"] = to_string(m.total_mass());
  }
  j["tree"] = tree_json(m.tree(), false);
  return j;
}

geom::RationalInterval interval_from_json(const Json& j) {
  if (j.is_array()) {
    require(j.size() == 2, ErrorCode::Parse, "interval arrays hold [lo, hi]");
    return geom::RationalInterval(rational_from_json(j[0]), rational_from_json(j[1]));
  }
  return geom::RationalInterval(field_rational(j, "lo"), field_rational(j, "hi"),
                                j.value("lo_open", false), j.value("hi_open", false));
}

Json interval_json(const geom::RationalInterval& I) {
  Json j;
  j["lo"] = to_string(I.lo);
  j["hi"] = to_string(I.hi);
  j["lo_open"] = I.lo_open;
  j["hi_open"] = I.hi_open;
  return j;
}

geom::CutOutConfig config_from_json(const Json& j) {
  std::vector<geom::RationalInterval> balls;
  for (const auto& b : field(j, "balls")) balls.push_back(interval_from_json(b));
  std::optional<seq::SequenceFamily> fam;
  if (j.contains("diam_family")) fam = family_from_json(j.at("diam_family"));
  geom::CutOutConfig c;
  if (j.contains("tree")) {
    c = geom::make_tree_config(std::move(balls), tree_from_json(j.at("tree")), field_int(j, "ambient_depth", 0), fam);
  } else {
    c = geom::make_unit_config(std::move(balls), fam);
  }
  c.validate();
  return c;
}

Json config_json(const geom::CutOutConfig& c) {
  Json j;
  j["balls"] = Json::array();
  for (const auto& b : c.balls) j["balls"].push_back(interval_json(b));
  if (c.diam_family) j["diam_family"] = family_json(*c.diam_family);
  if (c.tree) {
    j["tree"] = tree_json(*c.tree, false);
    j["ambient_depth"] = c.ambient_depth;
  }
  return j;
}

Json mass_json(const measure::MassBracket& b) { return bracket_json(b.lower, b.upper); }

namespace {

Json witness_json(const doubling::Witness& w, const char* exactness) {
  Json j;
  j["x"] = to_string(w.x);
  j["r"] = to_string(w.r);
  j["ratio"] = number_json(w.ratio, exactness);
  return j;
}

}  // namespace

Json doubling_json(const doubling::DoublingReport& r) {
  Json j;
  j["depth"] = r.depth;
  j["eval_depth"] = r.eval_depth;
  j["C"] = number_json(r.C, "window-validated");
  j["C_lower"] = number_json(r.C_lower, "window-validated");
  j["upper_witness"] = witness_json(r.upper_witness, "window-validated");
  j["lower_witness"] = witness_json(r.lower_witness, "window-validated");
  j["s"] = enclosure_json(r.s);
  j["window"] = {{"r_min", to_string(r.r_min)}, {"r_max", to_string(r.r_max)}};
  j["grid"] = {{"description", r.grid}, {"centers", r.centers}, {"radii", r.radii}};
  Json scales = Json::array();
  for (const auto& row : r.ratio_by_scale)
    scales.push_back({{"r", to_string(row.r)}, {"max_ratio", number_json(row.max_ratio, "window-validated")}});
  j["ratio_by_scale"] = std::move(scales);
  if (r.eq22) {
    j["eq22_fit"] = {{"Lambda", number_json(r.eq22->Lambda, "window-validated")},
                     {"t", number_json(r.eq22->t, "window-validated")},
                     {"cap", number_json(r.eq22->cap)}};
  } else {
    j["eq22_fit"] = nullptr;
  }
  if (r.lemma21) {
    j["lemma21_fit"] = {{"lambda", number_json(r.lemma21->lambda, "window-validated")},
                        {"s", number_json(r.lemma21->s, "window-validated")},
                        {"Lambda", number_json(r.lemma21->Lambda, "window-validated")},
                        {"t", number_json(r.lemma21->t, "window-validated")}};
  } else {
    j["lemma21_fit"] = nullptr;
  }
  j["violations"] = r.violations;
  return j;
}

Json eq21_json(const doubling::Eq21Outcome& o) {
  Json j;
  j["status"] = doubling::to_string(o.status);
  j["checked"] = o.checked;
  j["inconclusive"] = o.inconclusive;
  if (o.witness) {
    j["witness"] = {{"A", interval_json(o.witness->A)}, {"x", to_string(o.witness->x)}, {"r", to_string(o.witness->r)}};
    j["ball_mass"] = mass_json(o.ball);
    j["set_mass"] = mass_json(o.set);
    j["rhs"] = enclosure_json(o.rhs);
  }
  return j;
}

Json product_json(const certify::ProductBracket& b) {
  Json j;
  j["N"] = b.N;
  j["partial"] = enclosure_json(b.partial);
  j["tail_lower"] = number_json(b.tail_lower);
  j["tail_upper"] = number_json(b.tail_upper);
  j["product"] = bracket_json(b.lower(), b.upper());
  return j;
}

Json fatness_json(const certify::FatnessCertificate& c) {
  Json j;
  j["alpha"] = family_json(c.alpha);
  j["t"] = to_string(c.t);
  j["C3N"] = to_string(c.C3N);
  j["N0"] = c.N0;
  j["verified_depth"] = c.verified_depth;
  j["bound"] = product_json(c.bound);
  j["conclusion"] = certify::to_string(c.conclusion);
  return j;
}

Json thinness_json(const certify::ThinnessCertificate& c, std::size_t max_curve) {
  Json j;
  j["alpha"] = family_json(c.alpha);
  j["s"] = to_string(c.s);
  j["c"] = to_string(c.c);
  j["epsilon"] = to_string(c.epsilon);
  j["divergence_witness"] = c.divergence_witness == seq::Summability::Diverges ? "Diverges" : "Converges";
  j["n_star"] = c.n_star;
  j["index_shift"] = c.index_shift;
  j["u_n_star"] = number_json(c.decay_curve.back());
  Json curve = Json::array();
  for (std::size_t i = 0; i < c.decay_curve.size() && i < max_curve; ++i)
    curve.push_back({{"n", i + 1}, {"u", number_json(c.decay_curve[i])}});
  j["decay_curve"] = std::move(curve);
  j["decay_curve_truncated"] = c.decay_curve.size() > max_curve;
  return j;
}

Json thm11_json(const certify::Thm11Bound& b) {
  Json j;
  j["value"] = number_json(b.value);
  j["first_term_lower"] = number_json(b.first_term);
  j["subtracted_upper"] = number_json(b.subtracted);
  j["c_p_upper"] = number_json(b.c_p_upper);
  j["zeta_upper"] = number_json(b.zeta_upper);
  j["gap_diameter"] = number_json(b.gap_diameter);
  j["conclusion"] = certify::to_string(b.conclusion);
  return j;
}

Json example54_json(const certify::Example54Result& r) {
  Json j;
  j["p"] = to_string(r.p);
  j["stages"] = r.stages;
  j["partial_product"] = number_json(r.partial);
  if (r.brute_force) {
    j["brute_force"] = number_json(*r.brute_force);
    j["brute_force_matches"] = *r.brute_force == r.partial;
  }
  j["verdict"] = certify::to_string(r.verdict);
  if (r.limit) j["limit"] = product_json(*r.limit);
  if (r.zero_stage) {
    j["zero_stage"] = *r.zero_stage;
    j["zero_stage_partial"] = number_json(*r.zero_stage_partial);
  }
  return j;
}

Json thick_verdict_json(const geom::ThickVerdict& v) {
  Json j;
  j["valid"] = v.valid;
  if (!v.valid) {
    j["condition"] = v.condition;
    j["level"] = v.level;
    j["index"] = v.index;
    j["detail"] = v.detail;
  }
  return j;
}

Json ratio_rows_json(const std::vector<qs::RatioRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"tau", to_string(r.tau)},
                   {"max_ratio", number_json(r.max_ratio, "window-validated")},
                   {"witness", {to_string(r.x), to_string(r.y), to_string(r.z)}}});
  }
  return out;
}

Json plot_series(const std::string& name, const std::vector<std::pair<Rational, Rational>>& points) {
  Json pts = Json::array();
  for (const auto& [x, y] : points) pts.push_back({to_string(x), to_string(y)});
  return {{"series", name}, {"points", std::move(pts)}};
}

namespace {

std::string x_text(const std::string& s) {
  Rational q = parse_rational(s);
  return q.get_den() == 1 ? q.get_num().get_str() : s;
}

}  // namespace

std::string emit_plotdata(const Json& report) {
  std::ostringstream out;
  out << "series,x,y_num,y_den,y_decimal\n";
  if (!report.is_object() || !report.contains("plot")) return out.str();
  for (const auto& s : report.at("plot")) {
    const std::string name = s.at("series").get<std::string>();
    for (const auto& p : s.at("points")) {
      Rational y = parse_rational(p.at(1).get<std::string>());
      out << name << ',' << x_text(p.at(0).get<std::string>()) << ',' << y.get_num().get_str() << ','
          << y.get_den().get_str() << ',' << to_decimal(y) << '\n';
    }
  }
  return out.str();
}

std::string ratio_rows_csv(const std::vector<qs::RatioRow>& rows) {
  std::ostringstream out;
  out << "tau,max_ratio_num,max_ratio_den,witness_x,witness_y,witness_z\n";
  for (const auto& r : rows)
    out << to_string(r.tau) << ',' << r.max_ratio.get_num().get_str() << ',' << r.max_ratio.get_den().get_str() << ','
        << to_string(r.x) << ',' << to_string(r.y) << ',' << to_string(r.z) << '\n';
  return out.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dmlab::io
