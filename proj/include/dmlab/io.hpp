#pragma once

#include <json.hpp>

#include <memory>
#include <string>

#include "dmlab/certify.hpp"
#include "dmlab/cutout.hpp"
#include "dmlab/doubling.hpp"
#include "dmlab/measure.hpp"
#include "dmlab/qs.hpp"
#include "dmlab/seq.hpp"
#include "dmlab/thick.hpp"

namespace dmlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

// Rationals travel as "num/den" strings; integers and decimal strings are
// accepted on input.
Rational rational_from_json(const Json& j);
Json rational_json(const Rational& q);

// {"value": "num/den", "decimal": "...", "exactness": tag}, tag one of
// "exact", "bracket", "window-validated".
Json number_json(const Rational& q, const char* exactness = "exact");
Json bracket_json(const Rational& lo, const Rational& hi, const char* exactness = "bracket");
Json enclosure_json(const Enclosure& e);

seq::SequenceFamily family_from_json(const Json& j);
Json family_json(const seq::SequenceFamily& f);

// {"kind": "dyadic"} or {"kind": "cantor", "beta": family, "depth": n}
std::shared_ptr<const geom::ConstructionTree> tree_from_json(const Json& j);
Json tree_json(const geom::ConstructionTree& t, bool with_nodes = true);

// {"kind": "binomial", "p": "1/3"} or {"kind": "table", "weights": [[...], ...]},
// either with an optional "tree".
measure::TreeMeasure measure_from_json(const Json& j);
Json measure_json(const measure::TreeMeasure& m);

geom::RationalInterval interval_from_json(const Json& j);
Json interval_json(const geom::RationalInterval& I);

// {"balls": [...], "diam_family": family, "tree": tree, "ambient_depth": n}
geom::CutOutConfig config_from_json(const Json& j);
Json config_json(const geom::CutOutConfig& c);

Json mass_json(const measure::MassBracket& b);
Json doubling_json(const doubling::DoublingReport& r);
Json eq21_json(const doubling::Eq21Outcome& o);
Json product_json(const certify::ProductBracket& b);
Json fatness_json(const certify::FatnessCertificate& c);
Json thinness_json(const certify::ThinnessCertificate& c, std::size_t max_curve = 64);
Json thm11_json(const certify::Thm11Bound& b);
Json example54_json(const certify::Example54Result& r);
Json thick_verdict_json(const geom::ThickVerdict& v);
Json ratio_rows_json(const std::vector<qs::RatioRow>& rows);

// Plot series: {"series": name, "points": [[x, y], ...]} with rational y.
Json plot_series(const std::string& name, const std::vector<std::pair<Rational, Rational>>& points);

// Long-format CSV (series, x, y_num, y_den, y_decimal) of a report's "plot"
// array; a report without one gives the header only.
std::string emit_plotdata(const Json& report);

// Ratio-scan table (tau, max_ratio_num, max_ratio_den, witness triple).
std::string ratio_rows_csv(const std::vector<qs::RatioRow>& rows);

std::string dump(const Json& j);

}  // namespace dmlab::io
