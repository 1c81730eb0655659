#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "freeconv/experiments.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/sphere.hpp"

namespace freeconv {

using nlohmann::json;

/// {"kind":"atomic","atoms":[{"x":..,"w":..},..]} or {"kind":"semicircle","variance":..}.
Measure measure_from_json(const json& j);
json to_json(const Measure& mu);

/// bernoulli, binomial:<p>, semicircle:<c>, dirac:<a>. Returns false if `spec`
/// is not a preset name.
bool parse_preset(const std::string& spec, Measure* out);
/// A preset name or the path of a measure JSON file.
Measure load_measure(const std::string& spec);

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double x);

std::string read_file(const std::string& path);
/// Writes to a temporary file beside `path`, then renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// x,density,cdf rows preceded by '#' metadata lines.
std::string distribution_csv(const GriddedDistribution& d, const std::vector<std::string>& meta = {});
GriddedDistribution distribution_from_csv(const std::string& text);

std::string rate_csv(const RateReport& r, const std::vector<std::string>& meta = {});

json to_json(const SlopeFit& f);
json to_json(const SupportReport& r);
json to_json(const FunctionalEqTerms& t);
json to_json(const ConcentrationReport& r);
json to_json(const WeightStats& s);

/// Fixed-precision dump: numbers keep 17 significant digits.
std::string dump_json(const json& j);

}  // namespace freeconv
