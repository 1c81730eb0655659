#include "freeconv/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "freeconv/error.hpp"

namespace freeconv {

Measure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("measure JSON needs a 'kind' field");
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "semicircle") return Measure::semicircle(j.value("variance", 1.0));
    if (kind == "atomic") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
      if (atoms.empty()) throw DomainError("atomic measure needs at least one atom");
      return Measure::atomic(std::move(atoms));
    }
    throw DomainError("unknown measure kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed measure JSON: ") + e.what());
  }
}

json to_json(const Measure& mu) {
  if (!mu.is_atomic()) return {{"kind", "semicircle"}, {"variance", mu.semicircle_variance()}};
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w}});
  return {{"kind", "atomic"}, {"atoms", atoms}};
}

namespace {

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw DomainError("bad number in " + what + ": '" + s + "'");
  return v;
}

}  // namespace

bool parse_preset(const std::string& spec, Measure* out) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "bernoulli" && arg.empty()) {
    *out = Measure::bernoulli();
    return true;
  }
  if (name == "binomial") {
    const double p = arg.empty() ? 0.5 : parse_number(arg, "binomial preset");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial preset needs p in (0, 1)");
    *out = Measure::binomial(p);
    return true;
  }
  if (name == "semicircle") {
    *out = Measure::semicircle(arg.empty() ? 1.0 : parse_number(arg, "semicircle preset"));
    return true;
  }
  if (name == "dirac") {
    *out = Measure::dirac(arg.empty() ? 0.0 : parse_number(arg, "dirac preset"));
    return true;
  }
  return false;
}

Measure load_measure(const std::string& spec) {
  Measure mu = Measure::dirac(0.0);
  if (parse_preset(spec, &mu)) return mu;
  json j;
  try {
    j = json::parse(read_file(spec));
  } catch (const json::parse_error& e) {
    throw DomainError("invalid measure JSON in " + spec + ": " + e.what());
  }
  try {
    return measure_from_json(j);
  } catch (const json::exception& e) {
    throw DomainError("invalid measure JSON in " + spec + ": " + e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() /
                       ("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path);
  }
}

std::string distribution_csv(const GriddedDistribution& d, const std::vector<std::string>& meta) {
  std::string s;
  for (const auto& m : meta) s += "# " + m + "\n";
  s += "# eta=" + format_double(d.eta) + "\n";
  s += "# tail_mass=" + format_double(d.tail_mass) + "\n";
  s += "# mean=" + format_double(d.mean) + "\n";
  s += "x,density,cdf\n";
  for (std::size_t i = 0; i < d.grid.size(); ++i)
    s += format_double(d.grid[i]) + "," + format_double(d.density[i]) + "," +
         format_double(d.cdf[i]) + "\n";
  return s;
}

GriddedDistribution distribution_from_csv(const std::string& text) {
  GriddedDistribution d;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "eta") d.eta = parse_number(value, "CSV metadata");
      if (key == "tail_mass") d.tail_mass = parse_number(value, "CSV metadata");
      if (key == "mean") d.mean = parse_number(value, "CSV metadata");
      continue;
    }
    if (!header) {
      if (line.rfind("x,density,cdf", 0) != 0) throw DomainError("distribution CSV needs header x,density,cdf");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ','))
      throw DomainError("distribution CSV row needs three columns");
    d.grid.push_back(parse_number(a, "CSV row"));
    d.density.push_back(parse_number(b, "CSV row"));
    d.cdf.push_back(parse_number(c, "CSV row"));
  }
  if (d.grid.size() < 2) throw DomainError("distribution CSV needs at least two rows");
  if (!(d.eta > 0.0)) throw DomainError("distribution CSV needs a positive eta");
  d.x_min = d.grid.front();
  d.x_max = d.grid.back();
  return d;
}

std::string rate_csv(const RateReport& r, const std::vector<std::string>& meta) {
  std::string s;
  for (const auto& m : meta) s += "# " + m + "\n";
  auto fit_line = [&](const char* name, const std::optional<SlopeFit>& f) {
    if (f)
      s += std::string("# ") + name + "_slope=" + format_double(f->slope) +
           " r_squared=" + format_double(f->r_squared) + "\n";
  };
  fit_line("delta", r.delta_fit);
  fit_line("delta_eps", r.delta_eps_fit);
  fit_line("delta_tilde", r.delta_tilde_fit);
  fit_line("levy", r.levy_fit);
  for (const auto& row : r.rows)
    if (row.failed)
      s += "# failed n=" + std::to_string(row.n) + " rep=" + std::to_string(row.rep) + ": " +
           row.failure + "\n";
  s += "n,rep,seed,weight_mode,delta,delta_err,delta_eps,delta_tilde,levy,slope_running\n";
  for (const auto& row : r.rows) {
    s += std::to_string(row.n) + "," + std::to_string(row.rep) + "," + std::to_string(row.seed) +
         "," + to_string(row.mode) + "," + format_double(row.delta) + "," +
         format_double(row.delta_err) + "," + format_double(row.delta_eps) + "," +
         format_double(row.delta_tilde) + "," + format_double(row.levy) + "," +
         format_double(row.slope_running) + "\n";
  }
  return s;
}

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

json to_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"used", f.used}, {"skipped", f.skipped}};
}

json to_json(const SupportReport& r) {
  return {{"n", r.n},
          {"theta", {{"max_abs", r.max_abs_theta},
                     {"sum_abs_cubes", r.sum_abs_cubes},
                     {"sum_cubes", r.sum_cubes},
                     {"sum_fourth", r.sum_fourth}}},
          {"L", r.L},
          {"m3", r.m3},
          {"r_theta", r.r_theta},
          {"bound_kargin", r.bound_kargin},
          {"bound_paper", r.bound_paper},
          {"kargin_interval", {-2.0 - r.bound_kargin, 2.0 + r.bound_kargin}},
          {"paper_interval", {-2.0 - r.bound_paper, 2.0 + r.bound_paper}},
          {"threshold", r.threshold},
          {"tail_allowance", r.tail_allowance},
          {"eta", r.eta},
          {"detected_support", {number(r.detected_lo), number(r.detected_hi)}},
          {"preconditions_met", r.preconditions_met},
          {"inside_kargin", r.inside_kargin},
          {"inside_paper", r.preconditions_met ? json(r.inside_paper) : json("n/a")},
          {"margin_kargin", number(r.margin_kargin)},
          {"margin_paper", number(r.margin_paper)}};
}

json to_json(const FunctionalEqTerms& t) {
  json j = {{"z", cjson(t.z)}, {"ok", t.ok}, {"in_region", t.in_region},
            {"on_unit_line", t.on_unit_line}};
  if (!t.failure.empty()) j["failure"] = t.failure;
  if (!t.Z.empty()) j["Z1"] = cjson(t.Z[0]);
  if (!t.ok) return j;
  j["I"] = {cjson(t.I1), cjson(t.I2), cjson(t.I3), cjson(t.I4), cjson(t.I5)};
  j["r"] = cjson(t.r);
  j["M"] = {cjson(t.M1), cjson(t.M2), cjson(t.M3)};
  j["q"] = cjson(t.q);
  j["r2"] = cjson(t.r2);
  j["omega"] = {cjson(t.omega[0]), cjson(t.omega[1]), cjson(t.omega[2])};
  j["omega_tilde"] = {cjson(t.omega_tilde[0]), cjson(t.omega_tilde[1])};
  j["residual_P"] = t.residual_P;
  j["residual_Q"] = t.residual_Q;
  j["vieta_sum"] = t.vieta_sum;
  j["vieta_product"] = t.vieta_product;
  j["formula_gap"] = t.formula_gap;
  j["dist_omega3"] = t.dist_omega3;
  j["dist_omega_tilde2"] = t.dist_omega_tilde2;
  j["matched_root"] = t.matched_root;
  j["matched_root_Q"] = t.matched_root_Q;
  return j;
}

json to_json(const ConcentrationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"event", c.event},
                      {"bound", c.bound},
                      {"empirical", c.empirical},
                      {"stderr", c.stderr_},
                      {"ci99", {c.ci99_low, c.ci99_high}},
                      {"violations", c.violations},
                      {"pass", c.pass}});
  json j = {{"n", r.n}, {"samples", r.samples}, {"seed", r.seed}, {"checks", checks}};
  if (r.marginal.samples > 0)
    j["marginal"] = {{"bins", r.marginal.bins}, {"samples", r.marginal.samples},
                     {"chi2", r.marginal.chi2}, {"dof", r.marginal.dof},
                     {"p_value", r.marginal.p_value}, {"pass", r.marginal.pass}};
  j["pass"] = r.pass();
  return j;
}

json to_json(const WeightStats& s) {
  json pow = json::object();
  for (int k = 3; k <= 9; ++k) pow[std::to_string(k)] = s.sum_abs_pow_k(k);
  return {{"n", s.n}, {"max_abs", s.max_abs}, {"sum_abs_pow", pow}, {"sum_cubes", s.sum_cubes}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace freeconv
