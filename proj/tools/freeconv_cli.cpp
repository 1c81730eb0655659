// freeconv: command-line front end.
//
// Every command validates its configuration, computes, and writes a single
// output file (or stdout) in one step. Exit codes: 0 success, 1 usage or
// configuration error, 2 numerical failure, 3 I/O failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "freeconv/cumulants.hpp"
#include "freeconv/error.hpp"
#include "freeconv/experiments.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/io.hpp"
#include "freeconv/sphere.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

using namespace freeconv;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

struct Common {
  std::string out;
  bool no_timestamp = false;
};

struct SolverFlags {
  double tol = 1e-12;
  int max_iters = 10000;
  double damping = 1.0;

  SolveOptions options() const {
    SolveOptions o;
    o.tol = tol;
    o.max_iters = max_iters;
    o.damping = damping;
    return o;
  }
  json to_json() const { return {{"tol", tol}, {"max_iters", max_iters}, {"damping", damping}}; }
};

struct InversionFlags {
  double eta = kDefaultEta;
  int grid = kDefaultGridPoints;
  double margin = 1.0;

  InversionOptions options() const { return {eta, grid, margin}; }
  json to_json() const { return {{"eta", eta}, {"grid", grid}, {"margin", margin}}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out, "Output file (default: stdout)");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp from the output");
}

void add_solver(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--tol", s.tol, "Subordination residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", s.max_iters, "Fixed-point iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--damping", s.damping, "Initial damping in (0, 1]")->check(CLI::Range(1e-12, 1.0));
}

void add_inversion(CLI::App* cmd, InversionFlags& f) {
  cmd->add_option("--eta", f.eta, "Inversion height")->check(CLI::PositiveNumber);
  cmd->add_option("--grid", f.grid, "Grid points")->check(CLI::Range(2, 10000000));
  cmd->add_option("--margin", f.margin, "Window margin beyond the support bound")->check(CLI::NonNegativeNumber);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const Common& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  write_file_atomic(c.out, content);
}

std::vector<std::string> csv_meta(const Common& c, const json& config) {
  std::vector<std::string> meta{"config=" + config.dump()};
  if (!c.no_timestamp) meta.push_back("timestamp=" + timestamp());
  return meta;
}

std::string json_doc(const Common& c, const json& config, json body) {
  body["config"] = config;
  if (!c.no_timestamp) body["timestamp"] = timestamp();
  return dump_json(body);
}

std::vector<Measure> load_measures(const std::vector<std::string>& presets,
                                   const std::vector<std::string>& files) {
  std::vector<Measure> out;
  for (const auto& p : presets) {
    Measure mu = Measure::dirac(0.0);
    if (!parse_preset(p, &mu)) throw DomainError("unknown preset '" + p + "'");
    out.push_back(mu);
  }
  for (const auto& f : files) out.push_back(load_measure(f));
  return out;
}

json measures_json(const std::vector<Measure>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

// ---- convolve ------------------------------------------------------------

struct ConvolveCmd {
  Common common;
  SolverFlags solver;
  InversionFlags inversion;
  std::vector<std::string> presets;
  std::vector<std::string> files;
  bool density = false;
  double im = 1.0;
  int points = 201;
  double x_min = 0.0;
  double x_max = 0.0;
};

int run_convolve(const ConvolveCmd& c) {
  const auto ms = load_measures(c.presets, c.files);
  if (ms.empty()) throw DomainError("convolve needs at least one --preset or --measure");
  const ConvolutionTransform conv(ms, c.solver.options());
  const double half = conv.support_radius() + c.inversion.margin;
  const double lo = c.x_min < c.x_max ? c.x_min : conv.mean() - half;
  const double hi = c.x_min < c.x_max ? c.x_max : conv.mean() + half;
  json config = {{"command", "convolve"}, {"measures", measures_json(ms)},
                 {"solver", c.solver.to_json()}, {"density", c.density},
                 {"x_min", lo}, {"x_max", hi}};
  if (c.density) {
    config["inversion"] = c.inversion.to_json();
    const auto d = recover(conv, lo, hi, c.inversion.grid, c.inversion.eta);
    emit(c.common, distribution_csv(d, csv_meta(c.common, config)));
    return kOk;
  }
  config["im"] = c.im;
  config["points"] = c.points;
  std::string s;
  for (const auto& m : csv_meta(c.common, config)) s += "# " + m + "\n";
  s += "re,im,g_re,g_im,residual\n";
  WarmStart warm;
  for (int k = 0; k < c.points; ++k) {
    const double x = c.points == 1 ? lo : lo + (hi - lo) * k / (c.points - 1);
    const auto sol = conv.solve(cplx(x, c.im), &warm);
    s += format_double(x) + "," + format_double(c.im) + "," + format_double(sol.G.real()) + "," +
         format_double(sol.G.imag()) + "," + format_double(sol.residual) + "\n";
  }
  emit(c.common, s);
  return kOk;
}

// ---- distance ------------------------------------------------------------

struct DistanceCmd {
  Common common;
  std::string a;
  std::string b;
  std::string metric = "kolmogorov";
  double eps = 0.5;
};

CdfSource load_operand(const std::string& spec, json* desc) {
  if (spec == "arcsine") {
    *desc = {{"kind", "arcsine"}};
    return CdfSource::arcsine();
  }
  if (spec == "semicircle") {
    *desc = {{"kind", "semicircle"}, {"variance", 1.0}};
    return CdfSource::semicircle();
  }
  Measure mu = Measure::dirac(0.0);
  if (parse_preset(spec, &mu)) {
    *desc = to_json(mu);
    return CdfSource::of_measure(mu);
  }
  const std::string text = read_file(spec);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DomainError("invalid JSON in " + spec + ": " + e.what());
    }
    if (j.value("kind", "") == "arcsine") {
      *desc = j;
      return CdfSource::arcsine();
    }
    try {
      mu = measure_from_json(j);
    } catch (const json::exception& e) {
      throw DomainError("invalid measure JSON in " + spec + ": " + e.what());
    }
    *desc = to_json(mu);
    return CdfSource::of_measure(mu);
  }
  auto dist = distribution_from_csv(text);
  *desc = {{"kind", "gridded"}, {"path", spec}, {"eta", dist.eta}, {"points", dist.grid.size()}};
  return CdfSource::gridded(std::move(dist));
}

int run_distance(const DistanceCmd& c) {
  json da, db;
  const auto a = load_operand(c.a, &da);
  const auto b = load_operand(c.b, &db);
  const json config = {{"command", "distance"}, {"a", da}, {"b", db}, {"metric", c.metric},
                       {"eps", c.eps}};
  json body = json::object();
  auto put = [&](const char* name, DistanceValue v) {
    body[name] = {{"value", v.value}, {"error", v.error}};
  };
  if (c.metric == "kolmogorov" || c.metric == "all") put("kolmogorov", kolmogorov(a, b));
  if (c.metric == "levy" || c.metric == "all") put("levy", levy(a, b));
  if (c.metric == "delta_eps" || c.metric == "all") put("delta_eps", delta_eps(a, b, c.eps));
  emit(c.common, json_doc(c.common, config, body));
  return kOk;
}

// ---- rates ---------------------------------------------------------------

struct RatesCmd {
  Common common;
  SolverFlags solver;
  InversionFlags inversion;
  std::string preset = "bernoulli";
  std::string file;
  std::vector<int> n;
  std::string weights = "uniform";
  std::uint64_t seed = 1;
  int reps = 1;
  std::vector<std::string> metrics{"delta"};
  double eps = 0.5;
  double tilde_a = 0.05;
  double tilde_eps = 0.5;
  int u_points = 801;
};

Measure single_measure(const std::string& preset, const std::string& file) {
  return file.empty() ? load_measure(preset) : load_measure(file);
}

int run_rates(const RatesCmd& c) {
  const auto mu = single_measure(c.preset, c.file);
  RateOptions o;
  o.n_schedule = c.n;
  o.mode = parse_weight_mode(c.weights);
  o.seed = c.seed;
  o.reps = c.reps;
  o.delta = o.levy = o.delta_eps = o.delta_tilde = false;
  for (const auto& m : c.metrics) {
    if (m == "delta" || m == "all") o.delta = true;
    if (m == "levy" || m == "all") o.levy = true;
    if (m == "delta_eps" || m == "all") o.delta_eps = true;
    if (m == "delta_tilde" || m == "all") o.delta_tilde = true;
    if (m != "delta" && m != "levy" && m != "delta_eps" && m != "delta_tilde" && m != "all")
      throw DomainError("unknown metric '" + m + "'");
  }
  o.eps = c.eps;
  o.tilde_a = c.tilde_a;
  o.tilde_eps = c.tilde_eps;
  o.strip.u_points = c.u_points;
  o.inversion = c.inversion.options();
  o.solver = c.solver.options();
  if (!(o.eps > 0.0 && o.eps < 1.0) || !(o.tilde_eps > 0.0 && o.tilde_eps < 1.0) ||
      !(o.tilde_a > 0.0 && o.tilde_a < 1.0))
    throw DomainError("eps, tilde-eps and tilde-a must lie in (0, 1)");
  const json config = {{"command", "rates"}, {"measure", to_json(mu)}, {"n", c.n},
                       {"weights", c.weights}, {"seed", c.seed}, {"reps", c.reps},
                       {"metrics", c.metrics}, {"eps", c.eps}, {"tilde_a", c.tilde_a},
                       {"tilde_eps", c.tilde_eps}, {"u_points", c.u_points},
                       {"inversion", c.inversion.to_json()}, {"solver", c.solver.to_json()}};
  const auto rep = rate_experiment(mu, o);
  emit(c.common, rate_csv(rep, csv_meta(c.common, config)));
  for (const auto& row : rep.rows)
    if (row.failed) return kNumeric;
  return kOk;
}

// ---- support -------------------------------------------------------------

struct SupportCmd {
  Common common;
  SolverFlags solver;
  std::string preset = "bernoulli";
  std::string file;
  int n = 1024;
  std::string weights = "uniform";
  std::uint64_t seed = 1;
  double threshold = 1e-5;
  double eta = 1e-4;
  int grid = 4001;
  double margin = 1.0;
};

int run_support(const SupportCmd& c) {
  const auto mu = single_measure(c.preset, c.file);
  const auto theta = make_weights(c.n, parse_weight_mode(c.weights), c.seed, 0);
  SupportOptions o;
  o.threshold = c.threshold;
  o.eta = c.eta;
  o.points = c.grid;
  o.margin = c.margin;
  o.solver = c.solver.options();
  const json config = {{"command", "support"}, {"measure", to_json(mu)}, {"n", c.n},
                       {"weights", c.weights}, {"seed", c.seed}, {"threshold", c.threshold},
                       {"eta", c.eta}, {"grid", c.grid}, {"margin", c.margin},
                       {"solver", c.solver.to_json()}};
  const auto rep = support_experiment(mu, theta, o);
  emit(c.common, json_doc(c.common, config, to_json(rep)));
  return kOk;
}

// ---- residuals -----------------------------------------------------------

struct ResidualsCmd {
  Common common;
  SolverFlags solver;
  std::string preset = "bernoulli";
  std::string file;
  int n = 32;
  std::string weights = "random";
  std::uint64_t seed = 1;
  double re_max = 1.7;
  double im_min = 0.05;
  double im_max = 3.0;
  int n_re = 20;
  int n_im = 10;
  double eps_hat = 0.3;
  double a_hat = 0.05;
};

int run_residuals(const ResidualsCmd& c) {
  const auto mu = single_measure(c.preset, c.file);
  const auto theta = make_weights(c.n, parse_weight_mode(c.weights), c.seed, 0);
  if (!(c.im_min > 0.0 && c.im_min <= c.im_max)) throw DomainError("need 0 < im-min <= im-max");
  if (c.n_re < 1 || c.n_im < 1) throw DomainError("grid counts must be positive");
  std::vector<cplx> grid;
  for (int j = 0; j < c.n_im; ++j) {
    const double y = c.n_im == 1 ? c.im_min : c.im_min + (c.im_max - c.im_min) * j / (c.n_im - 1);
    for (int k = 0; k < c.n_re; ++k) {
      const double x = c.n_re == 1 ? 0.0 : -c.re_max + 2.0 * c.re_max * k / (c.n_re - 1);
      grid.emplace_back(x, y);
    }
  }
  ResidualOptions o;
  o.eps_hat = c.eps_hat;
  o.a_hat = c.a_hat;
  o.solver = c.solver.options();
  const json config = {{"command", "residuals"}, {"measure", to_json(mu)}, {"n", c.n},
                       {"weights", c.weights}, {"seed", c.seed}, {"re_max", c.re_max},
                       {"im_min", c.im_min}, {"im_max", c.im_max}, {"n_re", c.n_re},
                       {"n_im", c.n_im}, {"eps_hat", c.eps_hat}, {"a_hat", c.a_hat},
                       {"solver", c.solver.to_json()}};
  const auto terms = functional_residuals(mu, theta, grid, o);
  json points = json::array();
  double max_p = 0.0, max_q = 0.0, max_vieta = 0.0;
  int failures = 0, omega3 = 0, in_region = 0;
  for (const auto& t : terms) {
    points.push_back(to_json(t));
    if (!t.ok) {
      ++failures;
      continue;
    }
    const double s = 1.0 + std::abs(t.z);
    max_p = std::max(max_p, t.residual_P / (s * s * s));
    max_q = std::max(max_q, t.residual_Q / (s * s));
    max_vieta = std::max({max_vieta, t.vieta_sum, t.vieta_product});
    if (t.in_region) {
      ++in_region;
      if (t.matched_root == "omega3") ++omega3;
    }
  }
  json body = {{"summary", {{"points", terms.size()},
                            {"failures", failures},
                            {"max_scaled_residual_P", max_p},
                            {"max_scaled_residual_Q", max_q},
                            {"max_vieta", max_vieta},
                            {"in_region", in_region},
                            {"matched_omega3_in_region", omega3}}},
               {"points", points}};
  emit(c.common, json_doc(c.common, config, body));
  return failures == 0 ? kOk : kNumeric;
}

// ---- sphere --------------------------------------------------------------

struct SphereCmd {
  Common common;
  int n = 16;
  std::uint64_t seed = 1;
  std::uint64_t index = 0;
};

int run_sphere(const SphereCmd& c) {
  const auto theta = sample(c.n, c.seed, c.index);
  const json config = {{"command", "sphere"}, {"n", c.n}, {"seed", c.seed}, {"index", c.index}};
  json body = {{"theta", std::vector<double>(theta.values().begin(), theta.values().end())},
               {"stats", to_json(stats(theta))}};
  emit(c.common, json_doc(c.common, config, body));
  return kOk;
}

// ---- concentration -------------------------------------------------------

struct ConcentrationCmd {
  Common common;
  int n = 64;
  long long samples = 100000;
  std::uint64_t seed = 1;
  ConcentrationOptions opts;
};

int run_concentration(const ConcentrationCmd& c) {
  const json config = {{"command", "concentration"}, {"n", c.n}, {"samples", c.samples},
                       {"seed", c.seed}, {"a", c.opts.a_max}, {"r", c.opts.r_power},
                       {"t", c.opts.t_cubes}, {"marginal_samples", c.opts.marginal_samples},
                       {"bins", c.opts.marginal_bins}};
  const auto rep = concentration_report(c.n, c.samples, c.seed, c.opts);
  emit(c.common, json_doc(c.common, config, to_json(rep)));
  return kOk;
}

void apply_thread_cap() {
  const char* env = std::getenv("FREECONV_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw DomainError("FREECONV_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free additive convolution toolkit"};
  app.require_subcommand(1);

  ConvolveCmd cv;
  auto* convolve = app.add_subcommand("convolve", "Free convolution: Cauchy transform or density");
  add_common(convolve, cv.common);
  add_solver(convolve, cv.solver);
  add_inversion(convolve, cv.inversion);
  convolve->add_option("--preset", cv.presets, "bernoulli | binomial:<p> | semicircle:<c> | dirac:<a> (repeatable)");
  convolve->add_option("--measure", cv.files, "Measure JSON file (repeatable)");
  convolve->add_flag("--density", cv.density, "Recover the density by inversion");
  convolve->add_option("--im", cv.im, "Im z for transform samples")->check(CLI::PositiveNumber);
  convolve->add_option("--points", cv.points, "Transform sample count")->check(CLI::PositiveNumber);
  convolve->add_option("--xmin", cv.x_min, "Window start (default: support bound)");
  convolve->add_option("--xmax", cv.x_max, "Window end");

  DistanceCmd ds;
  auto* distance = app.add_subcommand("distance", "Distance between two distributions");
  add_common(distance, ds.common);
  distance->add_option("--a", ds.a, "arcsine | semicircle | preset | measure JSON | gridded CSV")->required();
  distance->add_option("--b", ds.b, "Second operand")->required();
  distance->add_option("--metric", ds.metric, "kolmogorov | levy | delta_eps | all")
      ->check(CLI::IsMember({"kolmogorov", "levy", "delta_eps", "all"}));
  distance->add_option("--eps", ds.eps, "Delta_eps parameter")->check(CLI::Range(1e-12, 1.0 - 1e-12));

  RatesCmd rt;
  auto* rates = app.add_subcommand("rates", "Convergence rates of weighted sums");
  add_common(rates, rt.common);
  add_solver(rates, rt.solver);
  add_inversion(rates, rt.inversion);
  rates->add_option("--preset", rt.preset, "Measure preset");
  rates->add_option("--measure", rt.file, "Measure JSON file");
  rates->add_option("--n", rt.n, "Increasing n schedule, e.g. 4,8,16")->delimiter(',')->required();
  rates->add_option("--weights", rt.weights, "uniform | random")->check(CLI::IsMember({"uniform", "random"}));
  rates->add_option("--seed", rt.seed, "Seed for random weights");
  rates->add_option("--reps", rt.reps, "Repetitions per n")->check(CLI::PositiveNumber);
  rates->add_option("--metric", rt.metrics, "delta | levy | delta_eps | delta_tilde | all")->delimiter(',');
  rates->add_option("--eps", rt.eps, "Delta_eps parameter");
  rates->add_option("--tilde-a", rt.tilde_a, "Delta-tilde strip height");
  rates->add_option("--tilde-eps", rt.tilde_eps, "Delta-tilde window parameter");
  rates->add_option("--u-points", rt.u_points, "Delta-tilde u grid")->check(CLI::Range(2, 1000000));

  SupportCmd sp;
  auto* support = app.add_subcommand("support", "Support enclosure of a weighted sum");
  add_common(support, sp.common);
  add_solver(support, sp.solver);
  support->add_option("--preset", sp.preset, "Measure preset");
  support->add_option("--measure", sp.file, "Measure JSON file");
  support->add_option("--n", sp.n, "Number of summands")->check(CLI::PositiveNumber);
  support->add_option("--weights", sp.weights, "uniform | random")->check(CLI::IsMember({"uniform", "random"}));
  support->add_option("--seed", sp.seed, "Seed for random weights");
  support->add_option("--threshold", sp.threshold, "Density threshold")->check(CLI::PositiveNumber);
  support->add_option("--eta", sp.eta, "Inversion height")->check(CLI::PositiveNumber);
  support->add_option("--grid", sp.grid, "Grid points")->check(CLI::Range(2, 10000000));
  support->add_option("--margin", sp.margin, "Window margin")->check(CLI::NonNegativeNumber);

  ResidualsCmd rs;
  auto* residuals = app.add_subcommand("residuals", "Functional-equation residuals for Z_1");
  add_common(residuals, rs.common);
  add_solver(residuals, rs.solver);
  residuals->add_option("--preset", rs.preset, "Measure preset");
  residuals->add_option("--measure", rs.file, "Measure JSON file");
  residuals->add_option("--n", rs.n, "Number of summands")->check(CLI::PositiveNumber);
  residuals->add_option("--weights", rs.weights, "uniform | random")->check(CLI::IsMember({"uniform", "random"}));
  residuals->add_option("--seed", rs.seed, "Seed for random weights");
  residuals->add_option("--re-max", rs.re_max, "Grid spans |Re z| <= re-max")->check(CLI::NonNegativeNumber);
  residuals->add_option("--im-min", rs.im_min, "Lowest Im z");
  residuals->add_option("--im-max", rs.im_max, "Highest Im z");
  residuals->add_option("--n-re", rs.n_re, "Grid columns");
  residuals->add_option("--n-im", rs.n_im, "Grid rows");
  residuals->add_option("--eps-hat", rs.eps_hat, "Region parameter eps-hat");
  residuals->add_option("--a-hat", rs.a_hat, "Region parameter a-hat");

  SphereCmd sh;
  auto* sphere = app.add_subcommand("sphere", "Sample a point of the unit sphere");
  add_common(sphere, sh.common);
  sphere->add_option("--n", sh.n, "Dimension")->check(CLI::PositiveNumber);
  sphere->add_option("--seed", sh.seed, "Seed");
  sphere->add_option("--index", sh.index, "Stream index");

  ConcentrationCmd cc;
  auto* conc = app.add_subcommand("concentration", "Monte Carlo check of the sphere concentration bounds");
  add_common(conc, cc.common);
  conc->add_option("--n", cc.n, "Dimension (>= 4)")->check(CLI::Range(4, 100000000));
  conc->add_option("--samples", cc.samples, "Monte Carlo samples (>= 1000)")->check(CLI::Range(1000LL, 1000000000000LL));
  conc->add_option("--seed", cc.seed, "Seed");
  conc->add_option("--a", cc.opts.a_max, "A in the max-coordinate bound")->check(CLI::PositiveNumber);
  conc->add_option("--r", cc.opts.r_power, "r in the power-sum bound")->check(CLI::PositiveNumber);
  conc->add_option("--t", cc.opts.t_cubes, "t in the cube-sum bound")->check(CLI::PositiveNumber);
  conc->add_option("--marginal-samples", cc.opts.marginal_samples, "Samples for the chi-square check (0 = off)")->check(CLI::NonNegativeNumber);
  conc->add_option("--bins", cc.opts.marginal_bins, "Interior chi-square bins")->check(CLI::Range(2, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    apply_thread_cap();
    if (convolve->parsed()) return run_convolve(cv);
    if (distance->parsed()) return run_distance(ds);
    if (rates->parsed()) return run_rates(rt);
    if (support->parsed()) return run_support(sp);
    if (residuals->parsed()) return run_residuals(rs);
    if (sphere->parsed()) return run_sphere(sh);
    if (conc->parsed()) return run_concentration(cc);
  } catch (const BranchCutError& e) {
    std::cerr << "freeconv: " << e.what() << "\n";
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "freeconv: " << e.what() << "\n";
    return kIo;
  } catch (const DomainError& e) {
    std::cerr << "freeconv: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "freeconv: " << e.what() << "\n";
    return kNumeric;
  }
  return kConfig;
}
