#include "freeconv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "freeconv/cumulants.hpp"
#include "freeconv/error.hpp"
#include "freeconv/polyroots.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(WeightMode m) { return m == WeightMode::Uniform ? "uniform" : "random"; }

WeightMode parse_weight_mode(const std::string& s) {
  if (s == "uniform") return WeightMode::Uniform;
  if (s == "random") return WeightMode::Random;
  throw DomainError("unknown weight mode '" + s + "'");
}

WeightVector make_weights(int n, WeightMode mode, std::uint64_t seed, int rep) {
  if (mode == WeightMode::Uniform) return WeightVector::uniform(n);
  return sample(n, seed, static_cast<std::uint64_t>(rep));
}

SlopeFit fit_loglog_slope(std::span<const double> n, std::span<const double> d,
                          std::span<const double> weights) {
  if (n.size() != d.size() || (!weights.empty() && weights.size() != n.size()))
    throw DomainError("slope fit needs matching input lengths");
  SlopeFit fit;
  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(d[i] > 0.0) || !std::isfinite(d[i])) {
      ++fit.skipped;
      continue;
    }
    x.push_back(std::log(n[i]));
    y.push_back(std::log(d[i]));
    w.push_back(weights.empty() ? 1.0 : weights[i]);
  }
  fit.used = static_cast<int>(x.size());
  if (fit.used < 3) throw DomainError("slope fit needs at least three positive rows");
  const double sw = std::accumulate(w.begin(), w.end(), 0.0);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("slope fit needs at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

namespace {

GriddedDistribution recover_around(const CauchyTransform& g, const InversionOptions& inv) {
  const double half = g.support_radius() + inv.margin;
  return recover(g, g.mean() - half, g.mean() + half, inv.points, inv.eta);
}

std::optional<SlopeFit> try_fit(const std::vector<RateRow>& rows, double RateRow::*field,
                                bool weighted) {
  std::vector<double> n, d, w;
  for (const auto& r : rows) {
    if (r.failed) continue;
    n.push_back(r.n);
    d.push_back(r.*field);
    w.push_back(weighted && r.delta_err > 0.0 ? 1.0 / (r.delta_err * r.delta_err) : 1.0);
  }
  try {
    return fit_loglog_slope(n, d, w);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

RateRow rate_row(const Measure& mu, int n, int rep, const RateOptions& o) {
  RateRow row;
  row.n = n;
  row.rep = rep;
  row.seed = o.seed;
  row.mode = o.mode;
  row.delta = row.delta_err = row.delta_eps = row.delta_eps_err = row.delta_tilde = row.levy =
      kNaN;
  try {
    const auto theta = make_weights(n, o.mode, o.seed, rep);
    const auto conv = ConvolutionTransform::weighted(mu, theta, o.solver);
    if (o.delta || o.levy || o.delta_eps) {
      auto dist = recover_around(*conv, o.inversion);
      row.tail_mass = dist.tail_mass;
      const auto a = CdfSource::gridded(std::move(dist));
      const auto b = CdfSource::smoothed_semicircle(o.inversion.eta);
      if (o.delta) {
        const auto k = kolmogorov(a, b);
        row.delta = k.value;
        row.delta_err = k.error;
      }
      if (o.levy) row.levy = levy(a, b).value;
      if (o.delta_eps) {
        const auto e = delta_eps(a, b, o.eps);
        row.delta_eps = e.value;
        row.delta_eps_err = e.error;
      }
    }
    if (o.delta_tilde) {
      const MeasureTransform omega(Measure::semicircle(1.0));
      row.delta_tilde = delta_tilde(*conv, omega, o.tilde_a, o.tilde_eps, o.strip);
    }
    row.solves = conv->solves();
    row.iterations = conv->iterations();
  } catch (const Error& e) {
    row.failed = true;
    row.failure = e.what();
  }
  return row;
}

}  // namespace

RateReport rate_experiment(const Measure& mu, const RateOptions& opts) {
  if (opts.n_schedule.empty()) throw DomainError("rate experiment needs a nonempty n schedule");
  if (opts.reps < 1) throw DomainError("rate experiment needs reps >= 1");
  for (std::size_t i = 0; i < opts.n_schedule.size(); ++i) {
    if (opts.n_schedule[i] < 1) throw DomainError("n schedule entries must be >= 1");
    if (i > 0 && opts.n_schedule[i] <= opts.n_schedule[i - 1])
      throw DomainError("n schedule must be increasing");
  }
  RateReport rep;
  for (int n : opts.n_schedule)
    for (int r = 0; r < opts.reps; ++r) rep.rows.push_back(rate_row(mu, n, r, opts));
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const std::vector<RateRow> prefix(rep.rows.begin(), rep.rows.begin() + static_cast<long>(i) + 1);
    const auto fit = opts.delta ? try_fit(prefix, &RateRow::delta, true) : std::nullopt;
    rep.rows[i].slope_running = fit ? fit->slope : kNaN;
  }
  if (opts.delta) rep.delta_fit = try_fit(rep.rows, &RateRow::delta, true);
  if (opts.delta_eps) rep.delta_eps_fit = try_fit(rep.rows, &RateRow::delta_eps, false);
  if (opts.delta_tilde) rep.delta_tilde_fit = try_fit(rep.rows, &RateRow::delta_tilde, false);
  if (opts.levy) rep.levy_fit = try_fit(rep.rows, &RateRow::levy, false);
  return rep;
}

NonIdReport nonid_experiment(std::span<const Measure> measures, const InversionOptions& inv,
                             const SolveOptions& solver) {
  if (measures.empty()) throw DomainError("need at least one measure");
  double var = 0.0;
  double cubes = 0.0;
  for (const auto& mu : measures) {
    if (std::abs(mean(mu)) > 1e-10) throw DomainError("measures must have mean zero");
    const double v = variance(mu);
    if (!(v > 0.0)) throw DegenerateMeasureError("measures must have positive variance");
    var += v;
    cubes += std::pow(mu.support_radius(), 3);
  }
  NonIdReport out;
  out.b_n = std::sqrt(var);
  out.l_n = cubes / (var * out.b_n);
  std::vector<Measure> scaled;
  for (const auto& mu : measures) scaled.push_back(dilate(mu, 1.0 / out.b_n));
  const ConvolutionTransform conv(std::move(scaled), solver);
  const auto a = CdfSource::gridded(recover_around(conv, inv));
  const auto k = kolmogorov(a, CdfSource::smoothed_semicircle(inv.eta));
  out.delta = k.value;
  out.delta_err = k.error;
  out.ratio = out.delta / out.l_n;
  return out;
}

SupportReport support_experiment(const Measure& mu, const WeightVector& theta,
                                 const SupportOptions& opts) {
  if (!(opts.threshold > 0.0)) throw DomainError("density threshold must be positive");
  SupportReport rep;
  rep.n = theta.n();
  rep.max_abs_theta = theta.max_abs();
  rep.sum_abs_cubes = theta.sum_abs_pow(3);
  rep.sum_cubes = theta.sum_pow(3);
  rep.sum_fourth = theta.sum_pow(4);
  rep.L = mu.support_radius();
  rep.m3 = moment(mu, 3);
  rep.r_theta = r_theta(mu, theta);
  rep.bound_kargin = 5.0 * std::pow(rep.L, 3) * rep.sum_abs_cubes;
  rep.bound_paper = 2.0 * rep.r_theta;
  rep.threshold = opts.threshold;
  rep.eta = opts.eta;
  rep.preconditions_met = rep.max_abs_theta * rep.L < 1.0 / 6.0 && rep.r_theta <= 0.5;
  // What survives extrapolation of the Cauchy tail of unit mass 0.05 away.
  rep.tail_allowance = std::pow(opts.eta, 3) / (std::numbers::pi * std::pow(0.05, 4));

  const auto conv = ConvolutionTransform::weighted(mu, theta, opts.solver);
  const double half = conv->support_radius() + opts.margin;
  RecoverOptions ro;
  ro.richardson = true;
  const auto dist =
      recover(*conv, conv->mean() - half, conv->mean() + half, opts.points, opts.eta, ro);
  const double level = opts.threshold + rep.tail_allowance;
  std::size_t lo = dist.grid.size();
  std::size_t hi = 0;
  for (std::size_t i = 0; i < dist.grid.size(); ++i) {
    if (dist.density[i] > level) {
      lo = std::min(lo, i);
      hi = i;
    }
  }
  if (lo == dist.grid.size()) {
    rep.detected_lo = rep.detected_hi = kNaN;
    return rep;
  }
  rep.detected_lo = dist.grid[lo];
  rep.detected_hi = dist.grid[hi];
  const double edge = std::max(-rep.detected_lo, rep.detected_hi);
  rep.margin_kargin = 2.0 + rep.bound_kargin - edge;
  rep.margin_paper = 2.0 + rep.bound_paper - edge;
  rep.inside_kargin = rep.margin_kargin > 0.0;
  rep.inside_paper = rep.margin_paper >= 0.0;
  return rep;
}

namespace {

void assemble_terms(FunctionalEqTerms& t, const std::vector<Measure>& copies,
                    const std::vector<double>& th, double m3) {
  const cplx z = t.z;
  const cplx z1 = t.Z[0];
  cplx j1 = 0.0, j2 = 0.0, j4 = 0.0, m1 = 0.0, m2 = 0.0;
  double cubes = 0.0;
  for (std::size_t i = 1; i < copies.size(); ++i) {
    const cplx zi = t.Z[i];
    const double t2 = th[i] * th[i];
    const double t3 = t2 * th[i];
    const cplx h = f_transform(copies[i], zi) - zi;
    j1 += h + t2 / zi + t3 * m3 / (zi * zi);
    j2 += t2 / z1 - t2 / zi;
    j4 += t3 / (z1 * z1) - t3 / (zi * zi);
    m1 += h + t2 / zi;
    m2 += t2 / z1 - t2 / zi;
    cubes += t3;
  }
  const cplx z1sq = z1 * z1;
  t.I1 = z1sq * j1;
  t.I2 = z1sq * j2;
  t.I3 = th[0] * th[0];
  t.I4 = z1sq * m3 * j4;
  t.I5 = -m3 * cubes;
  t.r = t.I1 + t.I2 + t.I4 + t.I5;
  t.M1 = z1 * m1;
  t.M2 = z1 * m2;
  t.M3 = th[0] * th[0];
  t.q = t.M1 + t.M2 + t.M3;
  t.residual_P = std::abs(((z1 - z) * z1 + 1.0 - t.I3) * z1 - t.r);
  t.residual_Q = std::abs((z1 - z) * z1 + 1.0 - t.q);
}

void match_roots(FunctionalEqTerms& t) {
  const cplx z = t.z;
  const cplx z1 = t.Z[0];
  t.cubic = cubic_roots(-z, 1.0 - t.I3, -t.r);
  auto cubic = t.cubic;
  std::sort(cubic.begin(), cubic.end(),
            [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  const cplx w1 = cubic[0];
  t.r2 = 4.0 * t.I3 + (2.0 * z - 3.0 * w1) * w1;
  const cplx s = sqrt_cut(z * z - 4.0 + t.r2);
  t.omega = {w1, 0.5 * (z - s) - 0.5 * w1, 0.5 * (z + s) - 0.5 * w1};
  t.vieta_sum = std::abs(t.omega[0] + t.omega[1] + t.omega[2] - z);
  t.vieta_product = std::abs(t.omega[0] * t.omega[1] * t.omega[2] - t.r);
  const double direct = std::max(std::abs(t.omega[1] - cubic[1]), std::abs(t.omega[2] - cubic[2]));
  const double swapped =
      std::max(std::abs(t.omega[1] - cubic[2]), std::abs(t.omega[2] - cubic[1]));
  t.formula_gap = std::min(direct, swapped);

  const cplx sq = sqrt_cut(z * z - 4.0 + 4.0 * t.q);
  t.omega_tilde = {0.5 * (z - sq), 0.5 * (z + sq)};

  t.dist_omega3 = std::abs(z1 - t.omega[2]);
  t.dist_omega_tilde2 = std::abs(z1 - t.omega_tilde[1]);
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(z1 - t.omega[k]) < std::abs(z1 - t.omega[best])) best = k;
  t.matched_root = "omega" + std::to_string(best + 1);
  t.matched_root_Q = std::abs(z1 - t.omega_tilde[0]) < t.dist_omega_tilde2 ? "omega_tilde1"
                                                                           : "omega_tilde2";
}

}  // namespace

std::vector<FunctionalEqTerms> functional_residuals(const Measure& mu, const WeightVector& theta,
                                                    std::span<const cplx> z_grid,
                                                    const ResidualOptions& opts) {
  if (std::abs(mean(mu)) > 1e-10 || std::abs(variance(mu) - 1.0) > 1e-10)
    throw DomainError("functional equations need a standardized measure");
  std::vector<double> th(theta.values().begin(), theta.values().end());
  std::stable_sort(th.begin(), th.end(),
                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  std::vector<Measure> copies;
  for (double t : th) copies.push_back(scale(mu, t));
  const ConvolutionSystem system(copies);
  const double m3 = moment(mu, 3);

  std::vector<FunctionalEqTerms> out(z_grid.size());
  for (std::size_t k = 0; k < z_grid.size(); ++k) {
    auto& t = out[k];
    t.z = z_grid[k];
    t.in_region = std::abs(t.z.real()) <= 2.0 - opts.eps_hat && t.z.imag() >= opts.a_hat &&
                  t.z.imag() <= 3.0;
    t.on_unit_line = std::abs(t.z.imag() - 1.0) <= 1e-12;
    const auto sol = system.try_solve(t.z, opts.solver);
    t.Z = sol.Z;
    if (!sol.converged) {
      t.failure = "subordination solve did not converge";
      continue;
    }
    assemble_terms(t, copies, th, m3);
    try {
      match_roots(t);
      t.ok = true;
    } catch (const BranchCutError& e) {
      t.failure = e.what();
    }
  }
  return out;
}

}  // namespace freeconv
