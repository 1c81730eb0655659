#include "freeconv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include <omp.h>

#include "freeconv/error.hpp"

namespace freeconv {

namespace {

constexpr int kChunk = 64;
constexpr int kAnalyticNodes = 20001;
constexpr double kDipTolerance = 1e-12;

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> x(static_cast<std::size_t>(points));
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) x[static_cast<std::size_t>(i)] = lo + h * i;
  x.back() = hi;
  return x;
}

void recover_chunk(const CauchyTransform& g, const std::vector<double>& x, int begin, int end,
                   double eta, bool richardson, std::vector<double>& rho) {
  WarmStart warm;
  WarmStart warm_half;
  for (int k = begin; k < end; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double d = -g.evaluate(cplx(x[i], eta), &warm).imag() / std::numbers::pi;
    if (richardson) {
      const double dh = -g.evaluate(cplx(x[i], 0.5 * eta), &warm_half).imag() / std::numbers::pi;
      d = std::max(0.0, 2.0 * dh - d);
    } else if (d < -kDipTolerance) {
      throw InversionError("recovered density dips below zero at x = " + std::to_string(x[i]));
    }
    rho[i] = std::max(0.0, d);
  }
}

void validate(double x_min, double x_max, int points, double eta) {
  if (!(x_min < x_max)) throw DomainError("inversion window needs x_min < x_max");
  if (points < 2) throw DomainError("inversion grid needs at least two points");
  if (!(eta > 0.0)) throw DomainError("inversion height eta must be positive");
}

GriddedDistribution finish(const CauchyTransform& g, std::vector<double> x, std::vector<double> rho,
                           double eta) {
  GriddedDistribution d;
  d.x_min = x.front();
  d.x_max = x.back();
  d.eta = eta;
  d.mean = g.mean();
  const double h = d.x_max - d.x_min;
  const double step = h / static_cast<double>(x.size() - 1);
  // Mass of the smoothed law outside the window from the 1/(z - mean) asymptote.
  const double left = std::atan2(eta, d.mean - d.x_min) / std::numbers::pi;
  std::vector<double> cdf(x.size());
  double acc = 0.0;
  cdf[0] = left;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc += 0.5 * step * (rho[i - 1] + rho[i]);
    cdf[i] = left + acc;
  }
  for (double& c : cdf) c = std::clamp(c, 0.0, 1.0);
  d.tail_mass = std::max(0.0, 1.0 - acc);
  d.grid = std::move(x);
  d.density = std::move(rho);
  d.cdf = std::move(cdf);
  return d;
}

}  // namespace

double GriddedDistribution::max_density() const {
  return density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
}

double GriddedDistribution::cdf_at(double x) const {
  if (x < x_min) {
    const double at_edge = std::atan2(eta, mean - x_min);
    if (cdf.front() <= 0.0 || at_edge <= 0.0) return 0.0;
    return cdf.front() * std::atan2(eta, mean - x) / at_edge;
  }
  if (x > x_max) {
    const double at_edge = std::atan2(eta, x_max - mean);
    if (cdf.back() >= 1.0 || at_edge <= 0.0) return 1.0;
    return 1.0 - (1.0 - cdf.back()) * std::atan2(eta, x - mean) / at_edge;
  }
  const double t = (x - x_min) / spacing();
  const auto i = std::min(static_cast<std::size_t>(t), grid.size() - 2);
  const double f = t - static_cast<double>(i);
  return cdf[i] + f * (cdf[i + 1] - cdf[i]);
}

GriddedDistribution recover(const CauchyTransform& g, double x_min, double x_max, int points,
                            double eta, const RecoverOptions& opts) {
  validate(x_min, x_max, points, eta);
  auto x = linspace(x_min, x_max, points);
  std::vector<double> rho(x.size(), 0.0);
  const int chunks = (points + kChunk - 1) / kChunk;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < chunks; ++c) {
    try {
      recover_chunk(g, x, c * kChunk, std::min(points, (c + 1) * kChunk), eta, opts.richardson,
                    rho);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finish(g, std::move(x), std::move(rho), eta);
}

GriddedDistribution recover_serial(const CauchyTransform& g, double x_min, double x_max,
                                   int points, double eta, const RecoverOptions& opts) {
  validate(x_min, x_max, points, eta);
  auto x = linspace(x_min, x_max, points);
  std::vector<double> rho(x.size(), 0.0);
  for (int c = 0; c * kChunk < points; ++c)
    recover_chunk(g, x, c * kChunk, std::min(points, (c + 1) * kChunk), eta, opts.richardson, rho);
  return finish(g, std::move(x), std::move(rho), eta);
}

double smoothed_semicircle_cdf(double x, double eta) {
  const cplx z(x, eta);
  const cplx s = sqrt_cut(z * z - 4.0);
  // z + s = 2 F(z) stays in C+, so the principal log is continuous here.
  const cplx l = 0.25 * z * z - 0.25 * z * s + std::log(z + s) - 0.5 - std::numbers::ln2;
  return std::clamp(1.0 - l.imag() / std::numbers::pi, 0.0, 1.0);
}

CdfSource CdfSource::gridded(GriddedDistribution dist) {
  CdfSource s;
  s.nodes_ = dist.grid;
  s.lo_ = dist.x_min;
  s.hi_ = dist.x_max;
  s.gridded_ = true;
  s.error_ = dist.spacing() * dist.max_density() + dist.tail_mass + dist.eta;
  auto shared = std::make_shared<const GriddedDistribution>(std::move(dist));
  s.cdf_ = [shared](double x) { return shared->cdf_at(x); };
  s.cdf_left_ = s.cdf_;
  return s;
}

CdfSource CdfSource::of_measure(const Measure& mu) {
  if (!mu.is_atomic()) {
    const double sd = std::sqrt(mu.semicircle_variance());
    CdfSource s;
    s.cdf_ = [sd](double x) { return semicircle_cdf(x / sd); };
    s.cdf_left_ = s.cdf_;
    s.lo_ = -2.0 * sd;
    s.hi_ = 2.0 * sd;
    s.nodes_ = linspace(s.lo_, s.hi_, kAnalyticNodes);
    return s;
  }
  CdfSource s;
  s.cdf_ = [mu](double x) { return freeconv::cdf(mu, x); };
  s.cdf_left_ = [mu](double x) { return freeconv::cdf_left(mu, x); };
  for (const auto& a : mu.atoms()) s.jumps_.push_back(a.x);
  s.nodes_ = s.jumps_;
  s.lo_ = s.jumps_.front();
  s.hi_ = s.jumps_.back();
  return s;
}

CdfSource CdfSource::semicircle() { return of_measure(Measure::semicircle(1.0)); }

CdfSource CdfSource::smoothed_semicircle(double eta) {
  if (!(eta > 0.0)) throw DomainError("smoothing width must be positive");
  CdfSource s;
  s.cdf_ = [eta](double x) { return smoothed_semicircle_cdf(x, eta); };
  s.cdf_left_ = s.cdf_;
  s.lo_ = -3.0;
  s.hi_ = 3.0;
  s.nodes_ = linspace(s.lo_, s.hi_, kAnalyticNodes);
  return s;
}

CdfSource CdfSource::arcsine() {
  CdfSource s;
  s.cdf_ = [](double x) {
    return 0.5 + std::asin(std::clamp(0.5 * x, -1.0, 1.0)) / std::numbers::pi;
  };
  s.cdf_left_ = s.cdf_;
  s.lo_ = -2.0;
  s.hi_ = 2.0;
  s.nodes_ = linspace(s.lo_, s.hi_, kAnalyticNodes);
  return s;
}

namespace {

std::vector<double> merged_nodes(const CdfSource& a, const CdfSource& b) {
  std::vector<double> x(a.nodes());
  x.insert(x.end(), b.nodes().begin(), b.nodes().end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

std::vector<double> merged_jumps(const CdfSource& a, const CdfSource& b) {
  std::vector<double> j(a.jumps());
  j.insert(j.end(), b.jumps().begin(), b.jumps().end());
  std::sort(j.begin(), j.end());
  j.erase(std::unique(j.begin(), j.end()), j.end());
  return j;
}

// Resolution term when both sides are closed forms sampled on their nodes.
double node_error(const CdfSource& a, const CdfSource& b, const std::vector<double>& x) {
  if (a.is_gridded() || b.is_gridded() || !a.jumps().empty() || !b.jumps().empty()) return 0.0;
  double e = 0.0;
  double prev = a.cdf(x.front()) - b.cdf(x.front());
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d = a.cdf(x[i]) - b.cdf(x[i]);
    e = std::max(e, std::abs(d - prev));
    prev = d;
  }
  return e;
}

}  // namespace

DistanceValue kolmogorov(const CdfSource& a, const CdfSource& b) {
  const auto x = merged_nodes(a, b);
  double sup = 0.0;
  for (double t : x) sup = std::max(sup, std::abs(a.cdf(t) - b.cdf(t)));
  for (double t : merged_jumps(a, b))
    sup = std::max(sup, std::abs(a.cdf_left(t) - b.cdf_left(t)));
  return {sup, a.error_estimate() + b.error_estimate() + node_error(a, b, x)};
}

namespace {

constexpr double kLevySlack = 1e-15;

bool levy_holds(const CdfSource& a, const CdfSource& b, const std::vector<double>& x,
                const std::vector<double>& jumps, double s) {
  constexpr double slack = kLevySlack;
  auto check = [&](double t) {
    if (a.cdf(t - s) - s > b.cdf(t) + slack) return false;
    if (b.cdf(t) > a.cdf(t + s) + s + slack) return false;
    if (a.cdf_left(t - s) - s > b.cdf_left(t) + slack) return false;
    if (b.cdf_left(t) > a.cdf_left(t + s) + s + slack) return false;
    return true;
  };
  for (double t : x)
    if (!check(t)) return false;
  for (double j : jumps)
    if (!check(j - s) || !check(j + s)) return false;
  return true;
}

}  // namespace

DistanceValue levy(const CdfSource& a, const CdfSource& b) {
  const auto x = merged_nodes(a, b);
  const auto jumps = merged_jumps(a, b);
  double lo = 0.0;
  double hi = 1.0;
  if (levy_holds(a, b, x, jumps, 0.0)) return {0.0, a.error_estimate() + b.error_estimate()};
  for (int it = 0; it < 45; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (levy_holds(a, b, x, jumps, mid))
      hi = mid;
    else
      lo = mid;
  }
  // The bisection returns its upper bracket, so the bracket width is part of the error.
  return {hi, a.error_estimate() + b.error_estimate() + node_error(a, b, x) + (hi - lo) + kLevySlack};
}

DistanceValue delta_eps(const CdfSource& a, const CdfSource& b, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("delta_eps needs eps in (0, 1)");
  const double x0 = -2.0 + eps;
  const double x1 = 2.0 - eps;
  const double a0 = a.cdf(x0);
  const double b0 = b.cdf(x0);
  auto diff = [&](double fa, double fb) { return std::abs((fa - a0) - (fb - b0)); };
  double sup = diff(a.cdf(x1), b.cdf(x1));
  std::vector<double> inside;
  for (double t : merged_nodes(a, b))
    if (t >= x0 && t <= x1) inside.push_back(t);
  for (double t : inside) sup = std::max(sup, diff(a.cdf(t), b.cdf(t)));
  for (double t : merged_jumps(a, b))
    if (t > x0 && t <= x1) sup = std::max(sup, diff(a.cdf_left(t), b.cdf_left(t)));
  inside.insert(inside.begin(), x0);
  inside.push_back(x1);
  return {sup, 2.0 * (a.error_estimate() + b.error_estimate()) + node_error(a, b, inside)};
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
  struct Rec {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double eps,
               int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
      return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
             run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    }
  };
  const double fa = f(lo);
  const double fb = f(hi);
  // Start from a few panels so narrow features near the ends are not missed.
  constexpr int panels = 8;
  const double w = (hi - lo) / panels;
  Rec rec{f};
  double total = 0.0;
  double left_val = fa;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + w * p;
    const double b = p + 1 == panels ? hi : a + w;
    const double mid_val = f(0.5 * (a + b));
    const double right_val = p + 1 == panels ? fb : f(b);
    const double s = (b - a) / 6.0 * (left_val + 4.0 * mid_val + right_val);
    total += rec.run(a, b, left_val, mid_val, right_val, s, tol / panels, 40);
    left_val = right_val;
  }
  return total;
}

namespace {

double strip_integral(const CauchyTransform& ga, const CauchyTransform& gb, double u, double a,
                      double tol) {
  WarmStart wa;
  WarmStart wb;
  return adaptive_simpson(
      [&](double v) { return std::abs(ga.evaluate(cplx(u, v), &wa) - gb.evaluate(cplx(u, v), &wb)); },
      a, 1.0, tol);
}

}  // namespace

double strip_sup(const CauchyTransform& ga, const CauchyTransform& gb, double a, double eps,
                 const StripOptions& opts) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("strip height a must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (opts.u_points < 2) throw DomainError("strip needs at least two u points");
  const auto u = linspace(-2.0 + 0.5 * eps, 2.0 - 0.5 * eps, opts.u_points);
  std::vector<double> val(u.size(), 0.0);
  std::vector<std::exception_ptr> errors(u.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      val[k] = strip_integral(ga, gb, u[k], a, opts.quad_tol);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return *std::max_element(val.begin(), val.end());
}

double delta_tilde(const CauchyTransform& ga, const CauchyTransform& gb, double a, double eps,
                   const StripOptions& opts) {
  return strip_sup(ga, gb, a, eps, opts) + a + std::pow(eps, 1.5);
}

BaiIntegrals bai_integrals(const CauchyTransform& ga, const CauchyTransform& gb, double a,
                           double eps, const StripOptions& opts) {
  BaiIntegrals out;
  const double r = std::max(std::abs(ga.mean()) + ga.support_radius(),
                            std::abs(gb.mean()) + gb.support_radius()) +
                   10.0;
  WarmStart wa;
  WarmStart wb;
  auto diff = [&](double u) {
    return std::abs(ga.evaluate(cplx(u, 1.0), &wa) - gb.evaluate(cplx(u, 1.0), &wb));
  };
  const double body = adaptive_simpson(diff, -r, r, opts.quad_tol);
  // |dG| ~ C/u^2 beyond the window, so each tail contributes about |dG(R)| R.
  wa.reset();
  wb.reset();
  const double tail = (diff(r) + diff(-r)) * r;
  out.line_integral = body + tail;
  out.line_error = opts.quad_tol + tail;
  out.strip_sup = strip_sup(ga, gb, a, eps, opts);
  out.strip_error = opts.quad_tol;
  return out;
}

}  // namespace freeconv
