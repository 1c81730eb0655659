#include "freeconv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <omp.h>

#include "freeconv/error.hpp"

namespace freeconv {

WeightVector::WeightVector(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) throw DomainError("weight vector must be nonempty");
  double s = 0.0;
  for (double t : theta_) {
    if (!std::isfinite(t)) throw DomainError("weights must be finite");
    s += t * t;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError("weights must have unit Euclidean norm");
}

WeightVector WeightVector::uniform(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  return WeightVector(std::vector<double>(static_cast<std::size_t>(n), 1.0 / std::sqrt(n)));
}

WeightVector WeightVector::normalized(std::vector<double> v) {
  double s = 0.0;
  for (double t : v) s += t * t;
  if (!(s > 0.0)) throw DomainError("cannot normalize the zero vector");
  const double norm = std::sqrt(s);
  for (double& t : v) t /= norm;
  return WeightVector(std::move(v));
}

double WeightVector::max_abs() const noexcept {
  double m = 0.0;
  for (double t : theta_) m = std::max(m, std::abs(t));
  return m;
}

double WeightVector::sum_abs_pow(int k) const noexcept {
  double s = 0.0;
  for (double t : theta_) s += std::pow(std::abs(t), k);
  return s;
}

double WeightVector::sum_pow(int k) const noexcept {
  double s = 0.0;
  for (double t : theta_) s += std::pow(t, k);
  return s;
}

WeightStats stats(const WeightVector& theta) {
  WeightStats s;
  s.n = theta.n();
  s.max_abs = theta.max_abs();
  for (int k = 3; k <= 9; ++k) s.sum_abs_pow.push_back(theta.sum_abs_pow(k));
  s.sum_cubes = theta.sum_pow(3);
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : key_(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::next_open01() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_open01() - 1.0;
    v = 2.0 * next_open01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

namespace {

std::vector<double> gaussian_direction(int n, CounterRng& rng) {
  std::vector<double> g(static_cast<std::size_t>(n));
  double s = 0.0;
  do {
    s = 0.0;
    for (double& x : g) {
      x = rng.next_gaussian();
      s += x * x;
    }
  } while (s == 0.0);
  const double norm = std::sqrt(s);
  for (double& x : g) x /= norm;
  return g;
}

}  // namespace

WeightVector sample(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw DomainError("n must be >= 1");
  CounterRng rng(seed, index);
  return WeightVector(gaussian_direction(n, rng));
}

double power_sum_constant(int k) {
  if (k == 3) return 33.0;
  if (k == 4) return 121.0;
  return std::pow(std::sqrt(static_cast<double>(k)) + 2.0, k);
}

double marginal_density(int n, double x) {
  const double nn = n;
  const double u = 1.0 - x * x / nn;
  if (u <= 0.0) return 0.0;
  const double log_c = std::lgamma(nn / 2.0) - std::lgamma((nn - 1.0) / 2.0) -
                       0.5 * std::log(std::numbers::pi * nn);
  return std::exp(log_c + 0.5 * (nn - 3.0) * std::log(u));
}

bool ConcentrationReport::pass() const {
  bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  if (marginal.samples > 0) ok = ok && marginal.pass;
  return ok;
}

namespace {

constexpr long long kBlock = 4096;
constexpr std::uint64_t kMarginalOffset = 1ULL << 48;
constexpr int kPowerMin = 3;
constexpr int kPowerMax = 9;

// Per-sample event counters; integer sums are associative, so block order
// does not affect the totals.
struct EventCounts {
  long long max_coord = 0;
  long long power[kPowerMax - kPowerMin + 1] = {};
  long long cubes_t = 0;
  long long cubes_log = 0;

  void add(const EventCounts& o) {
    max_coord += o.max_coord;
    for (int i = 0; i <= kPowerMax - kPowerMin; ++i) power[i] += o.power[i];
    cubes_t += o.cubes_t;
    cubes_log += o.cubes_log;
  }
};

struct Thresholds {
  double max_coord;
  double power[kPowerMax - kPowerMin + 1];
  double cubes_t;
  double cubes_log;
};

Thresholds make_thresholds(int n, const ConcentrationOptions& o) {
  const double nn = n;
  Thresholds t{};
  t.max_coord = o.a_max * std::sqrt(std::log(nn) / nn);
  for (int k = kPowerMin; k <= kPowerMax; ++k)
    t.power[k - kPowerMin] = power_sum_constant(k) * o.r_power / std::pow(nn, (k - 2.0) / 2.0);
  t.cubes_t = o.t_cubes / nn;
  t.cubes_log = 10.0 / (std::sqrt(nn) * std::log(nn));
  return t;
}

EventCounts count_block(int n, std::uint64_t seed, long long begin, long long end,
                        const Thresholds& th) {
  EventCounts c;
  for (long long k = begin; k < end; ++k) {
    CounterRng rng(seed, static_cast<std::uint64_t>(k));
    const auto th_vec = gaussian_direction(n, rng);
    double mx = 0.0;
    double pw[kPowerMax - kPowerMin + 1] = {};
    double cubes = 0.0;
    for (double t : th_vec) {
      const double a = std::abs(t);
      mx = std::max(mx, a);
      double p = a * a * a;
      for (int i = 0; i <= kPowerMax - kPowerMin; ++i) {
        pw[i] += p;
        p *= a;
      }
      cubes += t * t * t;
    }
    if (mx > th.max_coord) ++c.max_coord;
    for (int i = 0; i <= kPowerMax - kPowerMin; ++i)
      if (pw[i] >= th.power[i]) ++c.power[i];
    if (std::abs(cubes) >= th.cubes_t) ++c.cubes_t;
    if (std::abs(cubes) >= th.cubes_log) ++c.cubes_log;
  }
  return c;
}

// Bin edges for the chi-square check on sqrt(n) theta_1: `bins` equal-width
// bins on [-4, 4] plus one tail bin on each side.
std::vector<double> marginal_edges(int bins) {
  std::vector<double> e;
  for (int i = 0; i <= bins; ++i) e.push_back(-4.0 + 8.0 * i / bins);
  return e;
}

std::size_t marginal_bin(const std::vector<double>& edges, double x) {
  if (x < edges.front()) return 0;
  if (x >= edges.back()) return edges.size();
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin());
}

std::vector<long long> marginal_block(int n, std::uint64_t seed, long long begin, long long end,
                                      const std::vector<double>& edges) {
  std::vector<long long> counts(edges.size() + 1, 0);
  const double sn = std::sqrt(static_cast<double>(n));
  for (long long k = begin; k < end; ++k) {
    CounterRng rng(seed, kMarginalOffset + static_cast<std::uint64_t>(k));
    const auto th = gaussian_direction(n, rng);
    ++counts[marginal_bin(edges, sn * th[0])];
  }
  return counts;
}

// P(sqrt(n) theta_1 <= x); theta_1^2 ~ Beta(1/2, (n-1)/2).
double marginal_cdf(int n, double x) {
  const double nn = n;
  if (x * x >= nn) return x < 0.0 ? 0.0 : 1.0;
  const double half = 0.5 * boost::math::ibeta(0.5, (nn - 1.0) / 2.0, x * x / nn);
  return x < 0.0 ? 0.5 - half : 0.5 + half;
}

BoundCheck make_check(std::string name, std::string event, double bound, long long hits,
                      long long samples) {
  BoundCheck c;
  c.name = std::move(name);
  c.event = std::move(event);
  c.bound = bound;
  c.violations = hits;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  c.empirical = p;
  c.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  c.ci99_low = std::max(0.0, p - 2.5758293035489 * c.stderr_);
  c.ci99_high = std::min(1.0, p + 2.5758293035489 * c.stderr_);
  c.pass = p <= bound + 3.0 * c.stderr_;
  return c;
}

ConcentrationReport assemble(int n, long long samples, std::uint64_t seed,
                             const ConcentrationOptions& o, const EventCounts& c,
                             const std::vector<long long>& marginal_counts) {
  const double nn = n;
  ConcentrationReport r;
  r.n = n;
  r.samples = samples;
  r.seed = seed;
  r.checks.push_back(make_check("max_coordinate", "max|theta_i| > A sqrt(log n / n)",
                                8.0 / (o.a_max * std::sqrt(2.0 * std::numbers::pi)) / nn,
                                c.max_coord, samples));
  for (int k = kPowerMin; k <= kPowerMax; ++k) {
    r.checks.push_back(make_check("power_sum_k" + std::to_string(k),
                                  "sum|theta_i|^k >= B_k r / n^((k-2)/2)",
                                  std::exp(-std::pow(o.r_power * nn, 2.0 / k)),
                                  c.power[k - kPowerMin], samples));
  }
  r.checks.push_back(make_check("cube_sum_t", "|sum theta_i^3| >= t / n",
                                2.0 * std::exp(-std::pow(o.t_cubes, 2.0 / 3.0) / 23.0), c.cubes_t,
                                samples));
  r.checks.push_back(make_check("cube_sum_log", "|sum theta_i^3| >= 10 / (sqrt(n) log n)",
                                2.0 / std::sqrt(nn), c.cubes_log, samples));

  if (o.marginal_samples > 0) {
    const auto edges = marginal_edges(o.marginal_bins);
    double chi2 = 0.0;
    const auto total = static_cast<double>(o.marginal_samples);
    for (std::size_t b = 0; b < marginal_counts.size(); ++b) {
      const double lo = b == 0 ? -std::sqrt(nn) : edges[b - 1];
      const double hi = b == edges.size() ? std::sqrt(nn) : edges[b];
      const double expected = total * (marginal_cdf(n, hi) - marginal_cdf(n, lo));
      const double d = static_cast<double>(marginal_counts[b]) - expected;
      chi2 += d * d / expected;
    }
    r.marginal.bins = static_cast<int>(marginal_counts.size());
    r.marginal.samples = o.marginal_samples;
    r.marginal.chi2 = chi2;
    r.marginal.dof = r.marginal.bins - 1;
    r.marginal.p_value = boost::math::gamma_q(r.marginal.dof / 2.0, chi2 / 2.0);
    r.marginal.pass = r.marginal.p_value > 1e-3;
  }
  return r;
}

void validate(int n, long long samples) {
  if (n < 4) throw DomainError("concentration checks need n >= 4");
  if (samples < 1000) throw DomainError("concentration checks need at least 1000 samples");
}

}  // namespace

ConcentrationReport concentration_report(int n, long long samples, std::uint64_t seed,
                                         const ConcentrationOptions& opts) {
  validate(n, samples);
  const auto th = make_thresholds(n, opts);
  const long long blocks = (samples + kBlock - 1) / kBlock;
  std::vector<EventCounts> per_block(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
  for (long long b = 0; b < blocks; ++b)
    per_block[static_cast<std::size_t>(b)] =
        count_block(n, seed, b * kBlock, std::min(samples, (b + 1) * kBlock), th);
  EventCounts total;
  for (const auto& c : per_block) total.add(c);

  std::vector<long long> mc;
  if (opts.marginal_samples > 0) {
    const auto edges = marginal_edges(opts.marginal_bins);
    const long long mblocks = (opts.marginal_samples + kBlock - 1) / kBlock;
    std::vector<std::vector<long long>> parts(static_cast<std::size_t>(mblocks));
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < mblocks; ++b)
      parts[static_cast<std::size_t>(b)] = marginal_block(
          n, seed, b * kBlock, std::min(opts.marginal_samples, (b + 1) * kBlock), edges);
    mc.assign(edges.size() + 1, 0);
    for (const auto& p : parts)
      for (std::size_t i = 0; i < p.size(); ++i) mc[i] += p[i];
  }
  return assemble(n, samples, seed, opts, total, mc);
}

ConcentrationReport concentration_report_serial(int n, long long samples, std::uint64_t seed,
                                                const ConcentrationOptions& opts) {
  validate(n, samples);
  const auto th = make_thresholds(n, opts);
  const EventCounts total = count_block(n, seed, 0, samples, th);
  std::vector<long long> mc;
  if (opts.marginal_samples > 0)
    mc = marginal_block(n, seed, 0, opts.marginal_samples, marginal_edges(opts.marginal_bins));
  return assemble(n, samples, seed, opts, total, mc);
}

}  // namespace freeconv
