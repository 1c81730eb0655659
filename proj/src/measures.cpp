#include "freeconv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "freeconv/error.hpp"

namespace freeconv {

Measure Measure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("atomic measure needs at least one atom");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.x) || !std::isfinite(a.w))
      throw DomainError("atom position and weight must be finite");
    if (a.w <= 0.0) throw DomainError("atom weights must be strictly positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().x == a.x)
      merged.back().w += a.w;
    else
      merged.push_back(a);
  }
  double total = 0.0;
  for (const auto& a : merged) total += a.w;
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("atom weights sum to " + std::to_string(total) + ", expected 1");
  Measure m;
  m.kind_ = Kind::Atomic;
  m.atoms_ = std::move(merged);
  return m;
}

Measure Measure::dirac(double x) { return atomic({{x, 1.0}}); }

Measure Measure::semicircle(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw DomainError("semicircle variance must be positive");
  Measure m;
  m.kind_ = Kind::Semicircle;
  m.variance_ = variance;
  return m;
}

Measure Measure::bernoulli() { return atomic({{-1.0, 0.5}, {1.0, 0.5}}); }

Measure Measure::binomial(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial parameter must lie in (0, 1)");
  const double q = 1.0 - p;
  return atomic({{std::sqrt(q / p), p}, {-std::sqrt(p / q), q}});
}

double Measure::support_radius() const noexcept {
  if (kind_ == Kind::Semicircle) return 2.0 * std::sqrt(variance_);
  return std::max(std::abs(atoms_.front().x), std::abs(atoms_.back().x));
}

double catalan(int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * 2.0 * (2.0 * i + 1.0) / (i + 2.0);
  return std::round(c);
}

double moment(const Measure& mu, int k) {
  if (k < 1) throw DomainError("moment order must be >= 1");
  if (mu.is_atomic()) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.w * std::pow(a.x, k);
    return s;
  }
  if (k % 2 == 1) return 0.0;
  return std::pow(mu.semicircle_variance(), k / 2) * catalan(k / 2);
}

double abs_moment(const Measure& mu, int k) {
  if (k < 1) throw DomainError("moment order must be >= 1");
  if (mu.is_atomic()) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.w * std::pow(std::abs(a.x), k);
    return s;
  }
  // int |x|^k domega = 2^{k+1} B((k+1)/2, 3/2) / pi for the standard law.
  const double kk = k;
  const double log_beta = std::lgamma((kk + 1.0) / 2.0) + std::lgamma(1.5) -
                          std::lgamma(kk / 2.0 + 2.0);
  const double standard = std::exp((kk + 1.0) * std::log(2.0) + log_beta) / std::numbers::pi;
  return std::pow(mu.semicircle_variance(), kk / 2.0) * standard;
}

double mean(const Measure& mu) { return mu.is_atomic() ? moment(mu, 1) : 0.0; }

double variance(const Measure& mu) {
  if (!mu.is_atomic()) return mu.semicircle_variance();
  const double m = mean(mu);
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.w * (a.x - m) * (a.x - m);
  return s;
}

MomentSummary summarize(const Measure& mu, int max_order) {
  MomentSummary s;
  s.mean = mean(mu);
  s.variance = variance(mu);
  s.support_radius = mu.support_radius();
  for (int k = 1; k <= max_order; ++k) {
    s.moments.push_back(moment(mu, k));
    s.abs_moments.push_back(abs_moment(mu, k));
  }
  return s;
}

Measure scale(const Measure& mu, double c) {
  if (!std::isfinite(c)) throw DomainError("scale factor must be finite");
  if (!mu.is_atomic()) {
    if (c == 0.0) return Measure::dirac(0.0);
    return Measure::semicircle(c * c * mu.semicircle_variance());
  }
  std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
  for (auto& a : atoms) a.x *= c;
  return Measure::atomic(std::move(atoms));
}

Measure dilate(const Measure& mu, double c) {
  if (!(c > 0.0)) throw DomainError("dilation factor must be positive");
  return scale(mu, c);
}

Measure shift(const Measure& mu, double t) {
  if (t == 0.0) return mu;
  if (!mu.is_atomic()) throw DomainError("semicircle measures are centred; cannot shift");
  std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
  for (auto& a : atoms) a.x += t;
  return Measure::atomic(std::move(atoms));
}

Measure standardize(const Measure& mu) {
  const double v = variance(mu);
  if (!(v > 0.0)) throw DegenerateMeasureError("cannot standardize a measure with zero variance");
  if (!mu.is_atomic()) return Measure::semicircle(1.0);
  const double m = mean(mu);
  const double sigma = std::sqrt(v);
  std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
  for (auto& a : atoms) a.x = (a.x - m) / sigma;
  return Measure::atomic(std::move(atoms));
}

double semicircle_density(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double v = 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
                   std::asin(x / 2.0) / std::numbers::pi;
  return std::clamp(v, 0.0, 1.0);
}

double cdf(const Measure& mu, double x) {
  if (!mu.is_atomic()) return semicircle_cdf(x / std::sqrt(mu.semicircle_variance()));
  double s = 0.0;
  for (const auto& a : mu.atoms()) {
    if (a.x > x) break;
    s += a.w;
  }
  return std::min(s, 1.0);
}

double cdf_left(const Measure& mu, double x) {
  if (!mu.is_atomic()) return cdf(mu, x);
  double s = 0.0;
  for (const auto& a : mu.atoms()) {
    if (a.x >= x) break;
    s += a.w;
  }
  return std::min(s, 1.0);
}

}  // namespace freeconv
