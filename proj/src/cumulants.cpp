#include "freeconv/cumulants.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/error.hpp"
#include "freeconv/sphere.hpp"

namespace freeconv {

namespace {

// Fills powers[s][k] = [t^k] M(t)^s along anti-diagonals s + k = n, which
// only needs m_1..m_{n-1}. Drives both directions of the recursion.
class PowerTable {
 public:
  explicit PowerTable(int order)
      : n_(order), p_(static_cast<std::size_t>(order + 1),
                      std::vector<double>(static_cast<std::size_t>(order + 1), 0.0)) {
    for (auto& row : p_) row[0] = 1.0;
  }

  // Completes the anti-diagonal s + k = n (s >= 1, k >= 1) given m[0..n-1].
  void fill_diagonal(int n, const std::vector<double>& m) {
    for (int s = 1; s < n; ++s) {
      const int k = n - s;
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += m[j] * p_[s - 1][k - j];
      p_[s][k] = acc;
    }
  }

  // sum_{s=1}^{n-1} kappa_s [t^{n-s}] M^s
  double lower_terms(int n, const std::vector<double>& kappa) const {
    double acc = 0.0;
    for (int s = 1; s < n; ++s) acc += kappa[s] * p_[s][n - s];
    return acc;
  }

 private:
  int n_;
  std::vector<std::vector<double>> p_;
};

}  // namespace

CumulantSequence moments_to_cumulants(std::span<const double> moments) {
  const int order = static_cast<int>(moments.size());
  std::vector<double> m(static_cast<std::size_t>(order + 1), 0.0);
  m[0] = 1.0;
  std::copy(moments.begin(), moments.end(), m.begin() + 1);
  std::vector<double> kappa(static_cast<std::size_t>(order + 1), 0.0);
  PowerTable table(order);
  for (int n = 1; n <= order; ++n) {
    table.fill_diagonal(n, m);
    kappa[n] = m[n] - table.lower_terms(n, kappa);
  }
  CumulantSequence out;
  out.kappa.assign(kappa.begin() + 1, kappa.end());
  return out;
}

std::vector<double> cumulants_to_moments(const CumulantSequence& seq) {
  const int order = seq.order();
  std::vector<double> kappa(static_cast<std::size_t>(order + 1), 0.0);
  std::copy(seq.kappa.begin(), seq.kappa.end(), kappa.begin() + 1);
  std::vector<double> m(static_cast<std::size_t>(order + 1), 0.0);
  m[0] = 1.0;
  PowerTable table(order);
  for (int n = 1; n <= order; ++n) {
    table.fill_diagonal(n, m);
    m[n] = kappa[n] + table.lower_terms(n, kappa);
  }
  return {m.begin() + 1, m.end()};
}

CumulantSequence free_cumulants(const Measure& mu, int order) {
  if (order < 1) throw DomainError("cumulant order must be >= 1");
  CumulantSequence out;
  if (!mu.is_atomic()) {
    out.kappa.assign(static_cast<std::size_t>(order), 0.0);
    if (order >= 2) out.kappa[1] = mu.semicircle_variance();
  } else {
    std::vector<double> m;
    for (int k = 1; k <= order; ++k) m.push_back(moment(mu, k));
    out = moments_to_cumulants(m);
  }
  out.source_support_radius = mu.support_radius();
  return out;
}

double kargin_cumulant_bound(double support_radius, int m) {
  const double l = support_radius;
  return 2.0 * l / (m - 1.0) * std::pow(4.0 * l, m - 1);
}

std::vector<KarginBoundEntry> kargin_bound_check(const Measure& mu, int order) {
  const auto seq = free_cumulants(mu, order);
  const double l = mu.support_radius();
  std::vector<KarginBoundEntry> out;
  for (int m = 2; m <= order; ++m) {
    const double bound = kargin_cumulant_bound(l, m);
    const double k = seq[m];
    // Relative slack for rounding in the recursion.
    const bool pass = std::abs(k) <= bound * (1.0 + 1e-10) + 1e-14;
    out.push_back({m, k, bound, pass});
  }
  return out;
}

SeriesValue k_transform_series(const Measure& mu, cplx z, int order) {
  const double l = mu.support_radius();
  const double r = std::abs(z);
  if (r == 0.0 || (l > 0.0 && r >= 1.0 / (6.0 * l)))
    throw OutOfDiscError("K-transform series needs 0 < |z| < 1/(6L)");
  const auto seq = free_cumulants(mu, order);
  // Horner on sum_{m=1}^{N} kappa_m z^{m-1}.
  cplx acc = 0.0;
  for (int m = order; m >= 1; --m) acc = acc * z + seq[m];
  const double q = 4.0 * l * r;
  const double tail = l > 0.0 ? 2.0 * l / order * std::pow(q, order) / (1.0 - q) : 0.0;
  return {1.0 / z + acc, tail};
}

SeriesValue phi_theta(const Measure& mu, const WeightVector& theta, cplx z, int order) {
  const double l = mu.support_radius();
  const double r = std::abs(z);
  const double radius = l * theta.max_abs();
  if (r == 0.0 || (radius > 0.0 && r >= 1.0 / (6.0 * radius)))
    throw OutOfDiscError("phi_theta series needs 0 < |z| < 1/(6 L max|theta|)");
  const auto seq = free_cumulants(mu, order + 1);
  // kappa_m(mu_theta) = kappa_m(mu) sum_i theta_i^m
  cplx acc = 0.0;
  for (int m = order; m >= 1; --m) acc = acc * z + seq[m + 1] * theta.sum_pow(m + 1);
  acc *= z;
  double tail = 0.0;
  for (double t : theta.values()) {
    const double q = 4.0 * l * std::abs(t) * r;
    if (q > 0.0) tail += 2.0 * l * std::abs(t) / (order + 1.0) * std::pow(q, order + 1) / (1.0 - q);
  }
  return {1.0 / z + acc, tail};
}

double phi_theta_bound(const Measure& mu, const WeightVector& theta, double abs_z) {
  const double l = mu.support_radius();
  const double m3 = moment(mu, 3);
  return 128.0 * std::pow(l, 4) * std::pow(abs_z, 3) * theta.sum_pow(4) +
         std::abs(m3 * theta.sum_pow(3)) * abs_z * abs_z;
}

double r_theta(const Measure& mu, const WeightVector& theta) {
  const double l = mu.support_radius();
  const double m3 = moment(mu, 3);
  return 384.0 * std::pow(l, 4) * theta.sum_pow(4) + 3.0 * std::abs(m3 * theta.sum_pow(3));
}

}  // namespace freeconv
