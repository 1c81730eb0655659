#pragma once

#include <span>
#include <vector>

#include "freeconv/complexfn.hpp"
#include "freeconv/measures.hpp"

namespace freeconv {

class WeightVector;

inline constexpr int kDefaultSeriesOrder = 32;

struct CumulantSequence {
  std::vector<double> kappa;  // kappa[m-1] = kappa_m
  double source_support_radius = 0.0;

  int order() const noexcept { return static_cast<int>(kappa.size()); }
  double operator[](int m) const { return kappa.at(m - 1); }
};

/// Free cumulants from moments m_1..m_N via the recursion
///   m_n = sum_{s=1}^{n} kappa_s [t^{n-s}] M(t)^s,   M(t) = 1 + sum_j m_j t^j.
CumulantSequence moments_to_cumulants(std::span<const double> moments);
/// Inverse of moments_to_cumulants.
std::vector<double> cumulants_to_moments(const CumulantSequence& kappa);

/// kappa_1..kappa_N of mu (exact for semicircle measures).
CumulantSequence free_cumulants(const Measure& mu, int order);

struct SeriesValue {
  cplx value;
  double tail_bound;  // bound on the omitted terms from the cumulant bound
};

/// Truncated K-transform 1/z + sum_{m=1}^N kappa_m z^{m-1}.
/// Requires 0 < |z| < 1/(6L); throws OutOfDiscError otherwise.
SeriesValue k_transform_series(const Measure& mu, cplx z, int order = kDefaultSeriesOrder);

/// |kappa_m| <= (2L/(m-1)) (4L)^{m-1}, m >= 2.
struct KarginBoundEntry {
  int m;
  double kappa;
  double bound;
  bool pass;
};
std::vector<KarginBoundEntry> kargin_bound_check(const Measure& mu, int order);
double kargin_cumulant_bound(double support_radius, int m);

/// phi_theta(z) = sum_i K_i(z) - (n-1)/z = 1/z + sum_{m>=1} kappa_{m+1}(mu_theta) z^m,
/// truncated after `order` terms. Requires 0 < |z| < 1/(6 L max|theta_i|).
SeriesValue phi_theta(const Measure& mu, const WeightVector& theta, cplx z,
                      int order = kDefaultSeriesOrder);

/// Right-hand side 128 L^4 |z|^3 sum theta^4 + |m3 sum theta^3| |z|^2.
double phi_theta_bound(const Measure& mu, const WeightVector& theta, double abs_z);

/// r_theta = 384 L^4 sum theta^4 + 3 |m3 sum theta^3|.
double r_theta(const Measure& mu, const WeightVector& theta);

}  // namespace freeconv
