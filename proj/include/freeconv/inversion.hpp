#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "freeconv/complexfn.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

inline constexpr double kDefaultEta = 1e-3;
inline constexpr int kDefaultGridPoints = 4001;

/// Density and distribution function of G's law smoothed by the Cauchy
/// kernel of width eta, sampled on a uniform grid.
struct GriddedDistribution {
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> cdf;
  double eta = 0.0;
  double tail_mass = 0.0;  // 1 - trapezoid integral of the density
  double mean = 0.0;       // centre of the 1/(z - mean) asymptote used for the tails

  double spacing() const { return (x_max - x_min) / static_cast<double>(grid.size() - 1); }
  double max_density() const;
  /// Linear interpolation inside the window, Cauchy-tail asymptote outside.
  double cdf_at(double x) const;
};

struct RecoverOptions {
  /// Two-height extrapolation 2 rho(eta/2) - rho(eta), removing the O(eta) blur.
  bool richardson = false;
};

/// Stieltjes-Perron inversion density(x) = -Im G(x + i eta) / pi on a uniform
/// grid. Parallel over fixed 64-point chunks, each warm-started along the
/// line, so the output does not depend on the thread count.
/// Throws InversionError on a density dip below -1e-12.
GriddedDistribution recover(const CauchyTransform& g, double x_min, double x_max, int points,
                            double eta, const RecoverOptions& opts = {});
/// Single-threaded reference; bit-identical to recover.
GriddedDistribution recover_serial(const CauchyTransform& g, double x_min, double x_max,
                                   int points, double eta, const RecoverOptions& opts = {});

/// A distribution function: recovered on a grid, or given in closed form.
class CdfSource {
 public:
  static CdfSource gridded(GriddedDistribution dist);
  /// Exact law of a measure (step function for atomic measures).
  static CdfSource of_measure(const Measure& mu);
  /// Standard semicircle law on [-2, 2].
  static CdfSource semicircle();
  /// Standard semicircle law smoothed by the Cauchy kernel of width eta.
  static CdfSource smoothed_semicircle(double eta);
  /// Arcsine law on [-2, 2], F(x) = 1/2 + arcsin(x/2)/pi.
  static CdfSource arcsine();

  double cdf(double x) const { return cdf_(x); }
  double cdf_left(double x) const { return cdf_left_(x); }
  /// Points where the CDF is worth evaluating: grid nodes or jumps.
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& jumps() const noexcept { return jumps_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool is_gridded() const noexcept { return gridded_; }
  /// grid spacing * max density + tail mass + eta; 0 for closed forms.
  double error_estimate() const noexcept { return error_; }

 private:
  std::function<double(double)> cdf_;
  std::function<double(double)> cdf_left_;
  std::vector<double> nodes_;
  std::vector<double> jumps_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  bool gridded_ = false;
  double error_ = 0.0;
};

struct DistanceValue {
  double value = 0.0;
  double error = 0.0;  // grid + eta error estimate
};

/// sup_x |F_A(x) - F_B(x)|.
DistanceValue kolmogorov(const CdfSource& a, const CdfSource& b);
/// inf{s > 0 : F_A(x - s) - s <= F_B(x) <= F_A(x + s) + s for all x}, by bisection.
DistanceValue levy(const CdfSource& a, const CdfSource& b);
/// sup over x in [-2+eps, 2-eps] of the difference of the increments
/// F(x) - F(-2+eps).
DistanceValue delta_eps(const CdfSource& a, const CdfSource& b, double eps);

struct StripOptions {
  int u_points = 801;
  double quad_tol = 1e-9;
};

/// sup over u in [-2+eps/2, 2-eps/2] of int_a^1 |G_A(u+iv) - G_B(u+iv)| dv,
/// plus a + eps^{3/2}.
double delta_tilde(const CauchyTransform& ga, const CauchyTransform& gb, double a, double eps,
                   const StripOptions& opts = {});
/// The supremum term alone.
double strip_sup(const CauchyTransform& ga, const CauchyTransform& gb, double a, double eps,
                 const StripOptions& opts = {});

struct BaiIntegrals {
  double line_integral = 0.0;  // int |G_A(u+i) - G_B(u+i)| du over R
  double line_error = 0.0;     // quadrature tolerance plus tail estimate
  double strip_sup = 0.0;
  double strip_error = 0.0;
};
BaiIntegrals bai_integrals(const CauchyTransform& ga, const CauchyTransform& gb, double a,
                           double eps, const StripOptions& opts = {});

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Closed-form distribution function of the standard semicircle law smoothed
/// by the Cauchy kernel of width eta: 1 - Im L(x + i eta)/pi with L' = G.
double smoothed_semicircle_cdf(double x, double eta);

}  // namespace freeconv
