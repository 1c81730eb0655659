#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freeconv/complexfn.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/sphere.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

enum class WeightMode { Uniform, Random };

std::string to_string(WeightMode m);
WeightMode parse_weight_mode(const std::string& s);

/// theta for row (n, rep): uniform, or sample(n, seed, rep).
WeightVector make_weights(int n, WeightMode mode, std::uint64_t seed, int rep);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int used = 0;
  int skipped = 0;  // rows with nonpositive values
};

/// Least squares on (log n, log d), optionally weighted.
/// Needs at least three usable rows; throws DomainError otherwise.
SlopeFit fit_loglog_slope(std::span<const double> n, std::span<const double> d,
                          std::span<const double> weights = {});

struct InversionOptions {
  double eta = kDefaultEta;
  int points = kDefaultGridPoints;
  double margin = 1.0;  // added to the support radius on each side
};

struct RateOptions {
  std::vector<int> n_schedule;
  WeightMode mode = WeightMode::Uniform;
  std::uint64_t seed = 1;
  int reps = 1;
  bool delta = true;
  bool levy = true;
  bool delta_eps = true;
  bool delta_tilde = false;
  double eps = 0.5;        // Delta_eps window parameter
  double tilde_a = 0.05;   // Delta-tilde strip height
  double tilde_eps = 0.5;  // Delta-tilde window parameter
  StripOptions strip;
  InversionOptions inversion;
  SolveOptions solver;
};

struct RateRow {
  int n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  WeightMode mode = WeightMode::Uniform;
  double delta = 0.0;
  double delta_err = 0.0;
  double delta_eps = 0.0;
  double delta_eps_err = 0.0;
  double delta_tilde = 0.0;
  double levy = 0.0;
  double tail_mass = 0.0;
  long long solves = 0;
  long long iterations = 0;
  double slope_running = 0.0;  // fit of delta over rows so far; NaN with < 3 rows
  bool failed = false;
  std::string failure;
};

struct RateReport {
  std::vector<RateRow> rows;  // sorted by (n, rep)
  std::optional<SlopeFit> delta_fit;
  std::optional<SlopeFit> delta_eps_fit;
  std::optional<SlopeFit> delta_tilde_fit;
  std::optional<SlopeFit> levy_fit;
};

/// Distances of mu_theta to the semicircle law along an n schedule. The
/// recovered CDF is compared with the semicircle CDF smoothed at the same
/// height eta. Unselected metrics are NaN.
RateReport rate_experiment(const Measure& mu, const RateOptions& opts);

struct NonIdReport {
  double b_n = 0.0;  // (sum sigma_i^2)^{1/2}
  double l_n = 0.0;  // sum T_i^3 / B_n^3
  double delta = 0.0;
  double delta_err = 0.0;
  double ratio = 0.0;  // delta / l_n
};

/// Normalizes by 1/B_n, convolves, and measures Delta to the semicircle law.
NonIdReport nonid_experiment(std::span<const Measure> measures, const InversionOptions& inv = {},
                             const SolveOptions& solver = {});

struct SupportOptions {
  double threshold = 1e-5;
  double eta = 1e-4;
  int points = 4001;
  double margin = 1.0;
  SolveOptions solver;
};

struct SupportReport {
  int n = 0;
  double max_abs_theta = 0.0;
  double sum_abs_cubes = 0.0;
  double sum_cubes = 0.0;
  double sum_fourth = 0.0;
  double L = 0.0;
  double m3 = 0.0;
  double r_theta = 0.0;
  double bound_kargin = 0.0;  // 5 L^3 sum |theta_i|^3
  double bound_paper = 0.0;   // 2 r_theta
  double threshold = 0.0;
  double tail_allowance = 0.0;
  double eta = 0.0;
  double detected_lo = 0.0;
  double detected_hi = 0.0;
  bool preconditions_met = false;
  bool inside_kargin = false;
  bool inside_paper = false;
  double margin_kargin = 0.0;  // distance from the detected edges to the Kargin bound
  double margin_paper = 0.0;
};

/// Edge detection on the Richardson-extrapolated density at height eta.
SupportReport support_experiment(const Measure& mu, const WeightVector& theta,
                                 const SupportOptions& opts = {});

struct FunctionalEqTerms {
  cplx z;
  bool ok = false;
  std::string failure;
  std::vector<cplx> Z;  // sorted by |theta_i| ascending
  cplx I1, I2, I3, I4, I5;
  cplx r;
  cplx M1, M2, M3;
  cplx q;
  cplx r2;
  std::array<cplx, 3> omega{};      // omega_1 (smallest modulus), omega_2, omega_3
  std::array<cplx, 3> cubic{};      // roots from the general cubic solver
  std::array<cplx, 2> omega_tilde{};
  double residual_P = 0.0;
  double residual_Q = 0.0;
  double vieta_sum = 0.0;      // |omega_1 + omega_2 + omega_3 - z|
  double vieta_product = 0.0;  // |omega_1 omega_2 omega_3 - r|
  double formula_gap = 0.0;    // closed-form {omega_2, omega_3} vs cubic solver
  double dist_omega3 = 0.0;    // |Z_1 - omega_3|
  double dist_omega_tilde2 = 0.0;
  std::string matched_root;        // nearest root of P
  std::string matched_root_Q;      // nearest root of Q
  bool in_region = false;          // |Re z| <= 2 - eps_hat, a_hat <= Im z <= 3
  bool on_unit_line = false;       // Im z = 1
};

struct ResidualOptions {
  double eps_hat = 0.3;
  double a_hat = 0.05;
  SolveOptions solver;
};

/// Cubic and quadratic functional equations for Z_1 assembled from a
/// solved subordination system. Needs a standardized mu.
std::vector<FunctionalEqTerms> functional_residuals(const Measure& mu, const WeightVector& theta,
                                                    std::span<const cplx> z_grid,
                                                    const ResidualOptions& opts = {});

}  // namespace freeconv
