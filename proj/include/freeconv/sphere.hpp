#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace freeconv {

/// A point theta of the unit sphere S^{n-1}: sum theta_i^2 = 1 within 1e-12.
class WeightVector {
 public:
  /// Validates the norm; throws DomainError otherwise.
  explicit WeightVector(std::vector<double> theta);
  /// (1/sqrt(n), ..., 1/sqrt(n)).
  static WeightVector uniform(int n);
  /// Normalizes an arbitrary nonzero vector.
  static WeightVector normalized(std::vector<double> v);

  int n() const noexcept { return static_cast<int>(theta_.size()); }
  std::span<const double> values() const noexcept { return theta_; }
  double operator[](int i) const { return theta_[static_cast<std::size_t>(i)]; }

  double max_abs() const noexcept;
  double sum_abs_pow(int k) const noexcept;
  double sum_pow(int k) const noexcept;

 private:
  std::vector<double> theta_;
};

struct WeightStats {
  int n = 0;
  double max_abs = 0.0;
  std::vector<double> sum_abs_pow;  // entries for k = 3..9
  double sum_cubes = 0.0;
  double sum_abs_pow_k(int k) const { return sum_abs_pow.at(static_cast<std::size_t>(k - 3)); }
};

WeightStats stats(const WeightVector& theta);

/// Counter-based stream: every (seed, index) pair owns an independent,
/// reproducible sequence of 64-bit values.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next_u64();
  /// Uniform on (0, 1).
  double next_open01();
  /// Standard normal by the Marsaglia polar method.
  double next_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform sample on S^{n-1} drawn from stream (seed, index) by normalizing
/// a Gaussian vector. Bit-identical for identical arguments.
WeightVector sample(int n, std::uint64_t seed, std::uint64_t index = 0);

struct BoundCheck {
  std::string name;
  std::string event;
  double bound = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double ci99_low = 0.0;
  double ci99_high = 0.0;
  long long violations = 0;
  bool pass = false;
};

struct MarginalCheck {
  int bins = 0;
  long long samples = 0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  bool pass = false;
};

struct ConcentrationOptions {
  double a_max = 4.0;            // A in the max-coordinate bound
  double r_power = 1.0;          // r in the power-sum bound
  double t_cubes = 100.0;        // t in the first cube-sum bound
  long long marginal_samples = 0;  // 0 disables the chi-square check
  int marginal_bins = 40;
};

struct ConcentrationReport {
  int n = 0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::vector<BoundCheck> checks;
  MarginalCheck marginal;
  bool pass() const;
};

/// Monte Carlo violation frequencies of the sphere concentration events
/// against their stated probability bounds. Parallel over fixed-size sample
/// blocks, so the result does not depend on the thread count.
ConcentrationReport concentration_report(int n, long long samples, std::uint64_t seed,
                                         const ConcentrationOptions& opts = {});
/// Single-threaded reference; identical output.
ConcentrationReport concentration_report_serial(int n, long long samples, std::uint64_t seed,
                                                const ConcentrationOptions& opts = {});

/// Density of sqrt(n) theta_1 under the uniform law on S^{n-1}.
double marginal_density(int n, double x);

/// Power-sum constant B_k (33, 121, (sqrt k + 2)^k).
double power_sum_constant(int k);

}  // namespace freeconv
