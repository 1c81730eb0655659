#pragma once

#include <span>
#include <vector>

#include "freeconv/complexfn.hpp"
#include "freeconv/measures.hpp"

namespace freeconv {

class WeightVector;

struct SolveOptions {
  double tol = 1e-12;
  int max_iters = 10000;
  double damping = 1.0;  // initial alpha of the damped fixed-point map
  bool newton = true;    // false: damped fixed point only
};

struct SubordinationSolution {
  cplx z;
  std::vector<cplx> Z;  // one per input measure, in input order
  cplx common_F;
  cplx G;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Subordination values of the previous point on a grid line. An empty
/// state means a cold start.
struct WarmStart {
  std::vector<cplx> Z;  // per distinct measure
  void reset() { Z.clear(); }
};

/// The measures of a free convolution with identical entries merged.
class ConvolutionSystem {
 public:
  explicit ConvolutionSystem(std::vector<Measure> measures);

  int size() const noexcept { return n_; }
  int groups() const noexcept { return static_cast<int>(distinct_.size()); }
  const Measure& group_measure(int g) const { return distinct_[static_cast<std::size_t>(g)]; }
  int multiplicity(int g) const { return mult_[static_cast<std::size_t>(g)]; }
  int group_of(int i) const { return group_of_[static_cast<std::size_t>(i)]; }
  double support_radius() const noexcept { return radius_; }

  /// Solves Z_i = z + sum_{j != i} (F_j(Z_j) - Z_j). Throws IterationFailure.
  SubordinationSolution solve(cplx z, const SolveOptions& opts = {},
                              WarmStart* warm = nullptr) const;
  /// Same, but returns an unconverged solution instead of throwing.
  SubordinationSolution try_solve(cplx z, const SolveOptions& opts = {},
                                  WarmStart* warm = nullptr) const;
  cplx g(cplx z, const SolveOptions& opts = {}, WarmStart* warm = nullptr) const;

  /// max(max_{i,j} |F_i(Z_i) - F_j(Z_j)|, |sum Z_i - z - (n-1) F_1(Z_1)|) for
  /// per-group values Z_g; the pairwise spread is bounded by 2 max_g |F_g - F_1|.
  double residual(cplx z, std::span<const cplx> zg) const;

 private:
  std::vector<Measure> distinct_;
  std::vector<int> mult_;
  std::vector<int> group_of_;
  int n_ = 0;
  double radius_ = 0.0;
};

SubordinationSolution solve(std::span<const Measure> measures, UpperHalfPoint z,
                            const SolveOptions& opts = {});
cplx g_free(std::span<const Measure> measures, UpperHalfPoint z, const SolveOptions& opts = {});

/// The dilated copies D_{theta_i} mu (theta_i may be negative).
std::vector<Measure> weighted_copies(const Measure& mu, const WeightVector& theta);
cplx weighted_sum_g(const Measure& mu, const WeightVector& theta, UpperHalfPoint z,
                    const SolveOptions& opts = {});

}  // namespace freeconv
