#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <vector>

#include "freeconv/complexfn.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

class WeightVector;

/// Anything whose Cauchy transform can be evaluated on C+.
class CauchyTransform {
 public:
  virtual ~CauchyTransform() = default;
  /// `warm` carries solver state between nearby points; evaluators that do
  /// not iterate ignore it.
  virtual cplx evaluate(cplx z, WarmStart* warm = nullptr) const = 0;
  /// Bound on |x - mean| over the support of the underlying law.
  virtual double support_radius() const = 0;
  virtual double mean() const { return 0.0; }
};

class MeasureTransform final : public CauchyTransform {
 public:
  explicit MeasureTransform(Measure mu);
  cplx evaluate(cplx z, WarmStart* warm = nullptr) const override;
  double support_radius() const override { return radius_; }
  double mean() const override { return mean_; }
  const Measure& measure() const noexcept { return mu_; }

 private:
  Measure mu_;
  double mean_;
  double radius_;
};

/// max |x - mean| over the support of mu.
double centered_radius(const Measure& mu);

/// Free additive convolution of a list of measures through subordination.
class ConvolutionTransform final : public CauchyTransform {
 public:
  explicit ConvolutionTransform(std::vector<Measure> measures, SolveOptions opts = {});
  /// mu_theta = D_{theta_1} mu boxplus ... boxplus D_{theta_n} mu.
  static std::unique_ptr<ConvolutionTransform> weighted(const Measure& mu,
                                                        const WeightVector& theta,
                                                        SolveOptions opts = {});

  cplx evaluate(cplx z, WarmStart* warm = nullptr) const override;
  double support_radius() const override;
  double mean() const override { return mean_; }

  const ConvolutionSystem& system() const noexcept { return system_; }
  SubordinationSolution solve(cplx z, WarmStart* warm = nullptr) const;

  long long solves() const noexcept { return solves_.load(); }
  long long iterations() const noexcept { return iterations_.load(); }

 private:
  ConvolutionSystem system_;
  SolveOptions opts_;
  double mean_ = 0.0;
  double radius_ = 0.0;
  mutable std::atomic<long long> solves_{0};
  mutable std::atomic<long long> iterations_{0};
};

/// Closed-form evaluator, e.g. the arcsine law or a test oracle.
class FunctionTransform final : public CauchyTransform {
 public:
  FunctionTransform(std::function<cplx(cplx)> g, double support_radius, double mean = 0.0);
  cplx evaluate(cplx z, WarmStart* warm = nullptr) const override;
  double support_radius() const override { return radius_; }
  double mean() const override { return mean_; }

 private:
  std::function<cplx(cplx)> g_;
  double radius_;
  double mean_;
};

}  // namespace freeconv
