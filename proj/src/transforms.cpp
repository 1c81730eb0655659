#include "freeconv/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/sphere.hpp"

namespace freeconv {

double centered_radius(const Measure& mu) {
  if (!mu.is_atomic()) return mu.support_radius();
  const double m = mean(mu);
  const auto atoms = mu.atoms();
  return std::max(std::abs(atoms.front().x - m), std::abs(atoms.back().x - m));
}

MeasureTransform::MeasureTransform(Measure mu)
    : mu_(std::move(mu)), mean_(freeconv::mean(mu_)), radius_(centered_radius(mu_)) {}

cplx MeasureTransform::evaluate(cplx z, WarmStart*) const { return cauchy(mu_, z); }

ConvolutionTransform::ConvolutionTransform(std::vector<Measure> measures, SolveOptions opts)
    : system_(std::move(measures)), opts_(opts) {
  double total_radius = 0.0;
  double max_radius = 0.0;
  double var = 0.0;
  for (int g = 0; g < system_.groups(); ++g) {
    const auto& mu = system_.group_measure(g);
    const double m = system_.multiplicity(g);
    const double r = centered_radius(mu);
    mean_ += m * freeconv::mean(mu);
    var += m * variance(mu);
    total_radius += m * r;
    max_radius = std::max(max_radius, r);
  }
  // The trivial bound sum L_i is far too wide for many small summands; the
  // free sum concentrates within 2 sqrt(var) plus the largest summand.
  radius_ = std::min(total_radius, 2.0 * std::sqrt(var) + 2.0 * max_radius);
}

std::unique_ptr<ConvolutionTransform> ConvolutionTransform::weighted(const Measure& mu,
                                                                     const WeightVector& theta,
                                                                     SolveOptions opts) {
  return std::make_unique<ConvolutionTransform>(weighted_copies(mu, theta), opts);
}

SubordinationSolution ConvolutionTransform::solve(cplx z, WarmStart* warm) const {
  auto sol = system_.solve(z, opts_, warm);
  solves_.fetch_add(1, std::memory_order_relaxed);
  iterations_.fetch_add(sol.iterations, std::memory_order_relaxed);
  return sol;
}

cplx ConvolutionTransform::evaluate(cplx z, WarmStart* warm) const { return solve(z, warm).G; }

double ConvolutionTransform::support_radius() const { return radius_; }

FunctionTransform::FunctionTransform(std::function<cplx(cplx)> g, double support_radius,
                                     double mean)
    : g_(std::move(g)), radius_(support_radius), mean_(mean) {}

cplx FunctionTransform::evaluate(cplx z, WarmStart*) const { return g_(z); }

}  // namespace freeconv
