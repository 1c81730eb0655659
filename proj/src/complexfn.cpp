#include "freeconv/complexfn.hpp"

#include <cmath>

#include "freeconv/error.hpp"

namespace freeconv {

UpperHalfPoint::UpperHalfPoint(double re, double im) : z_(re, im) {
  if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im))
    throw DomainError("point must lie in the open upper half-plane");
}

cplx sqrt_cut(cplx z) {
  const double u = z.real();
  const double v = z.imag();
  if (u >= -1e-14 && std::abs(v) <= 1e-14)
    throw BranchCutError("sqrt_cut: argument on the branch cut [0, inf)");
  const double sgn = v >= 0.0 ? 1.0 : -1.0;
  // Half-angle formulas, arranged so neither component suffers cancellation.
  const double t = std::sqrt(0.5 * (std::hypot(u, v) + std::abs(u)));
  if (u >= 0.0) return {sgn * t, std::abs(v) / (2.0 * t)};
  return {v / (2.0 * t), t};
}

cplx cauchy_semicircle(cplx z) {
  // 1/2 (z - s) = 2 / (z + s) with s^2 = z^2 - 4; the second form is stable for large |z|.
  const cplx s = sqrt_cut(z * z - 4.0);
  return 2.0 / (z + s);
}

cplx cauchy_arcsine(cplx z) { return 1.0 / sqrt_cut(z * z - 4.0); }

namespace {

struct GValue {
  cplx g;
  cplx dg;
};

GValue cauchy_with_derivative(const Measure& mu, cplx z) {
  if (mu.is_atomic()) {
    cplx g = 0.0;
    cplx dg = 0.0;
    for (const auto& a : mu.atoms()) {
      const cplx r = 1.0 / (z - a.x);
      g += a.w * r;
      dg -= a.w * r * r;
    }
    return {g, dg};
  }
  const double sd = std::sqrt(mu.semicircle_variance());
  const cplx w = z / sd;
  const cplx s = sqrt_cut(w * w - 4.0);
  const cplx g0 = 2.0 / (w + s);
  // G' = -G / s for the standard law.
  return {g0 / sd, -g0 / s / (sd * sd)};
}

}  // namespace

cplx cauchy(const Measure& mu, cplx z) {
  if (mu.is_atomic()) {
    cplx g = 0.0;
    for (const auto& a : mu.atoms()) g += a.w / (z - a.x);
    return g;
  }
  const double sd = std::sqrt(mu.semicircle_variance());
  return cauchy_semicircle(z / sd) / sd;
}

cplx cauchy(const Measure& mu, UpperHalfPoint z) { return cauchy(mu, z.value()); }

cplx f_transform(const Measure& mu, cplx z) {
  if (!mu.is_atomic()) {
    // 1/G = (w + s)/2 * sd with w = z/sd.
    const double sd = std::sqrt(mu.semicircle_variance());
    const cplx w = z / sd;
    return 0.5 * (w + sqrt_cut(w * w - 4.0)) * sd;
  }
  return 1.0 / cauchy(mu, z);
}

cplx f_transform(const Measure& mu, UpperHalfPoint z) { return f_transform(mu, z.value()); }

FValue f_with_derivative(const Measure& mu, cplx z) {
  const auto [g, dg] = cauchy_with_derivative(mu, z);
  const cplx f = 1.0 / g;
  return {f, -dg * f * f};
}

}  // namespace freeconv
