#pragma once

#include <complex>

#include "freeconv/measures.hpp"

namespace freeconv {

using cplx = std::complex<double>;

/// A point of the open upper half-plane. Construction rejects Im <= 0.
class UpperHalfPoint {
 public:
  UpperHalfPoint(double re, double im);
  explicit UpperHalfPoint(cplx z) : UpperHalfPoint(z.real(), z.imag()) {}

  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  cplx value() const noexcept { return z_; }
  operator cplx() const noexcept { return z_; }

 private:
  cplx z_;
};

/// Square root with the cut on [0, inf): sqrt(r e^{i phi}) = sqrt(r) e^{i phi/2},
/// phi in (0, 2 pi), so the imaginary part of the result is always positive.
/// On the negative axis the result is i sqrt(|u|) (sgn(0) = +1).
/// Throws BranchCutError when z lies within 1e-14 of [0, inf).
cplx sqrt_cut(cplx z);

/// Cauchy transform G(z) = int 1/(z - t) mu(dt) for Im z > 0.
cplx cauchy(const Measure& mu, cplx z);
cplx cauchy(const Measure& mu, UpperHalfPoint z);

/// Reciprocal Cauchy transform F = 1/G.
cplx f_transform(const Measure& mu, cplx z);
cplx f_transform(const Measure& mu, UpperHalfPoint z);

struct FValue {
  cplx f;   // F(z)
  cplx df;  // F'(z)
};

/// F and its derivative in one pass.
FValue f_with_derivative(const Measure& mu, cplx z);

/// Cauchy transform of the standard semicircle law, 1/2 (z - sqrt_cut(z^2 - 4)).
cplx cauchy_semicircle(cplx z);

/// Cauchy transform of the arcsine law on [-2, 2], 1/sqrt_cut(z^2 - 4).
cplx cauchy_arcsine(cplx z);

}  // namespace freeconv
