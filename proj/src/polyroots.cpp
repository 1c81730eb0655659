#include "freeconv/polyroots.hpp"

#include <cmath>
#include <numbers>

namespace freeconv {

std::array<cplx, 2> quadratic_roots(cplx b, cplx c) {
  const cplx d = std::sqrt(b * b - 4.0 * c);
  // Pick the sign that avoids cancellation in b + d.
  const cplx s = std::real(std::conj(b) * d) >= 0.0 ? b + d : b - d;
  if (s == 0.0) return {cplx(0.0), cplx(0.0)};
  const cplx q = -0.5 * s;
  return {q, c / q};
}

namespace {

cplx eval(cplx a2, cplx a1, cplx a0, cplx w) { return ((w + a2) * w + a1) * w + a0; }
cplx deriv(cplx a2, cplx a1, cplx w) { return (3.0 * w + 2.0 * a2) * w + a1; }

cplx polish(cplx a2, cplx a1, cplx a0, cplx w) {
  for (int it = 0; it < 2; ++it) {
    const cplx p = eval(a2, a1, a0, w);
    const cplx dp = deriv(a2, a1, w);
    if (p == 0.0 || dp == 0.0) break;
    const cplx next = w - p / dp;
    if (std::abs(eval(a2, a1, a0, next)) >= std::abs(p)) break;
    w = next;
  }
  return w;
}

}  // namespace

std::array<cplx, 3> cubic_roots(cplx a2, cplx a1, cplx a0) {
  // Depressed cubic t^3 + p t + q with w = t - a2/3.
  const cplx shift = a2 / 3.0;
  const cplx p = a1 - a2 * shift;
  const cplx q = 2.0 * shift * shift * shift - shift * a1 + a0;
  const cplx disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
  const cplx c1 = -0.5 * q + disc;
  const cplx c2 = -0.5 * q - disc;
  const cplx c = std::abs(c1) >= std::abs(c2) ? c1 : c2;
  std::array<cplx, 3> t{};
  if (c == 0.0) {
    t = {cplx(0.0), cplx(0.0), cplx(0.0)};
  } else {
    const cplx u = std::pow(c, 1.0 / 3.0);
    const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    cplx uk = u;
    for (auto& tk : t) {
      tk = uk - p / (3.0 * uk);
      uk *= zeta;
    }
  }
  std::array<cplx, 3> w{};
  for (int k = 0; k < 3; ++k) w[k] = polish(a2, a1, a0, t[k] - shift);
  return w;
}

}  // namespace freeconv
