#pragma once

#include <array>

#include "freeconv/complexfn.hpp"

namespace freeconv {

/// Roots of w^2 + b w + c, computed without cancellation.
std::array<cplx, 2> quadratic_roots(cplx b, cplx c);

/// Roots of w^3 + a2 w^2 + a1 w + a0 by Cardano's formula with the larger
/// cube-root branch, each refined by a Newton step when that lowers |p(w)|.
std::array<cplx, 3> cubic_roots(cplx a2, cplx a1, cplx a0);

}  // namespace freeconv
