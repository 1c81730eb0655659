#include "freeconv/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeconv/error.hpp"
#include "freeconv/sphere.hpp"

namespace freeconv {

namespace {

constexpr int kNewtonIters = 60;
constexpr int kLineSearchSteps = 40;
constexpr double kContinuationFactor = 4.0;
constexpr double kMinFactor = 1.0 + 1e-3;
constexpr int kMaxStages = 400;

struct State {
  std::vector<cplx> f;
  std::vector<cplx> df;
  std::vector<cplx> r;
  cplx s = 0.0;
  double merit = 0.0;  // max_g |R_g|
  bool ok = false;
};

double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

}  // namespace

ConvolutionSystem::ConvolutionSystem(std::vector<Measure> measures) {
  if (measures.empty()) throw DomainError("free convolution needs at least one measure");
  n_ = static_cast<int>(measures.size());
  for (auto& mu : measures) {
    const auto it = std::find(distinct_.begin(), distinct_.end(), mu);
    if (it == distinct_.end()) {
      group_of_.push_back(static_cast<int>(distinct_.size()));
      distinct_.push_back(std::move(mu));
      mult_.push_back(1);
    } else {
      const auto g = static_cast<std::size_t>(it - distinct_.begin());
      group_of_.push_back(static_cast<int>(g));
      ++mult_[g];
    }
  }
  for (std::size_t g = 0; g < distinct_.size(); ++g)
    radius_ += mult_[g] * distinct_[g].support_radius();
}

double ConvolutionSystem::residual(cplx z, std::span<const cplx> zg) const {
  const int k = groups();
  const int first = group_of_[0];
  const cplx f1 = f_transform(distinct_[static_cast<std::size_t>(first)], zg[first]);
  double spread = 0.0;
  cplx sum = 0.0;
  for (int g = 0; g < k; ++g) {
    const cplx fg = g == first ? f1 : f_transform(distinct_[static_cast<std::size_t>(g)], zg[g]);
    spread = std::max(spread, std::abs(fg - f1));
    sum += static_cast<double>(mult_[static_cast<std::size_t>(g)]) * zg[g];
  }
  if (mult_[static_cast<std::size_t>(first)] < n_) spread *= 2.0;
  return std::max(spread, std::abs(sum - z - static_cast<double>(n_ - 1) * f1));
}

namespace {

// R_g = F_g(Z_g) - z - S with S = sum_h m_h (F_h(Z_h) - Z_h); zero exactly at
// the subordination fixed point.
State evaluate(const ConvolutionSystem& sys, cplx z, const std::vector<cplx>& zg, bool with_df) {
  const int k = sys.groups();
  State st;
  st.f.resize(static_cast<std::size_t>(k));
  st.r.resize(static_cast<std::size_t>(k));
  if (with_df) st.df.resize(static_cast<std::size_t>(k));
  try {
    for (int g = 0; g < k; ++g) {
      const auto gi = static_cast<std::size_t>(g);
      if (with_df) {
        const auto v = f_with_derivative(sys.group_measure(g), zg[gi]);
        st.f[gi] = v.f;
        st.df[gi] = v.df;
      } else {
        st.f[gi] = f_transform(sys.group_measure(g), zg[gi]);
      }
      st.s += static_cast<double>(sys.multiplicity(g)) * (st.f[gi] - zg[gi]);
    }
  } catch (const BranchCutError&) {
    return st;
  }
  double merit = 0.0;
  for (int g = 0; g < k; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    st.r[gi] = st.f[gi] - z - st.s;
    merit = std::max(merit, std::abs(st.r[gi]));
  }
  st.merit = merit;
  st.ok = std::isfinite(merit);
  return st;
}

bool admissible(cplx z, const std::vector<cplx>& zg) {
  const double floor = 1e-3 * z.imag();
  return std::all_of(zg.begin(), zg.end(), [&](cplx w) {
    return w.imag() > floor && std::isfinite(w.real()) && std::isfinite(w.imag());
  });
}

bool accept(const ConvolutionSystem& sys, cplx z, const std::vector<cplx>& zg, double tol,
            double* res) {
  if (!admissible(z, zg)) return false;
  double r = 0.0;
  try {
    r = sys.residual(z, zg);
  } catch (const BranchCutError&) {
    return false;
  }
  *res = r;
  if (!(r <= tol * scale_of(z))) return false;
  const double slack = 1e-10 * scale_of(z);
  return std::all_of(zg.begin(), zg.end(), [&](cplx w) { return w.imag() >= z.imag() - slack; });
}

double step_norm(const std::vector<cplx>& zg, const std::vector<cplx>& delta) {
  double n = 0.0;
  for (std::size_t g = 0; g < zg.size(); ++g)
    n = std::max(n, std::abs(delta[g]) / std::max(1.0, std::abs(zg[g])));
  return n;
}

// Solves J delta = -R for the rank-one Jacobian J = diag(F_g') - 1 e^T,
// e_h = m_h (F_h' - 1), by Sherman-Morrison.
bool f_correction(const ConvolutionSystem& sys, const std::vector<cplx>& df,
                  const std::vector<cplx>& r, std::vector<cplx>& delta) {
  const std::size_t k = df.size();
  std::vector<cplx> y(k), u(k);
  cplx ey = 0.0;
  cplx eu = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    if (df[g] == 0.0) return false;
    const cplx e = static_cast<double>(sys.multiplicity(static_cast<int>(g))) * (df[g] - 1.0);
    y[g] = -r[g] / df[g];
    u[g] = 1.0 / df[g];
    ey += e * y[g];
    eu += e * u[g];
  }
  const cplx denom = 1.0 - eu;
  if (std::abs(denom) < 1e-300) return false;
  const cplx c = ey / denom;
  delta.resize(k);
  for (std::size_t g = 0; g < k; ++g) delta[g] = y[g] + u[g] * c;
  return true;
}

// Damped Newton on R. A step is taken when it lowers max |R_g| or passes the
// natural monotonicity test |J_k^{-1} R(trial)| <= (1 - lambda/4) |J_k^{-1} R_k|.
bool newton(const ConvolutionSystem& sys, cplx z, std::vector<cplx>& zg, double tol,
            int* iterations, double* res) {
  if (!admissible(z, zg)) return false;
  State st = evaluate(sys, z, zg, true);
  std::vector<cplx> delta, simplified;
  for (int it = 0; it < kNewtonIters; ++it) {
    if (!st.ok) return false;
    if (accept(sys, z, zg, tol, res)) return true;
    ++*iterations;
    if (!f_correction(sys, st.df, st.r, delta)) return false;
    const double base = step_norm(zg, delta);

    double lambda = 1.0;
    bool moved = false;
    for (int ls = 0; ls < kLineSearchSteps; ++ls, lambda *= 0.5) {
      std::vector<cplx> trial(zg);
      for (std::size_t g = 0; g < trial.size(); ++g) trial[g] += lambda * delta[g];
      if (!admissible(z, trial)) continue;
      State ts = evaluate(sys, z, trial, true);
      if (!ts.ok) continue;
      bool take = ts.merit < st.merit;
      if (!take && f_correction(sys, st.df, ts.r, simplified))
        take = step_norm(trial, simplified) <= (1.0 - 0.25 * lambda) * base;
      if (take) {
        zg = std::move(trial);
        st = std::move(ts);
        moved = true;
        break;
      }
    }
    if (!moved) return accept(sys, z, zg, tol, res);
  }
  return accept(sys, z, zg, tol, res);
}

// Newton in the variables (Z_g, gamma), gamma the common Cauchy transform:
//   E_g = G_g(Z_g) - gamma,   H = gamma (sum_g m_g Z_g - z) - (n - 1).
// Unlike R, these stay well conditioned when some Z_g approaches a pole of F_g.
struct GState {
  std::vector<cplx> e;
  std::vector<cplx> dg;
  cplx h = 0.0;
  double merit = 0.0;
  bool ok = false;
};

GState evaluate_g(const ConvolutionSystem& sys, cplx z, const std::vector<cplx>& zg, cplx gamma) {
  const int k = sys.groups();
  GState st;
  st.e.resize(static_cast<std::size_t>(k));
  st.dg.resize(static_cast<std::size_t>(k));
  cplx sum = 0.0;
  for (int g = 0; g < k; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    const auto v = f_with_derivative(sys.group_measure(g), zg[gi]);
    const cplx gv = 1.0 / v.f;
    st.e[gi] = gv - gamma;
    st.dg[gi] = -v.df * gv * gv;
    sum += static_cast<double>(sys.multiplicity(g)) * zg[gi];
  }
  st.h = gamma * (sum - z) - static_cast<double>(sys.size() - 1);
  double merit = std::abs(st.h);
  for (const auto& e : st.e) merit = std::max(merit, std::abs(e / gamma));
  st.merit = merit;
  st.ok = std::isfinite(merit) && gamma != 0.0;
  return st;
}

// Eliminates delta Z_g = (delta gamma - E_g) / G_g' from the bordered system.
bool g_correction(const ConvolutionSystem& sys, cplx z, const std::vector<cplx>& zg, cplx gamma,
                  const std::vector<cplx>& dg, const GState& st, std::vector<cplx>& delta,
                  cplx* dgamma) {
  cplx sum = 0.0;
  cplx a = 0.0;
  cplx b = 0.0;
  for (std::size_t g = 0; g < zg.size(); ++g) {
    if (dg[g] == 0.0) return false;
    const double m = sys.multiplicity(static_cast<int>(g));
    sum += m * zg[g];
    a += m * st.e[g] / dg[g];
    b += m / dg[g];
  }
  const cplx denom = gamma * b + (sum - z);
  if (std::abs(denom) < 1e-300) return false;
  *dgamma = (-st.h + gamma * a) / denom;
  delta.resize(zg.size());
  for (std::size_t g = 0; g < zg.size(); ++g) delta[g] = (*dgamma - st.e[g]) / dg[g];
  return true;
}

bool newton_g(const ConvolutionSystem& sys, cplx z, std::vector<cplx>& zg, double tol,
              int* iterations, double* res) {
  if (!admissible(z, zg)) return false;
  const auto first = static_cast<std::size_t>(sys.group_of(0));
  cplx gamma;
  try {
    gamma = 1.0 / f_transform(sys.group_measure(sys.group_of(0)), zg[first]);
  } catch (const BranchCutError&) {
    return false;
  }
  GState st = evaluate_g(sys, z, zg, gamma);
  std::vector<cplx> delta, simplified;
  for (int it = 0; it < kNewtonIters; ++it) {
    if (!st.ok) return false;
    if (accept(sys, z, zg, tol, res)) return true;
    ++*iterations;
    cplx dgamma;
    if (!g_correction(sys, z, zg, gamma, st.dg, st, delta, &dgamma)) return false;
    const double base = std::max(step_norm(zg, delta), std::abs(dgamma / gamma));

    double lambda = 1.0;
    bool moved = false;
    for (int ls = 0; ls < kLineSearchSteps; ++ls, lambda *= 0.5) {
      std::vector<cplx> trial(zg);
      for (std::size_t g = 0; g < trial.size(); ++g) trial[g] += lambda * delta[g];
      if (!admissible(z, trial)) continue;
      const cplx tg = gamma + lambda * dgamma;
      GState ts = evaluate_g(sys, z, trial, tg);
      if (!ts.ok) continue;
      bool take = ts.merit < st.merit;
      cplx sg;
      if (!take && g_correction(sys, z, trial, tg, st.dg, ts, simplified, &sg))
        take = std::max(step_norm(trial, simplified), std::abs(sg / tg)) <= (1.0 - 0.25 * lambda) * base;
      if (take) {
        zg = std::move(trial);
        gamma = tg;
        st = std::move(ts);
        moved = true;
        break;
      }
    }
    if (!moved) return accept(sys, z, zg, tol, res);
  }
  return accept(sys, z, zg, tol, res);
}

// Damped simultaneous map Z_g <- (1 - a) Z_g + a (z + S - (F_g(Z_g) - Z_g)).
bool fixed_point(const ConvolutionSystem& sys, cplx z, std::vector<cplx>& zg,
                 const SolveOptions& opts, int* iterations, double* res) {
  double alpha = opts.damping;
  double prev = std::numeric_limits<double>::infinity();
  int shrunk = 0;
  for (int it = 0; it < opts.max_iters; ++it) {
    const State st = evaluate(sys, z, zg, false);
    if (!st.ok) return false;
    double r = 0.0;
    try {
      r = sys.residual(z, zg);
    } catch (const BranchCutError&) {
      return false;
    }
    *res = r;
    if (r <= opts.tol * scale_of(z)) return true;
    if (r > prev) alpha = std::max(alpha * 0.5, 1.0 / 16.0);
    if (alpha < 1.0 && ++shrunk >= 50) {
      alpha = 1.0;
      shrunk = 0;
    }
    prev = r;
    ++*iterations;
    for (std::size_t g = 0; g < zg.size(); ++g) {
      const cplx target = z + st.s - (st.f[g] - zg[g]);
      zg[g] = (1.0 - alpha) * zg[g] + alpha * target;
    }
  }
  return false;
}

// Newton along z_k = Re z + i y_k with y_k decreasing geometrically from a
// height where the initial guess Z = z is already accurate. A failed stage is
// retried from the last solved height with a smaller ratio.
bool continuation(const ConvolutionSystem& sys, cplx z, std::vector<cplx>& zg, double tol,
                  int* iterations, double* res) {
  const double top = std::max(z.imag(), 4.0 * (1.0 + sys.support_radius()));
  zg.assign(static_cast<std::size_t>(sys.groups()), cplx(z.real(), top));
  if (!newton(sys, cplx(z.real(), top), zg, top == z.imag() ? tol : std::max(tol, 1e-8), iterations, res))
    return false;
  double y = top;
  double factor = kContinuationFactor;
  for (int stage = 0; stage < kMaxStages && y > z.imag(); ++stage) {
    const double next = std::max(z.imag(), y / factor);
    const double stage_tol = next == z.imag() ? tol : std::max(tol, 1e-8);
    const cplx zk(z.real(), next);
    std::vector<cplx> trial(zg);
    bool ok = newton(sys, zk, trial, stage_tol, iterations, res);
    if (!ok) {
      trial = zg;
      ok = newton_g(sys, zk, trial, stage_tol, iterations, res);
    }
    if (ok) {
      zg = std::move(trial);
      y = next;
      factor = std::min(kContinuationFactor, factor * factor);
    } else {
      factor = std::sqrt(factor);
      if (factor < kMinFactor) return false;
    }
  }
  return y == z.imag();
}

}  // namespace

SubordinationSolution ConvolutionSystem::try_solve(cplx z, const SolveOptions& opts,
                                                   WarmStart* warm) const {
  if (!(z.imag() > 0.0)) throw DomainError("subordination needs Im z > 0");
  if (!(opts.tol > 0.0) || opts.max_iters < 1 || !(opts.damping > 0.0 && opts.damping <= 1.0))
    throw DomainError("invalid solver options");
  SubordinationSolution sol;
  sol.z = z;
  std::vector<cplx> zg;
  int iters = 0;
  double res = std::numeric_limits<double>::infinity();
  bool ok = false;

  if (opts.newton) {
    if (warm != nullptr && warm->Z.size() == static_cast<std::size_t>(groups())) {
      zg = warm->Z;
      ok = newton(*this, z, zg, opts.tol, &iters, &res);
    }
    if (!ok) ok = continuation(*this, z, zg, opts.tol, &iters, &res);
  }
  if (!ok) {
    zg.assign(static_cast<std::size_t>(groups()), z);
    ok = fixed_point(*this, z, zg, opts, &iters, &res);
  }

  sol.converged = ok;
  sol.iterations = iters;
  sol.residual = res;
  sol.Z.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) sol.Z[static_cast<std::size_t>(i)] = zg[static_cast<std::size_t>(group_of_[i])];
  sol.common_F = f_transform(distinct_[static_cast<std::size_t>(group_of_[0])], sol.Z[0]);
  sol.G = 1.0 / sol.common_F;
  if (warm != nullptr) {
    if (ok)
      warm->Z = std::move(zg);
    else
      warm->reset();
  }
  return sol;
}

SubordinationSolution ConvolutionSystem::solve(cplx z, const SolveOptions& opts,
                                               WarmStart* warm) const {
  auto sol = try_solve(z, opts, warm);
  if (!sol.converged)
    throw IterationFailure("subordination iteration did not converge", sol.residual);
  return sol;
}

cplx ConvolutionSystem::g(cplx z, const SolveOptions& opts, WarmStart* warm) const {
  return solve(z, opts, warm).G;
}

SubordinationSolution solve(std::span<const Measure> measures, UpperHalfPoint z,
                            const SolveOptions& opts) {
  return ConvolutionSystem({measures.begin(), measures.end()}).solve(z.value(), opts);
}

cplx g_free(std::span<const Measure> measures, UpperHalfPoint z, const SolveOptions& opts) {
  return solve(measures, z, opts).G;
}

std::vector<Measure> weighted_copies(const Measure& mu, const WeightVector& theta) {
  std::vector<Measure> out;
  out.reserve(static_cast<std::size_t>(theta.n()));
  for (double t : theta.values()) out.push_back(scale(mu, t));
  return out;
}

cplx weighted_sum_g(const Measure& mu, const WeightVector& theta, UpperHalfPoint z,
                    const SolveOptions& opts) {
  return ConvolutionSystem(weighted_copies(mu, theta)).g(z.value(), opts);
}

}  // namespace freeconv
