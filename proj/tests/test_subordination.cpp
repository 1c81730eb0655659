#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "freeconv/error.hpp"
#include "freeconv/sphere.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"
#include "oracles.hpp"

using namespace freeconv;

static bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

TEST_CASE("single measure") {
  const std::vector<Measure> ms{Measure::bernoulli()};
  const auto s = solve(ms, UpperHalfPoint(0.0, 2.0));
  REQUIRE(s.converged);
  CHECK(close(s.Z[0], {0.0, 2.0}, 1e-14));
  CHECK(close(s.G, {0.0, -0.4}, 1e-14));
}

TEST_CASE("point masses") {
  const std::vector<Measure> ms{Measure::dirac(0.0), Measure::dirac(0.0)};
  const auto s = solve(ms, UpperHalfPoint(0.0, 1.0));
  CHECK(close(s.Z[0], {0.0, 1.0}, 1e-12));
  CHECK(close(s.Z[1], {0.0, 1.0}, 1e-12));
  CHECK(close(s.G, {0.0, -1.0}, 1e-12));
  const std::vector<Measure> ab{Measure::dirac(0.3), Measure::dirac(-1.1)};
  const cplx z(0.4, 0.2);
  CHECK(close(g_free(ab, UpperHalfPoint(z)), 1.0 / (z - 0.3 + 1.1), 1e-12));
}

TEST_CASE("two Bernoulli laws give the arcsine law") {
  const std::vector<Measure> ms{Measure::bernoulli(), Measure::bernoulli()};
  const auto s = solve(ms, UpperHalfPoint(0.0, 2.0));
  const double r2 = std::sqrt(2.0);
  CHECK(close(s.Z[0], {0.0, 1.0 + r2}, 1e-12));
  CHECK(close(s.Z[1], {0.0, 1.0 + r2}, 1e-12));
  CHECK(close(s.G, {0.0, -1.0 / (2.0 * r2)}, 1e-12));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.02, 2.0);
  for (int t = 0; t < 50; ++t) {
    const cplx z(re(rng), im(rng));
    CHECK(close(g_free(ms, UpperHalfPoint(z)), cauchy_arcsine(z), 1e-10));
  }
}

TEST_CASE("semicircle laws add their variances") {
  const std::vector<Measure> ms{Measure::semicircle(0.5), Measure::semicircle(0.5)};
  CHECK(close(g_free(ms, UpperHalfPoint(0.0, 1.0)), {0.0, (1.0 - std::sqrt(5.0)) / 2.0}, 1e-12));
  const std::vector<Measure> mixed{Measure::semicircle(0.3), Measure::dirac(0.5)};
  const cplx z(0.1, 0.3);
  CHECK(close(g_free(mixed, UpperHalfPoint(z)), cauchy(Measure::semicircle(0.3), z - 0.5), 1e-11));
}

TEST_CASE("normalized Bernoulli sums match the closed form") {
  CHECK(close(weighted_sum_g(Measure::bernoulli(), WeightVector::uniform(2), UpperHalfPoint(0.0, 2.0)),
              {0.0, -1.0 / std::sqrt(6.0)}, 1e-12));
  CHECK(close(oracle::binomial_g(2, 0.5, {0.0, 2.0}), {0.0, -1.0 / std::sqrt(6.0)}, 1e-14));
  const cplx z(0.0, 1.0);
  CHECK(close(weighted_sum_g(Measure::bernoulli(), WeightVector::uniform(8), UpperHalfPoint(z)),
              oracle::binomial_g(8, 0.5, z), 1e-10));
  for (int n : {1, 3, 5, 12}) {
    for (double x : {-2.5, -1.0, 0.0, 0.7, 1.9}) {
      const cplx w(x, 0.3);
      CHECK(close(weighted_sum_g(Measure::binomial(0.25), WeightVector::uniform(n), UpperHalfPoint(w)),
                  oracle::binomial_g(n, 0.25, w), 1e-10));
    }
  }
  const auto mu = Measure::binomial(0.3);
  CHECK(close(weighted_sum_g(mu, WeightVector({1.0}), UpperHalfPoint(0.2, 0.5)), cauchy(mu, cplx(0.2, 0.5)), 1e-14));
}

TEST_CASE("solution invariants") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> re(-2.5, 2.5), im(0.01, 3.0);
  for (int t = 0; t < 60; ++t) {
    std::vector<Measure> ms;
    for (int i = 0; i < 2 + t % 5; ++i) ms.push_back(oracle::random_measure(rng, 2 + i % 4));
    const UpperHalfPoint z(re(rng), im(rng));
    const auto s = solve(ms, z);
    CHECK(s.converged);
    CHECK(s.residual <= 1e-12 * std::max(1.0, std::abs(z.value())));
    for (const auto& zi : s.Z) CHECK(zi.imag() >= z.im() - 1e-10);
    CHECK(s.common_F.imag() >= z.im() - 1e-10);
    CHECK(s.G.imag() < 0.0);
    ConvolutionSystem sys(ms);
    std::vector<cplx> zg(static_cast<std::size_t>(sys.groups()));
    for (int i = 0; i < sys.size(); ++i) zg[static_cast<std::size_t>(sys.group_of(i))] = s.Z[static_cast<std::size_t>(i)];
    CHECK(sys.residual(z, zg) <= 1e-11 * std::max(1.0, std::abs(z.value())));
  }
}

TEST_CASE("subordination equations hold in input order") {
  const std::vector<Measure> ms{Measure::bernoulli(), Measure::binomial(0.3), Measure::semicircle(0.4)};
  const cplx z(0.3, 0.2);
  const auto s = solve(ms, UpperHalfPoint(z));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    cplx rhs = z;
    for (std::size_t j = 0; j < ms.size(); ++j)
      if (j != i) rhs += f_transform(ms[j], s.Z[j]) - s.Z[j];
    CHECK(close(s.Z[i], rhs, 1e-10));
    CHECK(close(f_transform(ms[i], s.Z[i]), s.common_F, 1e-10));
  }
}

TEST_CASE("permutation invariance") {
  std::vector<Measure> ms{Measure::bernoulli(), Measure::binomial(0.2), Measure::semicircle(0.3),
                          Measure::dirac(0.1)};
  const UpperHalfPoint z(0.5, 0.1);
  const auto base = solve(ms, z);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<Measure> p;
    for (auto k : perm) p.push_back(ms[k]);
    const auto s = solve(p, z);
    CHECK(close(s.G, base.G, 1e-11));
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(close(s.Z[i], base.Z[perm[i]], 1e-10));
  }
}

TEST_CASE("warm starts agree with cold starts") {
  const auto theta = sample(40, 5);
  ConvolutionSystem sys(weighted_copies(Measure::bernoulli(), theta));
  WarmStart warm;
  int warm_iters = 0, cold_iters = 0;
  for (int k = 0; k <= 400; ++k) {
    const cplx z(-3.0 + 6.0 * k / 400, 1e-3);
    const auto w = sys.solve(z, {}, &warm);
    const auto c = sys.solve(z);
    warm_iters += w.iterations;
    cold_iters += c.iterations;
    CHECK(close(w.G, c.G, 1e-9 * std::max(1.0, std::abs(c.G))));
  }
  CHECK(warm_iters < cold_iters);
}

TEST_CASE("grouping identical measures") {
  const auto theta = WeightVector::uniform(64);
  ConvolutionSystem sys(weighted_copies(Measure::bernoulli(), theta));
  CHECK(sys.size() == 64);
  CHECK(sys.groups() == 1);
  CHECK(sys.multiplicity(0) == 64);
}

TEST_CASE("inverse subordination function behaves like a Cauchy transform") {
  const auto theta = sample(10, 2);
  const auto ms = weighted_copies(Measure::binomial(0.25), theta);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (auto [y, tol] : {std::pair{10.0, 5e-2}, std::pair{100.0, 5e-3}}) {
      const cplx z(0.0, y);
      const auto s = solve(ms, UpperHalfPoint(z));
      const cplx h = 1.0 / s.Z[i];
      CHECK(h.imag() < 0.0);
      CHECK(std::abs(z * h - 1.0) <= tol);
    }
  }
}

TEST_CASE("damped fixed point alone") {
  const std::vector<Measure> ms{Measure::bernoulli(), Measure::binomial(0.4), Measure::semicircle(0.5)};
  SolveOptions fp;
  fp.newton = false;
  const cplx z(0.2, 0.5);
  const auto a = solve(ms, UpperHalfPoint(z), fp);
  const auto b = solve(ms, UpperHalfPoint(z));
  CHECK(a.converged);
  CHECK(close(a.G, b.G, 1e-10));
}

TEST_CASE("errors") {
  const std::vector<Measure> none;
  CHECK_THROWS_AS(solve(none, UpperHalfPoint(0.0, 1.0)), DomainError);
  SolveOptions one;
  one.max_iters = 1;
  one.newton = false;
  const std::vector<Measure> ms{Measure::bernoulli(), Measure::binomial(0.1), Measure::bernoulli()};
  try {
    (void)solve(ms, UpperHalfPoint(0.1, 1e-3), one);
    FAIL("expected an iteration failure");
  } catch (const IterationFailure& e) {
    CHECK(e.last_residual() > 0.0);
  }
  SolveOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve(ms, UpperHalfPoint(0.0, 1.0), bad), DomainError);
}

TEST_CASE("transforms") {
  const auto t = ConvolutionTransform::weighted(Measure::bernoulli(), WeightVector::uniform(4));
  const cplx z(0.3, 0.4);
  CHECK(close(t->evaluate(z), oracle::binomial_g(4, 0.5, z), 1e-12));
  CHECK(t->solves() == 1);
  CHECK(t->support_radius() >= 2.0 - 1e-12);
  MeasureTransform m(Measure::dirac(2.0));
  CHECK(m.mean() == 2.0);
  CHECK(m.support_radius() == 0.0);
  FunctionTransform f(cauchy_semicircle, 2.0);
  CHECK(close(f.evaluate(z), cauchy_semicircle(z), 0.0));
}
