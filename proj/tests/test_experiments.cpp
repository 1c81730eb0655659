#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freeconv/error.hpp"
#include "freeconv/experiments.hpp"
#include "freeconv/polyroots.hpp"
#include "oracles.hpp"

using namespace freeconv;

TEST_CASE("log-log slope fits") {
  const std::vector<double> n{4, 8, 16, 32, 64};
  std::vector<double> d1, d2, d3;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (double x : n) {
    d1.push_back(3.0 / x);
    d2.push_back(0.7 / std::sqrt(x));
    d3.push_back(std::pow(x, -0.5) * (1.0 + noise(rng)));
  }
  CHECK(std::abs(fit_loglog_slope(n, d1).slope + 1.0) <= 1e-12);
  CHECK(fit_loglog_slope(n, d1).r_squared == doctest::Approx(1.0));
  CHECK(std::abs(fit_loglog_slope(n, d2).slope + 0.5) <= 1e-12);
  CHECK(std::abs(fit_loglog_slope(n, d3).slope + 0.5) <= 0.05);

  std::vector<double> with_zero = d1;
  with_zero[1] = 0.0;
  const auto f = fit_loglog_slope(n, with_zero);
  CHECK(f.skipped == 1);
  CHECK(f.used == 4);
  const std::vector<double> short_n{1, 2};
  CHECK_THROWS_AS(fit_loglog_slope(short_n, short_n), DomainError);
}

TEST_CASE("weight modes") {
  CHECK(parse_weight_mode("uniform") == WeightMode::Uniform);
  CHECK(parse_weight_mode("random") == WeightMode::Random);
  CHECK(to_string(WeightMode::Random) == "random");
  CHECK_THROWS_AS(parse_weight_mode("gaussian"), DomainError);
  const auto a = make_weights(10, WeightMode::Random, 4, 2);
  const auto b = sample(10, 4, 2);
  CHECK(a[3] == b[3]);
  CHECK(make_weights(9, WeightMode::Uniform, 4, 2)[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rate experiment rows") {
  RateOptions o;
  o.n_schedule = {2, 4, 8};
  o.inversion.points = 1201;
  o.inversion.eta = 1e-3;
  const auto r = rate_experiment(Measure::bernoulli(), o);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.delta >= 0.0);
    CHECK(row.levy <= row.delta + row.delta_err);
    CHECK(row.delta_eps <= 2.0 * row.delta + row.delta_eps_err + 2.0 * row.delta_err);
    CHECK(std::isnan(row.delta_tilde));
    CHECK(row.solves > 0);
  }
  CHECK(r.rows[0].delta > r.rows[2].delta);
  CHECK(r.delta_fit.has_value());
  CHECK(std::isnan(r.rows[0].slope_running));
  CHECK_FALSE(std::isnan(r.rows[2].slope_running));

  RateOptions bad = o;
  bad.n_schedule = {4, 2};
  CHECK_THROWS_AS(rate_experiment(Measure::bernoulli(), bad), DomainError);
  bad.n_schedule = {0, 2, 3};
  CHECK_THROWS_AS(rate_experiment(Measure::bernoulli(), bad), DomainError);
}

TEST_CASE("pipeline distance agrees with the closed-form transform") {
  RateOptions o;
  o.n_schedule = {2, 4, 16};
  o.levy = false;
  o.delta_eps = false;
  o.inversion.points = 2001;
  const auto r = rate_experiment(Measure::bernoulli(), o);
  for (const auto& row : r.rows) {
    const int n = row.n;
    FunctionTransform oracle_g([n](cplx z) { return oracle::binomial_g(n, 0.5, z); }, 2.0, 0.0);
    const double R = 2.0 + o.inversion.margin;
    const auto d = recover(oracle_g, -R, R, o.inversion.points, o.inversion.eta);
    const auto k = kolmogorov(CdfSource::gridded(d), CdfSource::smoothed_semicircle(o.inversion.eta));
    CHECK(std::abs(row.delta - k.value) <= row.delta_err + k.error);
  }
}

TEST_CASE("delta tilde in rate rows") {
  RateOptions o;
  o.n_schedule = {2, 8, 32};
  o.delta = o.levy = o.delta_eps = false;
  o.delta_tilde = true;
  o.strip.u_points = 41;
  const auto r = rate_experiment(Measure::bernoulli(), o);
  for (const auto& row : r.rows) CHECK(row.delta_tilde >= o.tilde_a + std::pow(o.tilde_eps, 1.5));
  CHECK(r.rows[0].delta_tilde > r.rows[2].delta_tilde);
}

TEST_CASE("non-identical convolutions") {
  std::vector<Measure> same(4, Measure::bernoulli());
  const auto r = nonid_experiment(same);
  CHECK(r.b_n == doctest::Approx(2.0));
  CHECK(r.l_n == doctest::Approx(0.5));
  std::vector<Measure> mixed{Measure::bernoulli(), dilate(Measure::bernoulli(), 2.0)};
  const auto m = nonid_experiment(mixed);
  CHECK(m.b_n == doctest::Approx(std::sqrt(5.0)));
  CHECK(m.l_n == doctest::Approx(9.0 / std::pow(5.0, 1.5)));
  std::vector<Measure> bad{Measure::dirac(0.0), Measure::dirac(0.0)};
  CHECK_THROWS_AS(nonid_experiment(bad), DomainError);
  double prev_ratio = 0.0;
  for (int n : {4, 16, 64}) {
    std::vector<Measure> ms(static_cast<std::size_t>(n), Measure::bernoulli());
    const auto x = nonid_experiment(ms);
    CHECK(x.ratio < 2.0);
    prev_ratio = x.ratio;
  }
  CHECK(prev_ratio > 0.0);
}

TEST_CASE("support report formulas") {
  const auto r = support_experiment(Measure::bernoulli(), WeightVector::uniform(1024));
  CHECK(r.r_theta == 0.375);
  CHECK(r.bound_paper == doctest::Approx(0.75));
  CHECK(r.bound_kargin == doctest::Approx(0.15625));
  CHECK(r.preconditions_met);
  CHECK(r.inside_paper);
  CHECK(r.inside_kargin);
  CHECK(r.detected_hi > 1.9);
  const auto s = support_experiment(Measure::bernoulli(), WeightVector::uniform(100));
  CHECK(s.r_theta == doctest::Approx(3.84));
  CHECK_FALSE(s.preconditions_met);
}

TEST_CASE("polynomial roots") {
  const auto q = quadratic_roots({-3.0, 0.0}, {2.0, 0.0});
  CHECK(std::abs(q[0] * q[1] - 2.0) < 1e-14);
  CHECK(std::abs(q[0] + q[1] - 3.0) < 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const cplx r1(u(rng), u(rng)), r2(u(rng), u(rng)), r3(u(rng), u(rng));
    const auto roots = cubic_roots(-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3);
    for (cplx want : {r1, r2, r3}) {
      double best = 1e9;
      for (cplx g : roots) best = std::min(best, std::abs(g - want));
      CHECK(best < 1e-7);
    }
  }
  const auto triple = cubic_roots(-3.0, 3.0, -1.0);
  for (cplx g : triple) CHECK(std::abs(g - 1.0) < 1e-4);
}

TEST_CASE("functional equation residuals") {
  const std::vector<cplx> grid{{1.0, 1.0}, {0.0, 2.0}, {-0.5, 0.3}};
  const auto terms = functional_residuals(Measure::bernoulli(), WeightVector::uniform(2), grid);
  REQUIRE(terms.size() == 3);
  for (const auto& t : terms) {
    REQUIRE(t.ok);
    CHECK(t.residual_P <= 1e-9);
    CHECK(t.residual_Q <= 1e-9);
    CHECK(t.vieta_sum <= 1e-9);
    CHECK(t.vieta_product <= 1e-9);
  }
  CHECK(terms[1].matched_root_Q == "omega_tilde2");
  CHECK(std::abs(terms[1].I3 - 0.5) < 1e-12);

  const auto theta = sample(12, 6);
  const auto mu = Measure::binomial(0.3);
  std::vector<cplx> g2;
  for (int i = 0; i < 20; ++i) g2.emplace_back(-1.5 + 0.15 * i, 0.1 + 0.1 * i);
  for (const auto& t : functional_residuals(mu, theta, g2)) {
    REQUIRE(t.ok);
    const double s = 1.0 + std::abs(t.z);
    CHECK(t.residual_P <= 1e-8 * s * s * s);
    CHECK(t.residual_Q <= 1e-8 * s * s);
    CHECK(t.formula_gap <= 1e-8);
  }
  const std::vector<cplx> one{{0.0, 1.0}};
  CHECK_THROWS_AS(functional_residuals(dilate(Measure::bernoulli(), 2.0), theta, one), DomainError);
}
