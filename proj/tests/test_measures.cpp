#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freeconv/error.hpp"
#include "freeconv/measures.hpp"
#include "oracles.hpp"

using namespace freeconv;

TEST_CASE("moments of simple laws") {
  CHECK(moment(Measure::bernoulli(), 2) == doctest::Approx(1.0));
  CHECK(moment(Measure::dirac(3.0), 1) == 3.0);
  CHECK(moment(Measure::semicircle(1.0), 3) == 0.0);
  for (int k = 1; k <= 8; ++k)
    CHECK(moment(Measure::semicircle(1.0), 2 * k) == static_cast<double>(oracle::dyck_paths(k)));
  CHECK(moment(Measure::semicircle(1.0), 4) == 2.0);
  CHECK(moment(Measure::semicircle(0.5), 4) == doctest::Approx(0.5));
}

TEST_CASE("absolute moments") {
  CHECK(abs_moment(Measure::bernoulli(), 3) == doctest::Approx(1.0));
  CHECK(abs_moment(Measure::dirac(0.0), 5) == 0.0);
  CHECK(abs_moment(Measure::semicircle(1.0), 2) == doctest::Approx(1.0).epsilon(1e-12));
  // E|X| for the standard semicircle law is 8/(3 pi).
  CHECK(abs_moment(Measure::semicircle(1.0), 1) == doctest::Approx(8.0 / (3.0 * std::numbers::pi)));
  for (int k = 1; k <= 6; ++k) {
    const auto mu = Measure::binomial(0.3);
    CHECK(abs_moment(mu, k) >= std::abs(moment(mu, k)) - 1e-15);
  }
}

TEST_CASE("construction validates and merges atoms") {
  const auto mu = Measure::atomic({{1.0, 0.25}, {-1.0, 0.5}, {1.0, 0.25}});
  REQUIRE(mu.atoms().size() == 2);
  CHECK(mu.atoms()[0].x == -1.0);
  CHECK(mu.atoms()[1].w == 0.5);
  CHECK_THROWS_AS(Measure::atomic({{0.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(Measure::atomic({{0.0, 1.5}, {1.0, -0.5}}), DomainError);
  CHECK_THROWS_AS(Measure::semicircle(0.0), DomainError);
  CHECK_THROWS_AS(Measure::binomial(1.0), DomainError);
}

TEST_CASE("dilation") {
  CHECK(dilate(Measure::dirac(1.0), 2.0) == Measure::dirac(2.0));
  CHECK(dilate(Measure::bernoulli(), 1.0) == Measure::bernoulli());
  CHECK(moment(dilate(Measure::bernoulli(), 0.5), 4) == doctest::Approx(0.0625));
  CHECK(dilate(Measure::semicircle(2.0), 3.0).semicircle_variance() == doctest::Approx(18.0));
  CHECK_THROWS_AS(dilate(Measure::bernoulli(), 0.0), DomainError);
  CHECK_THROWS_AS(dilate(Measure::bernoulli(), -1.0), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int t = 0; t < 50; ++t) {
    const auto mu = oracle::random_measure(rng, 5);
    const double a = u(rng), b = u(rng);
    const auto lhs = dilate(dilate(mu, a), b);
    const auto rhs = dilate(mu, a * b);
    REQUIRE(lhs.atoms().size() == rhs.atoms().size());
    for (std::size_t i = 0; i < lhs.atoms().size(); ++i)
      CHECK(std::abs(lhs.atoms()[i].x - rhs.atoms()[i].x) <= 1e-14 * std::max(1.0, std::abs(rhs.atoms()[i].x)));
  }
}

TEST_CASE("scale allows reflection") {
  const auto mu = scale(Measure::binomial(0.25), -1.0);
  CHECK(moment(mu, 3) == doctest::Approx(-moment(Measure::binomial(0.25), 3)));
  CHECK(scale(Measure::bernoulli(), 0.0) == Measure::dirac(0.0));
}

TEST_CASE("standardize") {
  CHECK(standardize(Measure::bernoulli()) == Measure::bernoulli());
  const auto mu = standardize(Measure::atomic({{0.0, 0.5}, {2.0, 0.5}}));
  CHECK(mu.atoms()[0].x == doctest::Approx(-1.0));
  CHECK(mu.atoms()[1].x == doctest::Approx(1.0));
  CHECK_THROWS_AS(standardize(Measure::dirac(5.0)), DegenerateMeasureError);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto s = standardize(oracle::random_measure(rng, 4));
    CHECK(std::abs(mean(s)) < 1e-12);
    CHECK(variance(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("variance is nonnegative and weights sum to one") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto mu = oracle::random_measure(rng, 1 + t % 7);
    double total = 0.0;
    for (const auto& a : mu.atoms()) total += a.w;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(moment(mu, 2) - moment(mu, 1) * moment(mu, 1) >= -1e-15);
  }
}

TEST_CASE("semicircle density and distribution function") {
  CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(semicircle_density(2.5) == 0.0);
  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5));
  CHECK(semicircle_cdf(2.0) == 1.0);
  CHECK(semicircle_cdf(-2.0) == 0.0);
  CHECK(semicircle_cdf(5.0) == 1.0);
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double c = semicircle_cdf(-3.0 + 6.0 * i / 10000);
    CHECK(c >= prev);
    prev = c;
  }
  const int m = 100000;
  double integral = 0.0;
  for (int i = 0; i < m; ++i) {
    const double a = -2.0 + 4.0 * i / m, b = -2.0 + 4.0 * (i + 1) / m;
    integral += 0.5 * (b - a) * (semicircle_density(a) + semicircle_density(b));
  }
  CHECK(std::abs(integral - 1.0) <= 1e-6);
}

TEST_CASE("atomic distribution function") {
  const auto mu = Measure::bernoulli();
  CHECK(cdf(mu, -1.0) == 0.5);
  CHECK(cdf_left(mu, -1.0) == 0.0);
  CHECK(cdf(mu, 0.0) == 0.5);
  CHECK(cdf(mu, 1.0) == 1.0);
  CHECK(cdf_left(mu, 1.0) == 0.5);
}

TEST_CASE("summary") {
  const auto s = summarize(Measure::binomial(0.25), 4);
  CHECK(s.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.variance == doctest::Approx(1.0));
  CHECK(s.abs_moments[1] == doctest::Approx(s.moments[1]));
  CHECK(s.support_radius == doctest::Approx(std::sqrt(3.0)));
}
