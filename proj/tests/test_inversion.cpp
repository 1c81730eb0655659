#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "freeconv/error.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/sphere.hpp"
#include "oracles.hpp"

using namespace freeconv;

namespace {

double semicircle_pdf(double x) { return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi) : 0.0; }

}  // namespace

TEST_CASE("semicircle recovery") {
  MeasureTransform g(Measure::semicircle(1.0));
  const auto d = recover(g, -3.0, 3.0, 4001, 1e-3);
  CHECK(d.density[2000] == doctest::Approx(1.0 / std::numbers::pi).epsilon(2e-3 * std::numbers::pi));
  CHECK(d.tail_mass <= 2e-3);
  CHECK(d.tail_mass >= 0.0);
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    CHECK(d.density[i] >= 0.0);
    if (i > 0) CHECK(d.cdf[i] >= d.cdf[i - 1]);
  }
  CHECK(d.cdf.front() <= d.tail_mass);
  CHECK(d.cdf.back() >= 1.0 - d.tail_mass);
  for (double eta : {1e-2, 1e-3}) {
    const auto e = recover(g, -3.0, 3.0, 6001, eta);
    double worst = 0.0;
    for (std::size_t i = 0; i < e.grid.size(); ++i)
      if (std::abs(e.grid[i]) <= 1.5) worst = std::max(worst, std::abs(e.density[i] - semicircle_pdf(e.grid[i])));
    CHECK(worst <= 3.0 * eta);
  }
}

TEST_CASE("point mass recovery is the Cauchy kernel") {
  MeasureTransform g(Measure::dirac(0.0));
  const double eta = 1e-3;
  const auto d = recover(g, -1.0, 1.0, 2001, eta);
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    const double x = d.grid[i];
    CHECK(std::abs(d.density[i] - eta / (std::numbers::pi * (x * x + eta * eta))) <= 1e-9 * std::max(1.0, d.density[i]));
  }
  CHECK(d.density[1000] == doctest::Approx(1.0 / (std::numbers::pi * eta)).epsilon(1e-12));
}

TEST_CASE("parallel and serial recovery agree bit for bit") {
  const auto t = ConvolutionTransform::weighted(Measure::bernoulli(), sample(30, 4));
  const auto a = recover(*t, -3.0, 3.0, 1001, 1e-3);
  const auto b = recover_serial(*t, -3.0, 3.0, 1001, 1e-3);
  CHECK(a.density == b.density);
  CHECK(a.cdf == b.cdf);
  CHECK(a.tail_mass == b.tail_mass);
}

TEST_CASE("richardson extrapolation sharpens the density") {
  MeasureTransform g(Measure::semicircle(1.0));
  RecoverOptions ro;
  ro.richardson = true;
  const auto plain = recover(g, -1.0, 1.0, 201, 1e-2);
  const auto rich = recover(g, -1.0, 1.0, 201, 1e-2, ro);
  double ep = 0.0, er = 0.0;
  for (std::size_t i = 0; i < plain.grid.size(); ++i) {
    ep = std::max(ep, std::abs(plain.density[i] - semicircle_pdf(plain.grid[i])));
    er = std::max(er, std::abs(rich.density[i] - semicircle_pdf(rich.grid[i])));
  }
  CHECK(er < ep);
}

TEST_CASE("recover validates arguments") {
  MeasureTransform g(Measure::bernoulli());
  CHECK_THROWS_AS(recover(g, 1.0, -1.0, 100, 1e-3), DomainError);
  CHECK_THROWS_AS(recover(g, -1.0, 1.0, 100, 0.0), DomainError);
  CHECK_THROWS_AS(recover(g, -1.0, 1.0, 1, 1e-3), DomainError);
  FunctionTransform bad([](cplx) { return cplx(0.0, 1.0); }, 1.0);
  CHECK_THROWS_AS(recover(bad, -1.0, 1.0, 11, 1e-3), InversionError);
}

TEST_CASE("gridded distribution outside the window") {
  MeasureTransform g(Measure::semicircle(1.0));
  const auto d = recover(g, -3.0, 3.0, 601, 1e-3);
  CHECK(d.cdf_at(-100.0) >= 0.0);
  CHECK(d.cdf_at(-100.0) < 1e-4);
  CHECK(d.cdf_at(100.0) <= 1.0);
  CHECK(d.cdf_at(100.0) > 1.0 - 1e-4);
  CHECK(d.cdf_at(0.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("smoothed semicircle distribution function") {
  const double eta = 1e-2;
  CHECK(smoothed_semicircle_cdf(0.0, eta) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(smoothed_semicircle_cdf(-1e4, eta) < 1e-5);
  CHECK(smoothed_semicircle_cdf(1e4, eta) > 1.0 - 1e-5);
  for (double x : {-2.5, -1.0, 0.3, 1.9, 2.2}) {
    const double h = 1e-5;
    const double deriv = (smoothed_semicircle_cdf(x + h, eta) - smoothed_semicircle_cdf(x - h, eta)) / (2.0 * h);
    CHECK(deriv == doctest::Approx(-cauchy_semicircle(cplx(x, eta)).imag() / std::numbers::pi).epsilon(1e-5));
  }
  for (double x : {-1.0, 0.5, 1.5}) CHECK(std::abs(smoothed_semicircle_cdf(x, 1e-7) - semicircle_cdf(x)) < 1e-6);
}

TEST_CASE("kolmogorov distance") {
  const auto sc = CdfSource::semicircle();
  CHECK(kolmogorov(sc, sc).value == 0.0);
  const auto a = CdfSource::of_measure(Measure::dirac(0.0));
  const auto b = CdfSource::of_measure(Measure::dirac(1.0));
  CHECK(kolmogorov(a, b).value == 1.0);
  const auto k = kolmogorov(CdfSource::arcsine(), sc);
  CHECK(std::abs(k.value - 1.0 / (2.0 * std::numbers::pi)) <= 1e-4);
  const auto bern = CdfSource::of_measure(Measure::bernoulli());
  CHECK(kolmogorov(bern, CdfSource::of_measure(Measure::dirac(0.0))).value == 0.5);
}

TEST_CASE("levy distance") {
  const auto sc = CdfSource::semicircle();
  CHECK(levy(sc, sc).value <= 1e-12);
  const auto a = CdfSource::of_measure(Measure::dirac(0.0));
  const auto b = CdfSource::of_measure(Measure::dirac(1.0));
  CHECK(levy(a, b).value == doctest::Approx(1.0).epsilon(1e-9));
  const auto c = CdfSource::of_measure(Measure::dirac(0.25));
  CHECK(levy(a, c).value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(levy(CdfSource::of_measure(dilate(Measure::bernoulli(), 0.9)), CdfSource::of_measure(Measure::bernoulli())).value <=
        0.1 + 1e-9);
}

TEST_CASE("levy distance matches a brute-force scan") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 6; ++t) {
    const auto m1 = oracle::random_measure(rng, 3);
    const auto m2 = oracle::random_measure(rng, 4);
    const double brute = oracle::levy_brute([&](double x) { return cdf(m1, x); }, [&](double x) { return cdf(m2, x); },
                                            -3.0, 3.0, 1e-3, 2e-4);
    const double lib = levy(CdfSource::of_measure(m1), CdfSource::of_measure(m2)).value;
    CHECK(std::abs(lib - brute) <= 2e-3);
  }
  const double brute = oracle::levy_brute(semicircle_cdf, [](double x) { return 0.5 + std::asin(std::clamp(x / 2.0, -1.0, 1.0)) / std::numbers::pi; },
                                          -3.0, 3.0, 1e-3, 1e-3);
  CHECK(std::abs(levy(CdfSource::semicircle(), CdfSource::arcsine()).value - brute) <= 2e-3);
}

TEST_CASE("delta_eps") {
  const auto sc = CdfSource::semicircle();
  CHECK(delta_eps(sc, sc, 0.1).value == 0.0);
  const auto v = delta_eps(CdfSource::arcsine(), sc, 0.5);
  CHECK(v.value > 0.0);
  CHECK(v.value <= 1.0 / std::numbers::pi + 1e-12);
  CHECK_THROWS_AS(delta_eps(sc, sc, 0.0), DomainError);
  CHECK_THROWS_AS(delta_eps(sc, sc, 1.0), DomainError);
}

TEST_CASE("delta_tilde and strip integrals") {
  MeasureTransform sc(Measure::semicircle(1.0));
  CHECK(delta_tilde(sc, sc, 0.01, 0.1) == doctest::Approx(0.01 + std::pow(0.1, 1.5)).epsilon(1e-12));
  CHECK(delta_tilde(sc, sc, 0.5, 0.9) == doctest::Approx(0.5 + std::pow(0.9, 1.5)).epsilon(1e-12));
  StripOptions so;
  so.u_points = 101;
  double prev = 1e9;
  for (int n : {2, 8, 32}) {
    FunctionTransform bn([n](cplx z) { return oracle::binomial_g(n, 0.5, z); }, 2.0 * std::sqrt(static_cast<double>(n)));
    const double v = strip_sup(bn, sc, 0.01, 0.2, so);
    CHECK(std::isfinite(v));
    CHECK(v < prev);
    prev = v;
  }
  const auto same = bai_integrals(sc, sc, 0.1, 0.5, so);
  CHECK(same.line_integral == 0.0);
  CHECK(same.strip_sup == 0.0);
  MeasureTransform d0(Measure::dirac(0.0));
  const auto diff = bai_integrals(d0, sc, 0.1, 0.5, so);
  CHECK(diff.line_integral > 0.0);
  CHECK(std::isfinite(diff.line_integral));
  CHECK_THROWS_AS(delta_tilde(sc, sc, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(delta_tilde(sc, sc, 1.0, 0.5), DomainError);
}

TEST_CASE("levy error covers the dilation bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int t = 0; t < 40; ++t) {
    const double c1 = u(rng), c2 = u(rng);
    const auto l = levy(CdfSource::of_measure(dilate(Measure::bernoulli(), c1)),
                        CdfSource::of_measure(dilate(Measure::bernoulli(), c2)));
    CHECK(l.error > 0.0);
    CHECK(l.error < 1e-12);
    CHECK(l.value <= std::abs(c1 - c2) + l.error);
    CHECK(l.value >= std::min(std::abs(c1 - c2), 0.5) - l.error);
  }
}

TEST_CASE("adaptive simpson") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("distance inequalities on gridded laws") {
  const auto ta = ConvolutionTransform::weighted(Measure::bernoulli(), WeightVector::uniform(3));
  const auto tb = ConvolutionTransform::weighted(Measure::binomial(0.3), sample(5, 9));
  const auto a = CdfSource::gridded(recover(*ta, -5.0, 5.0, 2001, 1e-3));
  const auto b = CdfSource::gridded(recover(*tb, -5.0, 5.0, 2001, 1e-3));
  const auto k = kolmogorov(a, b);
  const auto l = levy(a, b);
  const auto e = delta_eps(a, b, 0.3);
  CHECK(l.value <= k.value + l.error + k.error);
  CHECK(e.value <= 2.0 * k.value + e.error + 2.0 * k.error);
  CHECK(kolmogorov(b, a).value == doctest::Approx(k.value));
  CHECK(a.error_estimate() > 0.0);
}
