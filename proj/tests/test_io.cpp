#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "freeconv/error.hpp"
#include "freeconv/io.hpp"

using namespace freeconv;

TEST_CASE("measure json round trip") {
  for (const auto& mu : {Measure::bernoulli(), Measure::binomial(0.25), Measure::semicircle(0.5), Measure::dirac(2.0)}) {
    CHECK(measure_from_json(to_json(mu)) == mu);
  }
  const auto j = json::parse(R"({"kind":"atomic","atoms":[{"x":-1.0,"w":0.5},{"x":1.0,"w":0.5}]})");
  CHECK(measure_from_json(j) == Measure::bernoulli());
  CHECK(measure_from_json(json::parse(R"({"kind":"semicircle","variance":0.5})")) == Measure::semicircle(0.5));
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"kind":"cauchy"})")), DomainError);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"kind":"atomic","atoms":[{"x":0,"w":0.4}]})")), DomainError);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"([1,2])")), DomainError);
}

TEST_CASE("presets") {
  Measure m = Measure::dirac(0.0);
  CHECK(parse_preset("bernoulli", &m));
  CHECK(m == Measure::bernoulli());
  CHECK(parse_preset("binomial:0.25", &m));
  CHECK(m == Measure::binomial(0.25));
  CHECK(parse_preset("semicircle:2", &m));
  CHECK(m == Measure::semicircle(2.0));
  CHECK(parse_preset("dirac:-1.5", &m));
  CHECK(m == Measure::dirac(-1.5));
  CHECK_FALSE(parse_preset("foo.json", &m));
  CHECK_THROWS_AS(parse_preset("binomial:abc", &m), DomainError);
  CHECK_THROWS_AS(load_measure("/nonexistent/measure.json"), IoError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("atomic writes and reads") {
  const auto dir = std::filesystem::temp_directory_path() / "freeconv_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_file_atomic(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  write_file_atomic(path, "again\n");
  CHECK(read_file(path) == "again\n");
  for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().filename() == "out.txt");
  CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.txt").string(), "x"), IoError);
  CHECK_THROWS_AS(read_file((dir / "missing.txt").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("distribution csv round trip") {
  MeasureTransform g(Measure::semicircle(1.0));
  const auto d = recover(g, -3.0, 3.0, 301, 1e-2);
  const auto text = distribution_csv(d, {"source=test"});
  CHECK(text.rfind("# source=test\n", 0) == 0);
  CHECK(text.find("x,density,cdf\n") != std::string::npos);
  CHECK(text.find("eta") != std::string::npos);
  CHECK(text.find("tail_mass") != std::string::npos);
  const auto back = distribution_from_csv(text);
  CHECK(back.grid == d.grid);
  CHECK(back.density == d.density);
  CHECK(back.cdf == d.cdf);
  CHECK(back.eta == d.eta);
  CHECK(back.tail_mass == d.tail_mass);
  CHECK_THROWS_AS(distribution_from_csv("x,density,cdf\n1,2\n"), DomainError);
}

TEST_CASE("rate csv layout") {
  RateReport r;
  RateRow row;
  row.n = 4;
  row.seed = 1;
  row.delta = 0.1;
  row.delta_err = 0.01;
  row.delta_eps = std::nan("");
  row.delta_tilde = std::nan("");
  row.levy = 0.05;
  row.slope_running = std::nan("");
  r.rows.push_back(row);
  const auto text = rate_csv(r);
  CHECK(text.find("n,rep,seed,weight_mode,delta,delta_err,delta_eps,delta_tilde,levy,slope_running\n") != std::string::npos);
  CHECK(text.find("4,0,1,uniform,0.10000000000000001,0.01,nan,nan,0.050000000000000003,nan\n") != std::string::npos);
}

TEST_CASE("json reports") {
  SupportReport s;
  s.preconditions_met = false;
  const auto j = to_json(s);
  CHECK(j["inside_paper"] == "n/a");
  const auto c = to_json(concentration_report(8, 1000, 1));
  CHECK(c["checks"].size() == 10);
  CHECK(c["checks"][0].contains("bound"));
  CHECK(c["checks"][0].contains("empirical"));
  CHECK(c["checks"][0].contains("stderr"));
  CHECK(c["checks"][0].contains("pass"));
  CHECK(dump_json(json{{"a", 1}}).back() == '\n');
}
