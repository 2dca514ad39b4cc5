#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gqarch/error.hpp"
#include "gqarch/series_io.hpp"
#include "gqarch/simulator.hpp"

using namespace gqarch;

namespace {

SeriesFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_series(in, "test.csv");
}

}  // namespace

TEST_CASE("one-column file with and without header") {
  auto f = parse("0.5\n-1.25\n3e-3\n");
  CHECK(f.path.observations == std::vector<double>{0.5, -1.25, 3e-3});
  CHECK_FALSE(f.path.has_presample());

  f = parse("r\n1\n2\n");
  CHECK(f.path.observations == std::vector<double>{1.0, 2.0});

  f = parse("# a = 1\n# free text\nr\n1\n\n2\n");
  CHECK(f.comments == std::vector<std::string>{"# a = 1", "# free text"});
  CHECK(f.path.observations.size() == 2);
}

TEST_CASE("malformed rows name the line") {
  try {
    (void)parse("r\n1\nabc\n3\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("test.csv:3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1\n2 3\n"), DataError);
  CHECK_THROWS_AS(parse("1\nnan\n"), DataError);
  CHECK_THROWS_AS(parse("r\n"), DataError);
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse("1\n---presample-end---\n"), DataError);
}

TEST_CASE("presample delimiter") {
  const auto f = parse("r\n0.1\n0.2\n---presample-end---\n1\n2\n3\n");
  REQUIRE(f.path.has_presample());
  CHECK(*f.path.presample == std::vector<double>{0.1, 0.2});
  CHECK(f.path.observations == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("format_real round-trips doubles exactly") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456789.123456789, std::numeric_limits<double>::min(),
                   std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("write_series then read reproduces values and comments byte for byte") {
  SimConfig cfg;
  cfg.n = 200;
  cfg.seed = 4;
  const auto path = simulate({0.7, 0.1, -0.2, 0.2, 0.2}, cfg);
  const std::vector<std::string> comments{"# gqarch simulate", "# seed = 4"};

  std::ostringstream first;
  write_series(first, path, comments);
  std::istringstream in(first.str());
  const auto back = parse_series(in);
  CHECK(back.comments == comments);
  CHECK(back.path.observations == path.observations);
  REQUIRE(back.path.has_presample());
  CHECK(*back.path.presample == *path.presample);

  std::ostringstream second;
  write_series(second, back.path, back.comments);
  CHECK(second.str() == first.str());

  const auto file = std::filesystem::temp_directory_path() / "gqarch_series_io_test.csv";
  write_series_file(file, path, comments);
  CHECK(load_series(file).observations == path.observations);
  std::filesystem::remove(file);
  CHECK_THROWS_AS(load_series(file), DataError);
}
