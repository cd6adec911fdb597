#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "funmean/error.hpp"
#include "io.hpp"

using namespace funmean;
using nlohmann::json;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = "funmean_io_test_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("grid function round trip keeps +inf") {
    const double inf = std::numeric_limits<double>::infinity();
    const GridFn f({-1.0, 1.0, 5}, {inf, 1.0, 0.25, 1.0, inf});
    const json j = io::to_json(f);
    CHECK(j["values"][0] == "inf");
    const GridFn g = io::grid_fn_from_json(json::parse(j.dump()));
    CHECK(g.grid() == f.grid());
    CHECK(std::equal(g.values().begin(), g.values().end(), f.values().begin(), f.values().end()));
  }

  TEST_CASE("grid function json rejects bad input") {
    CHECK_THROWS_AS(io::grid_fn_from_json(json{{"lo", 0.0}, {"hi", 1.0}, {"values", {1.0, "-inf"}}}), Error);
    CHECK_THROWS_AS(io::grid_fn_from_json(json{{"lo", 0.0}, {"values", {1.0, 2.0}}}), Error);
    CHECK_THROWS_AS(io::grid_fn_from_json(json{{"lo", 0.0}, {"hi", 1.0}, {"values", {0.0, 1.0, 0.0}}}), NotConvex);
  }

  TEST_CASE("matrix round trip") {
    Matrix m(2, 2);
    m(0, 0) = 2.0;
    m(0, 1) = m(1, 0) = 0.5;
    m(1, 1) = 3.0;
    const Matrix back = io::matrix_from_json(json::parse(io::to_json(m).dump()));
    CHECK((back - m).frobenius_norm() == 0.0);
    CHECK_THROWS_AS(io::matrix_from_json(json{{"d", 2}, {"entries", {1.0, 2.0, 3.0}}}), Error);
  }

  TEST_CASE("csv input with header and inf") {
    const std::string path = temp_file("f.csv", "x,value\n-1,inf\n0,0\n1,1\n");
    const GridFn f = io::load_grid_fn(path);
    std::remove(path.c_str());
    REQUIRE(f.size() == 3);
    CHECK(std::isinf(f.values()[0]));
    CHECK(f.values()[1] == 0.0);
    CHECK(f.values()[2] == 1.0);

    const std::string bad = temp_file("bad.csv", "x,value\n0,0\n1,abc\n");
    CHECK_THROWS_AS(io::load_grid_fn(bad), InvalidArgument);
    std::remove(bad.c_str());
  }

  TEST_CASE("spd loading rejects indefinite matrices") {
    const std::string path = temp_file("m.json", R"({"d": 2, "entries": [1, 2, 2, 1]})");
    CHECK_THROWS_AS(io::load_spd(path), Error);
    std::remove(path.c_str());
  }

  TEST_CASE("trial report json") {
    TrialReport r;
    r.suite_name = "x";
    r.tags = {"1", "2"};
    r.trials = 3;
    r.min_margin = std::numeric_limits<double>::infinity();
    const json j = io::to_json(r);
    CHECK(j["pass"] == true);
    CHECK(j["tags"].size() == 2);
    CHECK(j["min_margin"] == "inf");
    CHECK_FALSE(j.contains("error"));
  }
}
