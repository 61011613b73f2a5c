#include "doctest.h"
#include "oal/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oal;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parsing: comments, whitespace, overrides win") {
  RunConfig cfg = parse_run_config(
      "experiment = q-scan  # figure scan\n"
      "\n"
      "  I4 = 3   # recycling\n"
      "i3_grid = 0:2:5\n");
  CHECK(cfg.experiment == "q-scan");
  CHECK(cfg.values.at("I4") == "3");
  apply_overrides(cfg, {"I4=5", "f=100"});
  CHECK(cfg.values.at("I4") == "5");
  CHECK(cfg.values.at("f") == "100");
  auto grid = cfg.get_grid("i3_grid", "");
  REQUIRE(grid.size() == 5);
  CHECK(grid[2] == doctest::Approx(1.0));
}

TEST_CASE("malformed configs fail with field paths") {
  CHECK_THROWS_AS(parse_run_config("key value\n"), ConfigError);
  RunConfig cfg = parse_run_config("experiment = q-scan\nI4 = abc\n");
  CHECK_THROWS_WITH_AS(run_experiment(cfg, "test_out"),
                       doctest::Contains("config.I4"), ConfigError);
  RunConfig unk = parse_run_config("experiment = q-scan\nnot_a_key = 3\n");
  CHECK_THROWS_WITH_AS(run_experiment(unk, "test_out"),
                       doctest::Contains("not_a_key"), ConfigError);
  RunConfig bad = parse_run_config("experiment = frobnicate\n");
  CHECK_THROWS_AS(run_experiment(bad, "test_out"), ConfigError);
}

TEST_CASE("rerunning an experiment byte-reproduces the CSV") {
  RunConfig cfg = parse_run_config(
      "experiment = q-scan\ni3_grid = 0.5,1\nfock_truncation = 10\n");
  auto r1 = run_experiment(cfg, "test_out/a");
  auto r2 = run_experiment(cfg, "test_out/b");
  CHECK(slurp(r1.csv_paths[0]) == slurp(r2.csv_paths[0]));
  CHECK(r1.points_failed == 0);
  // metadata exists and names the experiment
  CHECK(slurp(r1.meta_path).find("\"experiment\": \"q-scan\"") != std::string::npos);
}

TEST_CASE("csv header carries the documented column order") {
  RunConfig cfg = parse_run_config(
      "experiment = q-scan\ni3_grid = 1\nfock_truncation = 8\n");
  auto r = run_experiment(cfg, "test_out/cols");
  std::istringstream is(slurp(r.csv_paths[0]));
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "I3,n_bar,n_bar_over_n0f,Q,g2_0,pop_g3,pop_e3,pop_g4,pop_e4,R,ok,error");
}

TEST_CASE("sc-scan completes and reports normalized intensity") {
  RunConfig cfg = parse_run_config("experiment = sc-scan\ni3_grid = 0:6:13\n");
  auto r = run_experiment(cfg, "test_out/sc");
  CHECK(r.points_total == 13);
  CHECK(r.points_failed == 0);
  std::string csv = slurp(r.csv_paths[0]);
  CHECK(csv.rfind("I3,alpha2,alpha2_over_n0f,ok,error", 0) == 0);
}
