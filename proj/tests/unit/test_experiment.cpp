/*
 * Copyright 2026 The ccopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ccopt/error.hpp"
#include "ccopt/experiment.hpp"
#include "ccopt/summary.hpp"

using namespace ccopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ccopt_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string tiny_json(const std::string& algorithms, const std::string& seeds) {
  return R"({
    "layout": {"n_macro_sites": 2, "inter_site_distance_m": 500, "n_small_cells": 3,
               "n_ues": 20, "seed": 7},
    "population_size": 8, "neighborhood_size": 3, "n_iter": 3,
    "bo": {"n_init": 8, "n_iter": 2, "restarts": 4, "local_steps": 2},
    "random_search": {"budget": 11},
    "algorithms": )" + algorithms + R"(, "seeds": )" + seeds + "}";
}

ExperimentConfig tiny(const std::string& algorithms, const std::string& seeds, const fs::path& out) {
  auto c = parse_experiment_config(tiny_json(algorithms, seeds));
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const auto d = parse_experiment_config("{}");
  CHECK(d.population_size == 200);
  CHECK(d.n_iter == 1000);
  CHECK(d.seeds == std::vector<std::uint64_t>{1});
  CHECK(d.algorithms == known_algorithms());
  CHECK(d.effective_bo_n_init() == 200);
  CHECK(d.effective_bo_n_iter() == 1000);
  CHECK(d.effective_random_search_budget() == 1200);
  CHECK(d.threshold_mode == ThresholdMode::kFixed);

  const auto c = parse_experiment_config(
      R"({"objective": {"alpha": 0.2, "beta_dl": 1.0, "threshold_mode": "p10_from_rate_run"},
          "de": {"scale_factor": 0.5}, "seeds": [3, 4], "workers": 2})");
  CHECK(c.objective.alpha == 0.2);
  CHECK(c.objective.beta_dl == 1.0);
  CHECK(c.threshold_mode == ThresholdMode::kP10FromRateRun);
  CHECK(c.de.scale_factor == 0.5);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(c.workers == 2);
}

TEST_CASE("config schema errors") {
  CHECK_THROWS_AS(parse_experiment_config(R"({"populaton_size": 10})"), SchemaError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"layout": {"n_ue": 10}})"), SchemaError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"n_iter": "many"})"), SchemaError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"seeds": 3})"), SchemaError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"objective": {"threshold_mode": "p50"}})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_experiment_config("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"algorithms": ["simulated_annealing"]})").validate(),
                  ConfigError);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/ccopt.json"), Error);
}

TEST_CASE("relative layout file resolves against the config directory") {
  const auto c = parse_experiment_config(R"({"layout": {"file": "layouts/a.json"}})", "/data/cfg");
  REQUIRE(c.layout_file.has_value());
  CHECK(*c.layout_file == fs::path("/data/cfg/layouts/a.json"));
}

TEST_CASE("default-only experiment writes a single summary row and no trace") {
  const auto out = scratch("default_only");
  const auto records = run_experiment(tiny(R"(["default_3gpp"])", "[1]", out));
  REQUIRE(records.size() == 1);
  CHECK_FALSE(fs::exists(out / trace_file_name("default_3gpp", 1)));
  CHECK(fs::exists(out / sinr_file_name("default_3gpp", 1)));
  CHECK(fs::exists(out / config_file_name("default_3gpp", 1)));
  const auto s = summarize(out);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].algorithm == "default_3gpp");
  CHECK(s.rows[0].runs == 1);
  CHECK(s.rows[0].f_total == doctest::Approx(records[0].result.best_value.f_total).epsilon(1e-9));
  const auto table = read_csv(out / "summary.csv");
  CHECK(table.rows.size() == 1);
}

TEST_CASE("five seeds give five traces per algorithm and re-runs are byte-identical") {
  const auto a = scratch("seeds_a");
  const auto b = scratch("seeds_b");
  const std::string algs = R"(["proposed", "bo_ei", "random_search", "default_3gpp"])";
  run_experiment(tiny(algs, "[1, 2, 3, 4, 5]", a));
  run_experiment(tiny(algs, "[1, 2, 3, 4, 5]", b));
  for (const std::string alg : {"proposed", "bo_ei", "random_search"}) {
    for (std::uint64_t s = 1; s <= 5; ++s) CHECK(fs::exists(a / trace_file_name(alg, s)));
  }
  const auto trace = read_csv(a / trace_file_name("proposed", 1));
  CHECK(trace.rows.size() == 3);
  CHECK(read_csv(a / trace_file_name("random_search", 2)).rows.size() == 11);
  CHECK(read_csv(a / trace_file_name("bo_ei", 2)).rows.size() == 2);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    CHECK_MESSAGE(read_file(e.path()) == read_file(b / e.path().filename()), e.path().filename());
    ++compared;
  }
  CHECK(compared >= 5 * 7 + 4);
  const auto s = summarize(a);
  REQUIRE(s.rows.size() == 4);
  for (const auto& row : s.rows) CHECK(row.runs == 5);
}

TEST_CASE("summarize reports missing files") {
  const auto out = scratch("missing");
  run_experiment(tiny(R"(["random_search"])", "[1]", out));
  fs::remove(out / sinr_file_name("random_search", 1));
  try {
    summarize(out);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(sinr_file_name("random_search", 1)) != std::string::npos);
  }
  CHECK_THROWS_AS(summarize(scratch("empty")), Error);
}

TEST_CASE("iterations to 95 percent") {
  CHECK_FALSE(iterations_to_fraction({}).has_value());
  CHECK(iterations_to_fraction({1.0}) == 1);
  CHECK(iterations_to_fraction({0.0, 0.5, 0.96, 1.0}) == 3);
  CHECK(iterations_to_fraction({0.0, 0.95, 1.0}) == 2);
  CHECK(iterations_to_fraction({2.0, 2.0, 2.0}) == 1);
  CHECK(iterations_to_fraction({0.0, 0.1, 0.2, 1.0}, 0.5) == 4);
}

TEST_CASE("command line exit codes") {
  const char* cli = std::getenv("CCOPT_CLI");
  if (!cli) {
    MESSAGE("CCOPT_CLI not set; skipping");
    return;
  }
  const auto dir = scratch("cli");
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(cli) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  {
    std::ofstream(dir / "bad.json") << R"({"unknown_key": 1})";
    std::ofstream(dir / "ok.json") << tiny_json(R"(["default_3gpp", "random_search"])", "[1]");
  }
  CHECK(run("run " + (dir / "bad.json").string()) == 1);
  CHECK(run("run " + (dir / "missing.json").string()) != 0);
  CHECK(run("run " + (dir / "ok.json").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(run("summarize " + (dir / "out").string()) == 0);
  CHECK(run("summarize " + (dir / "nothing").string()) == 2);
  CHECK(run("validate-neighborhoods " + (dir / "ok.json").string()) == 0);
  CHECK(read_file(dir / "log.txt").find("mean_capture") != std::string::npos);
  CHECK(run("frobnicate") != 0);
}
