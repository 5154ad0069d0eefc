// Copyright 2026 The theta Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "theta/error.hpp"
#include "theta/harness.hpp"

using namespace theta;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("theta_test_" + name)).string();
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.p = 7;
  cfg.n = 3;
  cfg.max_deg = 1;
  return cfg;
}

}  // namespace

TEST_CASE("table rows, flags and order") {
  const RunConfig cfg = small_config();
  const ThetaEngine e(cfg.make_field());
  const auto rows = build_table(e, cfg);
  // monic r of degree <= 1 reduce to 8 distinct classes, times 3 indices
  CHECK(rows.size() == 24);
  bool found = false;
  for (const auto& row : rows) {
    if (row.r == "0,1" && row.i == 1) {
      found = true;
      CHECK(row.flags == "i=i'");
      CHECK(row.rho0.is_zero());
    }
    const auto z = row.rho0.complex_eval();
    CHECK(row.rho0_float == z);
  }
  CHECK(found);
  CHECK(rows.front().r == "1");
}

TEST_CASE("table JSON round trip and CSV") {
  const RunConfig cfg = small_config();
  const ThetaEngine e(cfg.make_field());
  const auto rows = build_table(e, cfg);
  const nlohmann::json j = table_to_json(e.field(), rows);
  CHECK(j["schema"] == 1);
  const auto back = table_from_json(e, nlohmann::json::parse(j.dump()));
  CHECK(table_to_json(e.field(), back).dump() == j.dump());
  const std::string csv = table_to_csv(rows);
  CHECK(csv.rfind("r,i,i_prime,R,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
}

TEST_CASE("empty range and determinism") {
  RunConfig cfg = small_config();
  cfg.max_deg = -1;
  std::ostringstream a;
  std::ostringstream err;
  CHECK(cmd_table(cfg, a, err) == 0);
  CHECK(nlohmann::json::parse(a.str())["rows"].empty());
  cfg.max_deg = 2;
  cfg.format = "csv";
  std::ostringstream b1;
  std::ostringstream b8;
  CHECK(cmd_table(cfg, b1, err) == 0);
  cfg.jobs = 8;
  CHECK(cmd_table(cfg, b8, err) == 0);
  CHECK(b1.str() == b8.str());
}

TEST_CASE("config validation") {
  RunConfig cfg = small_config();
  cfg.suites = {"nope"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.jobs = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.n = 4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.format = "xml";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(run_suite("nope", ThetaEngine(small_config().make_field()), SuiteOptions{}), ConfigError);
}

TEST_CASE("cache: miss, hit, corrupt file") {
  const std::string path = temp_path("cache.json");
  std::filesystem::remove(path);
  const FieldCtx k = FieldCtx::create(7, 1, 3);
  CycNum cold;
  {
    ThetaEngine e(k);
    JsonCache cache(path, field_key(k), e.cyc());
    e.set_store(&cache);
    cold = e.c_full(Poly::x(), 2);
    cache.flush();
    CHECK(cache.size() >= 1);
  }
  {
    ThetaEngine e(k);
    JsonCache cache(path, field_key(k), e.cyc());
    CHECK(cache.size() >= 1);
    const auto hit = cache.load(to_string(Poly::x()) + "|2");
    REQUIRE(hit.has_value());
    CHECK(*hit == cold);
    e.set_store(&cache);
    CHECK(e.c_full(Poly::x(), 2) == cold);
  }
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  {
    ThetaEngine e(k);
    JsonCache cache(path, field_key(k), e.cyc());
    CHECK(cache.size() == 0);
    e.set_store(&cache);
    CHECK(e.c_full(Poly::x(), 2) == cold);
  }
  {
    std::ofstream f(path);
    f << R"({"schema": 99, "entries": {}})";
  }
  {
    ThetaEngine e(k);
    JsonCache cache(path, field_key(k), e.cyc());
    CHECK(cache.size() == 0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("suites at desk scale") {
  const ThetaEngine e(FieldCtx::create(3, 1, 2));
  SuiteOptions opt;
  const SuiteReport pellet = run_suite("pellet", e, opt);
  CHECK(pellet.passed());
  CHECK(pellet.cases == 3 + 9 + 27 + 81);
  const SuiteReport dh = run_suite("dh", e, opt);
  CHECK(dh.passed());
  CHECK(dh.cases > 0);
  const ThetaEngine f(FieldCtx::create(7, 1, 3));
  const SuiteReport a = run_suite("theorem1", f, opt);
  const SuiteReport b = run_suite("theorem1", f, opt);
  CHECK(a.passed());
  CHECK(a.cases == b.cases);
  CHECK(a.notes == b.notes);
  for (const auto& rec : a.rho_values) CHECK(rho_integrality(f, rec));
}

TEST_CASE("verify report") {
  RunConfig cfg = small_config();
  cfg.suites = {"special-values", "hecke-fin"};
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_verify(cfg, out, err) == 0);
  CHECK(out.str().find("[PASS] special-values") != std::string::npos);
  CHECK(out.str().find("result: PASS") != std::string::npos);
}
