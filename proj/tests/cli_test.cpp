// Copyright 2026 The rqinfra Authors
//
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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "commands.hpp"
#include "mpfr_oracle.hpp"

using namespace rqinfra;
using namespace rqinfra::cli;

namespace {

RunConfig with_disc(const std::string& d) {
  RunConfig c;
  c.disc = d;
  return c;
}

CommandResult run(const std::string& name, const RunConfig& c,
                  CommandResult (*body)(const RunConfig&)) {
  return run_guarded(name, c, body);
}

}  // namespace

TEST_CASE("regulator command") {
  SECTION("D = 8") {
    auto r = run("regulator", with_disc("8"), cmd_regulator);
    REQUIRE(r.exit_code == kExitOk);
    const double pell = rqtest::pell_regulator(8).regulator_narrow.to_double();
    CHECK(std::fabs(r.report["result"]["value"]["value"].get<double>() - pell) < 1);
    CHECK(std::fabs(r.report["result"]["value"]["value"].get<double>() - pell) < 1e-12);
    CHECK(r.report["config"]["disc"] == "8");
    CHECK(r.report["config"]["seed"] == 1);
    CHECK(r.report.contains("build_id"));
    CHECK(r.report["oracle"]["agrees"] == true);
    CHECK(r.report["provenance"].contains("value"));
    CHECK(r.report["provenance"].contains("oracle.reference"));
  }

  SECTION("D = 12 takes the classical path") {
    auto r = run("regulator", with_disc("12"), cmd_regulator);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["path"] == "classical");
    CHECK(r.report["result"]["path_reason"].get<std::string>().find("32 ln D") != std::string::npos);
  }

  SECTION("D = 7 is rejected") {
    auto r = run("regulator", with_disc("7"), cmd_regulator);
    CHECK(r.exit_code == kExitInput);
    CHECK(r.report["error"]["type"] == "input");
  }

  SECTION("garbage discriminant") {
    CHECK(run("regulator", with_disc("12x"), cmd_regulator).exit_code == kExitInput);
  }

  SECTION("cycle cap") {
    RunConfig c = with_disc("5569");
    c.cycle_cap = 5;
    auto r = run("regulator", c, cmd_regulator);
    CHECK(r.exit_code == kExitCap);
    CHECK(r.report["error"]["type"] == "cap_exceeded");
  }

  SECTION("forced quantum path records the success rate") {
    RunConfig c = with_disc("1001");
    c.force_quantum = true;
    auto r = run("regulator", c, cmd_regulator);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["path"] == "quantum");
    CHECK(r.report["result"]["success_rate"].get<double>() > 0);
    CHECK(r.report["result"]["attempts"].get<int>() ==
          static_cast<int>(r.report["result"]["diagnostics"].size()));
    auto again = run("regulator", c, cmd_regulator);
    CHECK(again.report.dump() == r.report.dump());
  }
}

TEST_CASE("pip command") {
  SECTION("unit form") {
    RunConfig c = with_disc("229");
    c.form = "1,15,-1";
    auto r = run("pip", c, cmd_pip);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["kind"] == "pip_distance");
    CHECK(r.report["result"]["value"]["value"].get<double>() == 0);
  }

  SECTION("principal forms match the cycle oracle") {
    auto disc = Discriminant::make(1001);
    auto cycle = enumerate_cycle(disc);
    for (std::size_t i = 0; i < cycle.forms.size(); i += 3) {
      RunConfig c = with_disc("1001");
      c.form = format_form(cycle.forms[i].form());
      auto r = run("pip", c, cmd_pip);
      REQUIRE(r.exit_code == kExitOk);
      CHECK(r.report["result"]["kind"] == "pip_distance");
      CHECK(std::fabs(r.report["result"]["value"]["value"].get<double>() - cycle.dists[i].value()) <
            0.125);
      CHECK(r.report["oracle"]["agrees"] == true);
    }
  }

  SECTION("non-principal form at D = 40") {
    RunConfig c = with_disc("40");
    c.form = "3,2,-3";
    auto r = run("pip", c, cmd_pip);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["kind"] == "not_principal");
    CHECK(r.report["oracle"]["agrees"] == true);
  }

  SECTION("supplied regulator") {
    RunConfig c = with_disc("8");
    c.form = "1,2,-1";
    c.regulator = "1.8";
    auto r = run("pip", c, cmd_pip);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["provenance"]["regulator"].get<std::string>().find("supplied") == 0);
  }

  SECTION("form errors") {
    RunConfig c = with_disc("40");
    c.form = "1,2,3";
    CHECK(run("pip", c, cmd_pip).exit_code == kExitInput);
    c.form = "229:1,15,-1";
    CHECK(run("pip", c, cmd_pip).exit_code == kExitInput);
    c.form.clear();
    CHECK(run("pip", c, cmd_pip).exit_code == kExitInput);
  }
}

TEST_CASE("verify-lemmas command") {
  SECTION("D = 60, three periods") {
    RunConfig c = with_disc("60");
    auto r = run("verify-lemmas", c, cmd_verify_lemmas);
    REQUIRE(r.exit_code == kExitOk);
    bool gated = false;
    for (const auto& cl : r.report["result"]["clauses"]) {
      CHECK(cl["status"] != "fail");
      if (cl["lemma"] == "2") gated = gated || cl["status"] == "precondition unmet";
    }
    CHECK(gated);
  }

  SECTION("D = 40, g of order 2") {
    RunConfig c = with_disc("40");
    auto r = run("verify-lemmas", c, cmd_verify_lemmas);
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["pip_order"] == "2");
    int lattice_clauses = 0;
    for (const auto& cl : r.report["result"]["clauses"]) {
      if (cl["lemma"] == "4" && cl["status"] == "pass") {
        CHECK(cl["checked"].get<int>() > 0);
        ++lattice_clauses;
      }
    }
    CHECK(lattice_clauses == 3);
  }

  SECTION("relaxed run reports counterexamples verbatim") {
    RunConfig c = with_disc("229");
    c.relaxed = true;
    auto r = run("verify-lemmas", c, cmd_verify_lemmas);
    CHECK(r.exit_code == kExitFail);
    bool found = false;
    for (const auto& cl : r.report["result"]["clauses"]) {
      if (cl["status"] == "fail") {
        CHECK(!cl["counterexamples"].empty());
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("simulate command") {
  SECTION("regulator, full mode") {
    RunConfig c = with_disc("229");
    c.which = "regulator";
    auto r = run("simulate", c, cmd_simulate);
    REQUIRE(r.report.contains("result"));
    CHECK(r.report["result"]["unitarity_error"].get<double>() < std::ldexp(1.0, -40));
    CHECK(r.report["result"]["bounds"]["which"] == "regulator");
    CHECK(r.report["result"]["peaks"].size() == r.report["result"]["target_set"]["size"].get<std::size_t>());
  }

  SECTION("sample mode reproduces bit for bit") {
    RunConfig c = with_disc("229");
    c.mode = "sample";
    c.samples = 8;
    c.seed = 99;
    auto a = run("simulate", c, cmd_simulate), b = run("simulate", c, cmd_simulate);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report["result"]["samples"].size() == 8);
    c.seed = 100;
    auto d = run("simulate", c, cmd_simulate);
    CHECK(d.report["result"]["samples"] != a.report["result"]["samples"]);
  }

  SECTION("pip, full mode at small q") {
    RunConfig c = with_disc("229");
    c.which = "pip";
    c.relaxed = true;
    c.q = 64;
    auto r = run("simulate", c, cmd_simulate);
    REQUIRE(r.report.contains("result"));
    CHECK(r.report["result"]["unitarity_error"].get<double>() < 1e-12);
    CHECK(r.report["result"]["bounds"]["which"] == "pip");
  }

  SECTION("pip, full mode beyond the cap") {
    RunConfig c = with_disc("229");
    c.which = "pip";
    c.relaxed = true;
    c.q = 1024;
    CHECK(run("simulate", c, cmd_simulate).exit_code == kExitCap);
  }

  SECTION("bad mode") {
    RunConfig c = with_disc("229");
    c.mode = "dense";
    CHECK(run("simulate", c, cmd_simulate).exit_code == kExitInput);
  }
}

TEST_CASE("resources command") {
  for (int k : {10, 20, 30}) {
    CAPTURE(k);
    RunConfig c = with_disc(Int(Int(1) << k).get_str());
    c.which = "both";
    auto r = run("resources", c, cmd_resources);
    REQUIRE(r.exit_code == kExitOk);
    const double log_d = k;
    const double log_ln_d = std::log2(k * std::log(2.0));
    const auto& reg = r.report["result"][0];
    const auto& pip = r.report["result"][1];
    CHECK(reg["formula_total_without_n"].get<double>() ==
          Catch::Approx(2 * log_d + 2 * log_ln_d + 7).epsilon(1e-12));
    CHECK(pip["formula_total_without_n"].get<double>() ==
          Catch::Approx(3 * log_d + 4 * log_ln_d).epsilon(1e-12));
    CHECK(reg["n_bound"].get<double>() == Catch::Approx(10.5 * log_d));
  }
  RunConfig c = with_disc("1024");
  c.which = "regulator";
  CHECK(render_table(run("resources", c, cmd_resources).report).find("total") != std::string::npos);
}

TEST_CASE("find-disc command") {
  RunConfig c;
  c.min_ratio = 32;
  c.count = 2;
  c.limit = "8000";
  auto r = run("find-disc", c, cmd_find_disc);
  REQUIRE(r.exit_code == kExitOk);
  const auto& list = r.report["result"]["discriminants"];
  REQUIRE(list.size() == 2);
  for (const auto& e : list) {
    const long d = std::stol(e["disc"].get<std::string>());
    const double pell = rqtest::pell_regulator(d).regulator_narrow.to_double();
    CHECK(pell / std::log(static_cast<double>(d)) > 32);
  }
  CHECK(list[0]["disc"] == "5569");

  c.limit = "100";
  CHECK(run("find-disc", c, cmd_find_disc).exit_code == kExitFail);
}
