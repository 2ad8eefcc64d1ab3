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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "commands.hpp"

using rqinfra::cli::CommandResult;
using rqinfra::cli::RunConfig;

namespace {

void common_flags(CLI::App* sub, RunConfig& c, bool needs_disc = true) {
  auto* d = sub->add_option("--disc", c.disc, "discriminant");
  if (needs_disc) d->required();
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--precision", c.precision_frac_bits, "fractional bits of reported distances");
  sub->add_option("--q", c.q, "override q (power of two)");
  sub->add_option("--cycle-cap", c.cycle_cap, "largest cycle walked")->envname("RQI_CYCLE_CAP");
  sub->add_flag("--relaxed", c.relaxed, "admit q and D outside the theorem preconditions");
  sub->add_option("--output,-o", c.output, "also write the JSON report here");
}

void recover_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--max-attempts", c.max_attempts, "sample pairs before giving up");
  sub->add_option("--max-verify-failures", c.max_verify_failures,
                  "failed verifications before not_principal");
  sub->add_flag("--force-quantum", c.force_quantum, "skip the small-regulator classical path");
  sub->add_flag("!--no-oracle", c.run_oracle, "skip the classical cross-check");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regulator and principal-ideal algorithms for real quadratic fields, by exact "
               "simulation"};
  app.set_config("--config", "", "read flags from a TOML or INI file");
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));

  RunConfig c;
  auto* reg = app.add_subcommand("regulator", "compute R+");
  common_flags(reg, c);
  recover_flags(reg, c);

  auto* pip = app.add_subcommand("pip", "decide principality and compute the distance of a form");
  common_flags(pip, c);
  recover_flags(pip, c);
  pip->add_option("--form", c.form, "reduced form a,b,c or D:a,b,c")->required();
  pip->add_option("--regulator", c.regulator, "R+ to within 1; computed when omitted");

  auto* sim = app.add_subcommand("simulate", "exact distribution of a dual subroutine");
  common_flags(sim, c);
  sim->add_option("--which", c.which)->check(CLI::IsMember({"regulator", "pip"}));
  sim->add_option("--mode", c.mode)->check(CLI::IsMember({"full", "sample"}));
  sim->add_option("--form", c.form, "form g for pip (default: a principal form)");
  sim->add_option("--samples", c.samples, "draws in sample mode");
  sim->add_option("--bound-forms", c.bound_forms, "measured forms for the sampled pip bound");
  sim->add_option("--peaks", c.peaks, "top bins to report (default |Y|)");
  sim->add_flag("!--no-bounds", c.bounds, "skip the probability bound report");

  auto* lem = app.add_subcommand("verify-lemmas", "scan the block structure of Reg and PIP");
  common_flags(lem, c);
  lem->add_option("--periods", c.periods, "periods scanned");
  lem->add_option("--form", c.form, "form g for the PIP scan (default: non-principal if any)");

  auto* res = app.add_subcommand("resources", "qubit counts");
  res->add_option("--disc", c.disc, "discriminant (any integer >= 2)")->required();
  res->add_option("--which", c.which)->check(CLI::IsMember({"regulator", "pip", "both"}));
  res->add_option("--output,-o", c.output, "also write the JSON report here");

  auto* find = app.add_subcommand("find-disc", "discriminants with R+ / ln D above a ratio");
  common_flags(find, c, false);
  find->add_option("--min-ratio", c.min_ratio);
  find->add_option("--start", c.start);
  find->add_option("--limit", c.limit);
  find->add_option("--count", c.count);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rqinfra::cli::kExitInput;
  }

  using Body = CommandResult (*)(const RunConfig&);
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Body body = name == "regulator"       ? rqinfra::cli::cmd_regulator
              : name == "pip"           ? rqinfra::cli::cmd_pip
              : name == "simulate"      ? rqinfra::cli::cmd_simulate
              : name == "verify-lemmas" ? rqinfra::cli::cmd_verify_lemmas
              : name == "resources"     ? rqinfra::cli::cmd_resources
                                        : rqinfra::cli::cmd_find_disc;
  CommandResult r = rqinfra::cli::run_guarded(name, c, body);

  const std::string text = r.report.dump(2) + "\n";
  if (format == "table") {
    std::cout << rqinfra::cli::render_table(r.report);
  } else {
    std::cout << text;
  }
  if (!c.output.empty()) {
    std::ofstream out(c.output);
    if (!out) {
      std::cerr << "cannot write " << c.output << '\n';
      return rqinfra::cli::kExitInput;
    }
    out << text;
  }
  return r.exit_code;
}
