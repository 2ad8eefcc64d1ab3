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

// Subcommands of the rqinfra tool. Each returns an exit code and a JSON
// report; the tool only parses flags and prints.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "rqinfra/oracle.hpp"

namespace rqinfra::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitCap = 4;

struct RunConfig {
  std::string disc;                      // decimal; kept as text for big values
  std::uint64_t seed = 1;
  long precision_frac_bits = 64;
  std::optional<std::int64_t> q;
  std::uint64_t cycle_cap = default_cycle_cap();
  int max_attempts = 64;
  int max_verify_failures = 4;
  bool relaxed = false;
  bool force_quantum = false;
  bool run_oracle = true;
  std::string mode = "full";             // simulate: full | sample
  std::string which = "regulator";       // simulate, resources: regulator | pip
  std::string form;                      // pip, simulate pip, verify-lemmas
  std::string regulator;                 // pip: R+ as a decimal; computed when empty
  int samples = 16;                      // simulate sample mode
  int bound_forms = 0;                   // simulate pip sample mode; 0 = samples
  int peaks = 0;                         // simulate: top bins reported; 0 = |Y|
  bool bounds = true;                    // simulate: run the bound report
  int periods = 3;                       // verify-lemmas
  double min_ratio = 5;                  // find-disc
  std::string start = "5";               // find-disc
  std::string limit = "100000";          // find-disc
  int count = 20;                        // find-disc
  std::string output;
};

Json config_json(const RunConfig& config, const std::string& command);

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
};

CommandResult cmd_regulator(const RunConfig& config);
CommandResult cmd_pip(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_verify_lemmas(const RunConfig& config);
CommandResult cmd_resources(const RunConfig& config);
CommandResult cmd_find_disc(const RunConfig& config);

/// Runs body, mapping library errors to exit codes 3 (input, sizing,
/// refinement), 4 (cap exceeded) and 1 (invariant violations) with an
/// error report.
CommandResult run_guarded(const std::string& command, const RunConfig& config,
                          const std::function<CommandResult(const RunConfig&)>& body);

/// Human-readable rendering of a report.
std::string render_table(const Json& report);

std::string build_id();

}  // namespace rqinfra::cli
