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

// Exhaustive scans of the block structure of Reg and PIP, and the search
// for discriminants with a large regulator.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rqinfra/oracle.hpp"
#include "rqinfra/qsim.hpp"

namespace rqinfra {

struct ClauseResult {
  std::string lemma;  // "1", "2" or "4"
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  double extreme = 0;  // worst measured value
  double bound = 0;
  std::vector<std::string> counterexamples;  // first few, verbatim
};

struct LemmaReport {
  Int disc;
  double regulator = 0;
  double ln_d = 0;
  int periods = 0;
  std::int64_t q = 0;
  bool precondition_met = false;  // R+ > 5 ln D
  std::optional<std::string> pip_form;
  std::optional<Int> pip_order;
  std::optional<double> pip_S;
  std::vector<ClauseResult> clauses;

  bool passed() const;
};

struct LemmaConfig {
  int periods = 3;
  bool relaxed = false;  // check Lemma 2 clauses even when R+ <= 5 ln D
  std::uint64_t cycle_cap = default_cycle_cap();
  std::size_t max_counterexamples = 20;
};

/// Lemmas 1 and 2 on the Reg table over `periods` laps.
LemmaReport verify_reg_lemmas(const Discriminant& disc, const LemmaConfig& config);

/// Lemma 4 on the PIP table of g: shift by (n, -4S) maps rows onto rows,
/// rows off the lattice meet other classes, and the run clauses as in Lemma 2.
/// Appends to report.
void verify_pip_lemma(const ReducedForm& g, const LemmaConfig& config, LemmaReport& report);

struct DiscCandidate {
  Int disc;
  double regulator;
  double ratio;  // R+ / ln D
};

/// Discriminants D >= start, in increasing order, with R+ / ln D > min_ratio,
/// until `count` are found or D exceeds `limit`. Cycles beyond the cap are
/// skipped.
std::vector<DiscCandidate> find_discriminants(const Int& start, double min_ratio, std::size_t count,
                                              const Int& limit,
                                              std::uint64_t cycle_cap = default_cycle_cap());

}  // namespace rqinfra
