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

// Brute-force ground truth by exhaustive cycle walking.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rqinfra/distance.hpp"

namespace rqinfra {

inline constexpr std::uint64_t kDefaultCycleCap = 10'000'000;
inline constexpr long kOraclePrecisionBits = 128;

/// RQI_CYCLE_CAP from the environment, else kDefaultCycleCap.
std::uint64_t default_cycle_cap();

struct PrincipalCycle {
  Discriminant disc;
  std::vector<PositiveReducedForm> forms;  // R_A in walking order, forms[0] = unit
  std::vector<ApproxReal> dists;           // dists[0] = 0
  ApproxReal regulator_narrow;             // total distance of the full rho cycle
  std::size_t full_length = 0;             // rho steps in the full cycle
  long precision_bits = 0;

  std::map<Form, std::size_t, FormLess> index;  // form -> position in forms

  std::optional<std::size_t> index_of(const Form& f) const;
  double regulator() const { return regulator_narrow.value(); }
};

/// Throws CapExceeded when the full cycle is longer than cap rho steps.
PrincipalCycle enumerate_cycle(const Discriminant& disc, std::uint64_t cap = default_cycle_cap(),
                               long precision_bits = kOraclePrecisionBits);

/// R+ to within 2^-target_bits.
ApproxReal regulator_classical(const Discriminant& disc, long target_bits,
                               std::uint64_t cap = default_cycle_cap());

struct PrincipalTest {
  bool is_principal = false;
  std::optional<ApproxReal> dist;
};

PrincipalTest principal_test_bruteforce(const ReducedForm& g, const PrincipalCycle& cycle);
PrincipalTest principal_test_bruteforce(const ReducedForm& g,
                                        std::uint64_t cap = default_cycle_cap());

/// Reduce x into [0, R+) using exact comparisons.
ApproxReal mod_regulator(ApproxReal x, const ApproxReal& regulator);

struct OrderAndS {
  Int n;
  ApproxReal S;  // in nats, in [0, R+)
  PositiveReducedForm reduced_power;  // reduced representative of g^n
};

/// Order n of the class of g, and the distance S of g^n (positions relative
/// to the unreduced power, so S = delta(g) for principal g).
OrderAndS order_and_S(const ReducedForm& g, const PrincipalCycle& cycle,
                      std::uint64_t max_order = 1'000'000);

struct ClassGroupInfo {
  std::vector<std::vector<ReducedForm>> cycles;  // rho cycles of all reduced forms
  std::size_t principal_cycle = 0;
  std::size_t narrow_class_number = 0;
  std::size_t class_number = 0;  // wide
  bool norm_minus_one_unit = false;
};

/// Partition of all primitive reduced forms into rho cycles (one per narrow class).
ClassGroupInfo class_group_bruteforce(const Discriminant& disc,
                                      std::uint64_t cap = default_cycle_cap());

/// JSON-lines dump, one record per R_A form: {a, b, c, dist_mantissa, dist_frac_bits}.
std::string cycle_dump_jsonl(const PrincipalCycle& cycle);

}  // namespace rqinfra
