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

// Classical post-processing of dual samples and the end-to-end regulator and
// principal-ideal pipelines.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rqinfra/distance.hpp"
#include "rqinfra/oracle.hpp"

namespace rqinfra {

/// Nearest integer to num / den, ties to even (den != 0).
Int round_half_even(const Int& num, const Int& den);
/// Nearest integer to x * k / 2^shift, ties to even, from the midpoint of x.
Int round_half_even(const ApproxReal& x, const Int& k, unsigned long shift);

/// Convergent z1/z2 of y1/y2 with 1 <= z1, z2 <= floor(sqrt(q) / 2) and
/// |y1/y2 - z1/z2| <= 1/(2 z2^2); among those, the largest z2. Requires
/// 0 < y1 <= y2.
std::optional<std::pair<Int, Int>> cf_recover(const Int& y1, const Int& y2, const Int& q);
Int cf_window(const Int& q);

struct PipRecovery {
  ApproxReal s_prime;  // p R+ / 8q, in [0, R+)
  Int z2, z2p;
  Int k1, k2;
  Int p;
};

struct PipRecoverOutcome {
  std::optional<PipRecovery> value;
  std::string failure;  // set when value is empty
  Int z2, z2p;
};

/// z2 = [y2 R+ / 2q], z2' = [y2' R+ / 2q], k1 z2 + k2 z2' = 1,
/// p = y1 k1 + y1' k2 mod 8q. q must be a power of two.
PipRecoverOutcome pip_recover(std::pair<std::int64_t, std::int64_t> y,
                              std::pair<std::int64_t, std::int64_t> y_prime, std::int64_t q,
                              const ApproxReal& r_plus);

/// No cycle point equal to the anchor form lies in the coarse window.
class RefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance of anchor.form nearest to target within [target - 1, target + 1],
/// walked with step distances accurate to 2^-tolerance_bits.
ApproxReal refine_distance(const WalkState& anchor, const ApproxReal& target, long tolerance_bits);

/// Position of form within distance `radius` of target, if any (nearest one).
std::optional<ApproxReal> find_form_near(const PositiveReducedForm& form, const ApproxReal& target,
                                         const ApproxReal& radius, long tolerance_bits);

// ---------------------------------------------------------------------------

enum class RecoveryKind { kRegulator, kPipDistance, kNotPrincipal, kFail };
std::string to_string(RecoveryKind kind);

struct Attempt {
  std::vector<std::pair<std::int64_t, std::int64_t>> samples;  // (y, 0) in 1-D
  std::optional<std::pair<Int, Int>> z;
  std::string outcome;  // "ok" or the failing step
  std::string detail;
};

struct OracleCheck {
  std::string source;  // which oracle produced the reference
  double reference = 0;
  double difference = 0;
  bool agrees = false;
};

struct RecoveryResult {
  RecoveryKind kind = RecoveryKind::kFail;
  std::string path;                    // "classical" or "quantum"
  std::optional<ApproxReal> value;
  std::optional<Int> integer_value;    // nearest integer to value
  std::optional<std::pair<Int, Int>> z_pair;
  int attempts = 0;                    // sample pairs drawn
  int successes = 0;                   // pairs that produced the verdict
  std::vector<Attempt> diagnostics;
  std::optional<OracleCheck> oracle;
  std::int64_t q = 0;
};

struct RecoverConfig {
  std::uint64_t seed = 1;
  int max_attempts = 64;
  int max_verify_failures = 4;
  std::optional<std::int64_t> q;
  bool relaxed = false;
  bool force_quantum = false;  // skip the small-regulator classical path
  long tolerance_bits = 64;
  std::uint64_t cycle_cap = default_cycle_cap();
  bool run_oracle = true;
};

/// Whether R+ < factor * ln D, decided by walking the cycle at most that far.
/// When it is, the walked R+ is returned.
std::optional<ApproxReal> regulator_below(const Discriminant& disc, long factor, long bits);

RecoveryResult regulator_pipeline(const Discriminant& disc, const RecoverConfig& config);

RecoveryResult pip_pipeline(const ReducedForm& g, const ApproxReal& r_plus,
                            const RecoverConfig& config);

}  // namespace rqinfra
