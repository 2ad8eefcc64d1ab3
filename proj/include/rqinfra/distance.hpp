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

// Distances along the infrastructure of reduced forms, giant steps, and the
// two period functions Reg(x) and PIP(x, y).

#pragma once

#include "rqinfra/approx_real.hpp"
#include "rqinfra/forms.hpp"

namespace rqinfra {

struct PrecisionBudget {
  long delta_bits = 0;      // ceil(log2 D)
  long op_count_bound = 0;  // 10 * delta_bits
  long per_log_bits = 64;   // every logarithm is computed to 2^-per_log_bits
  bool relaxed = false;     // admit x >= D^2

  /// F = max(64, ceil(log2(80 log2 D)) + 32), raised to min_frac_bits.
  static PrecisionBudget for_disc(const Discriminant& disc, long min_frac_bits = 0,
                                  bool relaxed = false);
};

struct WalkState {
  PositiveReducedForm form;
  ApproxReal dist;
};

/// Distance covered by one rho step applied to f: (1/2) ln |(b + sqrt D) / (b - sqrt D)|.
/// Positive for reduced forms; may be negative during reduction.
ApproxReal step_distance(const Form& f, long precision_bits);

inline ApproxReal step_distance(const ReducedForm& f, long precision_bits) {
  return step_distance(f.form(), precision_bits);
}

WalkState unit_state(const Discriminant& disc);

/// The next / previous form of the same cycle with positive first
/// coefficient (rho^2 / rho^-2), with distance updated.
WalkState next_state(const WalkState& s, long precision_bits);
WalkState prev_state(const WalkState& s, long precision_bits);

struct ReducedWithDistance {
  PositiveReducedForm form;
  ApproxReal correction;  // summed step distances, signed
  int steps;
};

/// reduce followed by to_positive_rep, tracking the distance of every step.
ReducedWithDistance reduce_tracked(const Form& f, long precision_bits);

/// Compose, reduce, and add the reduction correction to s1.dist + s2.dist.
WalkState giant_step(const WalkState& s1, const WalkState& s2, const PrecisionBudget& budget);

/// Reg(x): the last principal form with positive first coefficient whose
/// approximate distance is at most x/4.
WalkState form_left_of(const Discriminant& disc, const Int& x_quarters,
                       const PrecisionBudget& budget);

/// base^x, reduced, by square-and-multiply. dist accumulates x * base.dist
/// plus every reduction correction. With base.dist = 0 this is the position
/// of the reduced representative relative to the unreduced power.
WalkState power_form(const WalkState& base, const Int& x, const PrecisionBudget& budget);
WalkState power_form(const PositiveReducedForm& g, const Int& x, const PrecisionBudget& budget);

/// PIP(x, y): the last positive form of the cycle of g^x whose position is
/// at most y/4, positions measured relative to the unreduced power g^x
/// (so power_form(g, x) sits at its own dist). The returned dist is that
/// relative position.
WalkState pip_eval(const PositiveReducedForm& g, const Int& x, const Int& y,
                   const PrecisionBudget& budget);

}  // namespace rqinfra
