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

#include "rqinfra/distance.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rqinfra/error.hpp"

namespace rqinfra {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// ln 2 - 1/4, the smallest admissible approximate gap between successive
// positive forms of a cycle.
const ApproxReal& min_gap() {
  static const ApproxReal gap = approx_ln(Int(2), 64) - ApproxReal(1, 2);
  return gap;
}

void check_gap(const ApproxReal& inc, const Form& f) {
  if (compare(inc, min_gap()) <= 0) {
    throw InvariantViolation("distance gap below ln 2 - 1/4 after " + format_form(f));
  }
}

void check_size(const Int& x, const PrecisionBudget& budget, const Discriminant& disc,
                const char* what) {
  if (x < 0) throw InputError(std::string(what) + " must be non-negative");
  if (!budget.relaxed && x >= disc.value() * disc.value()) {
    throw SizingError(std::string(what) + " = " + to_string(x) +
                      " is not below D^2; the precision budget is sized for x < D^2");
  }
}

void check_error(const WalkState& s) {
  if (!s.dist.err_below(1, 3)) {
    throw SizingError("accumulated distance error reached 1/8 at " + format_form(s.form.form()));
  }
}

}  // namespace

PrecisionBudget PrecisionBudget::for_disc(const Discriminant& disc, long min_frac_bits,
                                          bool relaxed) {
  PrecisionBudget b;
  Int d = disc.value();
  b.delta_bits = bit_length(d - 1);  // ceil(log2 D) for D >= 2
  b.op_count_bound = 10 * b.delta_bits;
  long needed = bit_length(Int(8 * b.op_count_bound - 1)) + 32;
  b.per_log_bits = std::max({64L, needed, min_frac_bits});
  b.relaxed = relaxed;
  return b;
}

ApproxReal step_distance(const Form& f, long precision_bits) {
  const Int& b = f.b();
  const Discriminant& disc = f.disc();
  long w = precision_bits + 5 + bit_length(abs_int(b) + disc.floor_sqrt() + 1);
  Int s = isqrt(shift_left(disc.value(), 2 * w));  // floor(sqrt(D) 2^w)
  Int bw = shift_left(b, w);
  Int num = abs_int(s + bw);
  Int den = abs_int(bw - s);
  // Each of ln(num), ln(den) is off by less than 2^-(precision+4) from the
  // exact quotient; approx_ln adds 2^-(precision+2); halving halves it all.
  ApproxReal r = approx_ln(num, den, precision_bits + 2).halved();
  return ApproxReal(r.mantissa(), r.frac_bits(), 8);
}

WalkState unit_state(const Discriminant& disc) { return {unit_form(disc), ApproxReal()}; }

WalkState next_state(const WalkState& s, long precision_bits) {
  const ReducedForm& f = s.form.reduced();
  ReducedForm f1 = rho(f);
  ApproxReal inc = step_distance(f, precision_bits) + step_distance(f1, precision_bits);
  check_gap(inc, f.form());
  return {PositiveReducedForm::make(rho(f1)), s.dist + inc};
}

WalkState prev_state(const WalkState& s, long precision_bits) {
  ReducedForm p1 = rho_inv(s.form.reduced());
  ReducedForm p2 = rho_inv(p1);
  ApproxReal inc = step_distance(p2, precision_bits) + step_distance(p1, precision_bits);
  check_gap(inc, p2.form());
  return {PositiveReducedForm::make(p2), s.dist - inc};
}

ReducedWithDistance reduce_tracked(const Form& f, long precision_bits) {
  ApproxReal corr;
  Reduction r = reduce_visit(f, [&](const Form& g) { corr += step_distance(g, precision_bits); });
  int steps = r.steps;
  if (r.form.a() < 0) {
    corr += step_distance(r.form, precision_bits);
    ++steps;
    return {PositiveReducedForm::make(rho(r.form)), corr, steps};
  }
  return {PositiveReducedForm::make(r.form), corr, steps};
}

WalkState giant_step(const WalkState& s1, const WalkState& s2, const PrecisionBudget& budget) {
  Form composite = compose(s1.form.form(), s2.form.form());
  ReducedWithDistance r = reduce_tracked(composite, budget.per_log_bits);
  double ln_d = std::log(s1.form.disc().value().get_d());
  if (std::fabs(r.correction.value()) > ln_d + 1e-9) {
    throw InvariantViolation("giant step correction exceeds ln D at " + format_form(composite));
  }
  return {r.form, s1.dist + s2.dist + r.correction};
}

WalkState form_left_of(const Discriminant& disc, const Int& x, const PrecisionBudget& budget) {
  check_size(x, budget, disc, "x");
  const long bits = budget.per_log_bits;
  auto fits = [&](const WalkState& s) { return s.dist.le_dyadic(x, 2); };

  std::vector<WalkState> powers{next_state(unit_state(disc), bits)};
  while (fits(powers.back())) powers.push_back(giant_step(powers.back(), powers.back(), budget));

  std::optional<WalkState> acc;
  for (auto it = powers.rbegin(); it != powers.rend(); ++it) {
    WalkState cand = acc ? giant_step(*acc, *it, budget) : *it;
    if (fits(cand)) acc = std::move(cand);
  }
  WalkState cur = acc ? std::move(*acc) : unit_state(disc);
  for (;;) {
    WalkState n = next_state(cur, bits);
    if (!fits(n)) break;
    cur = std::move(n);
  }
  check_error(cur);
  return cur;
}

WalkState power_form(const WalkState& base, const Int& x, const PrecisionBudget& budget) {
  if (x < 0) throw InputError("exponent must be non-negative");
  if (x == 0) return unit_state(base.form.disc());
  WalkState res = base;
  for (long i = bit_length(x) - 2; i >= 0; --i) {
    res = giant_step(res, res, budget);
    if (mpz_tstbit(x.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) res = giant_step(res, base, budget);
  }
  check_error(res);
  return res;
}

WalkState power_form(const PositiveReducedForm& g, const Int& x, const PrecisionBudget& budget) {
  return power_form(WalkState{g, ApproxReal()}, x, budget);
}

WalkState pip_eval(const PositiveReducedForm& g, const Int& x, const Int& y,
                   const PrecisionBudget& budget) {
  const Discriminant& disc = g.disc();
  check_size(x, budget, disc, "x");
  check_size(y, budget, disc, "y");
  const long bits = budget.per_log_bits;
  auto fits = [&](const WalkState& s) { return s.dist.le_dyadic(y, 2); };

  WalkState cur = power_form(g, x, budget);
  if (y > 0) cur = giant_step(cur, form_left_of(disc, y, budget), budget);
  while (!fits(cur)) cur = prev_state(cur, bits);
  for (;;) {
    WalkState n = next_state(cur, bits);
    if (!fits(n)) break;
    cur = std::move(n);
  }
  check_error(cur);
  return cur;
}

}  // namespace rqinfra
