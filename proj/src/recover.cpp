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

#include "rqinfra/recover.hpp"

#include <cmath>
#include <random>

#include "rqinfra/error.hpp"
#include "rqinfra/qsim.hpp"

namespace rqinfra {

namespace {

unsigned long log2_exact(std::int64_t v) {
  if (v <= 0 || (v & (v - 1)) != 0) throw InputError("q must be a power of two");
  unsigned long k = 0;
  while ((std::int64_t{1} << k) < v) ++k;
  return k;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// x / k for a positive integer k, with the error widened by one ulp.
ApproxReal divide(const ApproxReal& x, long k) {
  return ApproxReal(floor_div(x.mantissa(), Int(k)), x.frac_bits(), x.err_ulps() / k + 1);
}

// Every position of form in [lo, hi] on the walk from the unit form.
std::vector<ApproxReal> positions_in(const PositiveReducedForm& form, const ApproxReal& lo,
                                     const ApproxReal& hi, const PrecisionBudget& budget) {
  const Discriminant& disc = form.disc();
  Int x0 = lo.floor_scaled(2);
  if (x0 < 0) x0 = 0;
  WalkState s = form_left_of(disc, x0, budget);
  std::vector<ApproxReal> out;
  while (compare(s.dist, hi) <= 0) {
    if (s.form == form && compare(s.dist, lo) >= 0) out.push_back(s.dist);
    s = next_state(s, budget.per_log_bits);
  }
  return out;
}

const ApproxReal* nearest_to(const std::vector<ApproxReal>& v, const ApproxReal& target) {
  const ApproxReal* best = nullptr;
  double best_gap = 0;
  for (const auto& p : v) {
    double gap = std::fabs((p - target).value());
    if (!best || gap < best_gap) {
      best = &p;
      best_gap = gap;
    }
  }
  return best;
}

// Positions of form within radius of target, at a precision that meets the
// tolerance; the precision is doubled until the reported error does.
std::vector<ApproxReal> positions_near(const PositiveReducedForm& form, const ApproxReal& target,
                                       const ApproxReal& radius, long tolerance_bits) {
  long bits = tolerance_bits + 16;
  for (int round = 0; round < 4; ++round, bits *= 2) {
    auto budget = PrecisionBudget::for_disc(form.disc(), bits, true);
    auto found = positions_in(form, target - radius, target + radius, budget);
    bool ok = true;
    for (const auto& p : found) ok = ok && p.err_bound() <= std::ldexp(1.0, -tolerance_bits);
    if (ok) return found;
  }
  throw InvariantViolation("distance error did not reach the requested tolerance");
}

ApproxReal from_rational(const Int& num, const Int& den, long bits) {
  return ApproxReal(floor_div(shift_left(num, static_cast<unsigned long>(bits)), den), bits, 1);
}

ApproxReal ln_bound(const Discriminant& disc, long factor, long bits) {
  return approx_ln(disc.value(), bits) * Int(factor);
}

// Smallest positive period dividing d: replaces d by d/p while the unit
// form sits at d/p. R+ > 0.48 for every discriminant.
ApproxReal reduce_to_period(const PositiveReducedForm& unit, ApproxReal d, long bits) {
  const ApproxReal radius(1, 16);
  bool again = true;
  while (again) {
    again = false;
    for (long p = 2; d.value() / static_cast<double>(p) > 0.48; ++p) {
      if (!is_prime(p)) continue;
      auto hits = positions_near(unit, divide(d, p), radius, bits);
      if (const ApproxReal* h = nearest_to(hits, divide(d, p)); h && h->value() > 0.25) {
        d = *h;
        again = true;
        break;
      }
    }
  }
  return d;
}

void attach_regulator_oracle(RecoveryResult& res, const Discriminant& disc,
                             const RecoverConfig& config) {
  if (!config.run_oracle || !res.value) return;
  try {
    ApproxReal ref = regulator_classical(disc, 64, config.cycle_cap);
    double diff = std::fabs((*res.value - ref).value());
    res.oracle = OracleCheck{"enumerate_cycle (full principal cycle walk)", ref.value(), diff, diff < 1};
  } catch (const CapExceeded&) {
  }
}

double circular_gap(double a, double b, double r) {
  double g = std::fmod(std::fabs(a - b), r);
  return std::min(g, r - g);
}

}  // namespace

Int round_half_even(const Int& num, const Int& den) {
  if (den == 0) throw InputError("division by zero");
  Int n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Int q = floor_div(n, d);
  Int twice = 2 * (n - q * d);
  if (twice > d || (twice == d && q % 2 != 0)) q += 1;
  return q;
}

Int round_half_even(const ApproxReal& x, const Int& k, unsigned long shift) {
  return round_half_even(x.mantissa() * k, shift_left(Int(1), x.frac_bits() + shift));
}

Int cf_window(const Int& q) { return isqrt(q) / 2; }

std::optional<std::pair<Int, Int>> cf_recover(const Int& y1, const Int& y2, const Int& q) {
  if (y2 == 0) throw InputError("y2 must be nonzero");
  if (!(y1 > 0 && y1 <= y2)) throw InputError("cf_recover needs 0 < y1 <= y2");
  const Int window = cf_window(q);
  Int a = y1, b = y2;
  Int h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  std::optional<std::pair<Int, Int>> best;
  while (b != 0) {
    Int t = floor_div(a, b);
    Int h = t * h1 + h2, k = t * k1 + k2;
    if (k > window) break;
    Int diff = y1 * k - h * y2;
    if (diff < 0) diff = -diff;
    if (h >= 1 && 2 * k * diff <= y2) best = {{h, k}};
    Int r = a - t * b;
    a = b;
    b = r;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  return best;
}

PipRecoverOutcome pip_recover(std::pair<std::int64_t, std::int64_t> y,
                              std::pair<std::int64_t, std::int64_t> y_prime, std::int64_t q,
                              const ApproxReal& r_plus) {
  const unsigned long lq = log2_exact(q);
  PipRecoverOutcome out;
  out.z2 = round_half_even(r_plus, Int(y.second), lq + 1);
  out.z2p = round_half_even(r_plus, Int(y_prime.second), lq + 1);
  BezoutResult bz = ext_gcd(out.z2, out.z2p);
  if (bz.gcd != 1) {
    out.failure = "gcd(z2, z2') = " + bz.gcd.get_str() + " for z2 = " + out.z2.get_str() +
                  ", z2' = " + out.z2p.get_str();
    return out;
  }
  const Int modulus = Int(8) * q;
  Int p = mod_floor(Int(y.first) * bz.s + Int(y_prime.first) * bz.t, modulus);
  ApproxReal s(r_plus.mantissa() * p, r_plus.frac_bits() + static_cast<long>(lq) + 3,
               r_plus.err_ulps() * p + 1);
  out.value = PipRecovery{s, out.z2, out.z2p, bz.s, bz.t, p};
  return out;
}

std::optional<ApproxReal> find_form_near(const PositiveReducedForm& form, const ApproxReal& target,
                                         const ApproxReal& radius, long tolerance_bits) {
  auto found = positions_near(form, target, radius, tolerance_bits);
  if (const ApproxReal* p = nearest_to(found, target)) return *p;
  return std::nullopt;
}

ApproxReal refine_distance(const WalkState& anchor, const ApproxReal& target, long tolerance_bits) {
  auto hit = find_form_near(anchor.form, target, ApproxReal::from_int(1), tolerance_bits);
  if (!hit) {
    throw RefinementError("no position of " + format_form(anchor.form.form()) + " within 1 of " +
                          std::to_string(target.value()));
  }
  return *hit;
}

std::string to_string(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::kRegulator:
      return "regulator";
    case RecoveryKind::kPipDistance:
      return "pip_distance";
    case RecoveryKind::kNotPrincipal:
      return "not_principal";
    case RecoveryKind::kFail:
      return "fail";
  }
  return "fail";
}

std::optional<ApproxReal> regulator_below(const Discriminant& disc, long factor, long bits) {
  const ApproxReal bound = ln_bound(disc, factor, bits);
  const PositiveReducedForm unit = unit_form(disc);
  WalkState s = unit_state(disc);
  for (;;) {
    s = next_state(s, bits);
    if (s.form == unit) return compare(s.dist, bound) < 0 ? std::optional(s.dist) : std::nullopt;
    if (compare(s.dist, bound) >= 0) return std::nullopt;
  }
}

RecoveryResult regulator_pipeline(const Discriminant& disc, const RecoverConfig& config) {
  RecoveryResult res;
  const long bits = config.tolerance_bits;
  const PositiveReducedForm unit = unit_form(disc);
  if (!config.force_quantum) {
    if (auto r = regulator_below(disc, 32, bits + 16)) {
      res.kind = RecoveryKind::kRegulator;
      res.path = "classical";
      res.value = *r;
      res.integer_value = round_half_even(*r, Int(1), 0);
      attach_regulator_oracle(res, disc, config);
      return res;
    }
  }
  res.path = "quantum";
  auto params = DualParams1D::make(disc, config.q, config.relaxed);
  res.q = params.q;
  auto table = tabulate_reg(params, PrecisionBudget::for_disc(disc, 0, config.relaxed),
                            config.cycle_cap);
  RegSampler sampler(table);
  std::mt19937_64 rng(config.seed);
  const Int q(params.q);
  for (int i = 0; i < config.max_attempts; ++i) {
    ++res.attempts;
    Attempt at;
    Sample1D s1 = sampler.draw(rng), s2 = sampler.draw(rng);
    at.samples = {{s1.y, 0}, {s2.y, 0}};
    auto reject = [&](std::string outcome, std::string detail) {
      at.outcome = std::move(outcome);
      at.detail = std::move(detail);
      res.diagnostics.push_back(at);
    };
    if (s1.y == 0 || s2.y == 0) {
      reject("zero_sample", "");
      continue;
    }
    if (s1.y == s2.y) {
      reject("duplicate_samples", "");
      continue;
    }
    const Int y1 = std::min(s1.y, s2.y), y2 = std::max(s1.y, s2.y);
    auto z = cf_recover(y1, y2, q);
    if (!z) {
      reject("cf_no_convergent", "no convergent with z2 <= " + cf_window(q).get_str());
      continue;
    }
    at.z = z;
    ApproxReal candidate = from_rational(q * z->first, y1, bits + 16);
    auto hit = find_form_near(unit, candidate, ApproxReal::from_int(1), bits);
    if (!hit || hit->value() < 0.25) {
      reject("verification_failed",
             "unit form not within 1 of q z1 / y1 = " + std::to_string(candidate.value()));
      continue;
    }
    ApproxReal r = reduce_to_period(unit, *hit, bits);
    res.kind = RecoveryKind::kRegulator;
    res.value = r;
    res.integer_value = round_half_even(r, Int(1), 0);
    res.z_pair = z;
    attach_regulator_oracle(res, disc, config);
    if (res.oracle && !res.oracle->agrees) {
      reject("oracle_mismatch", "candidate " + std::to_string(r.value()));
      res.kind = RecoveryKind::kFail;
      res.value.reset();
      res.integer_value.reset();
      continue;
    }
    at.outcome = "ok";
    at.detail = "q z1 / y1 = " + std::to_string(candidate.value());
    res.diagnostics.push_back(at);
    res.successes = 1;
    return res;
  }
  res.kind = RecoveryKind::kFail;
  return res;
}

namespace {

bool verify_pip_candidate(const PositiveReducedForm& g, const ApproxReal& s_prime,
                          const PrecisionBudget& budget) {
  const Int x = round_half_even(s_prime, Int(4), 0);
  for (int k = -1; k <= 1; ++k) {
    if (x + k < 0) continue;
    if (form_left_of(g.disc(), x + k, budget).form == g) return true;
  }
  return false;
}

// delta(g) near the verified S', reduced into [0, R+).
std::optional<ApproxReal> refine_pip(const PositiveReducedForm& g, const ApproxReal& s_prime,
                                     const ApproxReal& r, long bits) {
  std::vector<ApproxReal> targets{s_prime};
  if (s_prime.value() < 1) targets.push_back(s_prime + r);
  const ApproxReal* best = nullptr;
  std::vector<ApproxReal> all;
  for (const auto& t : targets) {
    auto found = positions_near(g, t, ApproxReal::from_int(1), bits);
    for (auto& f : found) all.push_back(f);
  }
  double best_gap = 0;
  for (const auto& p : all) {
    double gap = circular_gap(p.value(), s_prime.value(), r.value());
    if (!best || gap < best_gap) {
      best = &p;
      best_gap = gap;
    }
  }
  if (!best) return std::nullopt;
  return mod_regulator(*best, r);
}

void attach_pip_oracle(RecoveryResult& res, const ReducedForm& g, const ApproxReal& r,
                       const RecoverConfig& config) {
  if (!config.run_oracle) return;
  try {
    PrincipalTest t = principal_test_bruteforce(g, config.cycle_cap);
    OracleCheck oc;
    oc.source = "principal_test_bruteforce (principal cycle walk)";
    if (res.kind == RecoveryKind::kPipDistance) {
      oc.reference = t.is_principal ? t.dist->value() : -1;
      oc.difference = t.is_principal ? circular_gap(res.value->value(), oc.reference, r.value()) : 0;
      oc.agrees = t.is_principal && oc.difference < 0.125;
    } else if (res.kind == RecoveryKind::kNotPrincipal) {
      oc.reference = t.is_principal ? t.dist->value() : -1;
      oc.agrees = !t.is_principal;
    } else {
      return;
    }
    res.oracle = oc;
  } catch (const CapExceeded&) {
  }
}

}  // namespace

RecoveryResult pip_pipeline(const ReducedForm& g, const ApproxReal& r_plus,
                            const RecoverConfig& config) {
  RecoveryResult res;
  const Discriminant& disc = g.disc();
  const PositiveReducedForm gp = to_positive_rep(g);
  const long bits = config.tolerance_bits;
  const PositiveReducedForm unit = unit_form(disc);

  if (!config.force_quantum && compare(r_plus, ln_bound(disc, 64, 64)) < 0) {
    res.path = "classical";
    WalkState s = unit_state(disc);
    std::uint64_t steps = 0;
    res.kind = RecoveryKind::kNotPrincipal;
    do {
      if (s.form == gp) {
        res.kind = RecoveryKind::kPipDistance;
        res.value = s.dist;
        break;
      }
      s = next_state(s, bits + 16);
      if (++steps > config.cycle_cap) throw CapExceeded("principal cycle walk", config.cycle_cap);
    } while (!(s.form == unit));
    attach_pip_oracle(res, g, r_plus, config);
    return res;
  }

  res.path = "quantum";
  auto params = DualParams2D::make(disc, gp, config.q, config.relaxed);
  res.q = params.q;
  // z2 rounding multiplies the error of R+ by y2 < 8q.
  const long r_bits = std::max(bits, static_cast<long>(log2_exact(params.q)) + 40);
  const ApproxReal r = refine_distance(WalkState{unit, r_plus}, r_plus, r_bits);
  const auto budget = PrecisionBudget::for_disc(disc, 0, config.relaxed);
  auto table = PipTable::build(params, budget, config.cycle_cap);
  PipSampler sampler(table);
  std::mt19937_64 rng(config.seed);
  int verify_failures = 0;
  for (int i = 0; i < config.max_attempts; ++i) {
    ++res.attempts;
    Attempt at;
    Sample2D s1 = sampler.draw(rng), s2 = sampler.draw(rng);
    at.samples = {{s1.y1, s1.y2}, {s2.y1, s2.y2}};
    auto reject = [&](std::string outcome, std::string detail) {
      at.outcome = std::move(outcome);
      at.detail = std::move(detail);
      res.diagnostics.push_back(at);
    };
    if (s1.y2 == 0 || s2.y2 == 0) {
      reject("zero_sample", "");
      continue;
    }
    if (s1.y1 == s2.y1 && s1.y2 == s2.y2) {
      reject("duplicate_samples", "");
      continue;
    }
    auto rec = pip_recover({s1.y1, s1.y2}, {s2.y1, s2.y2}, params.q, r);
    at.z = {{rec.z2, rec.z2p}};
    if (!rec.value) {
      reject("gcd", rec.failure);
      continue;
    }
    const ApproxReal& sp = rec.value->s_prime;
    if (!verify_pip_candidate(gp, sp, budget)) {
      ++verify_failures;
      reject("verification_failed", "S' = " + std::to_string(sp.value()) + " does not land on " +
                                        format_form(gp.form()));
      if (verify_failures >= config.max_verify_failures) {
        res.kind = RecoveryKind::kNotPrincipal;
        attach_pip_oracle(res, g, r, config);
        return res;
      }
      continue;
    }
    auto refined = refine_pip(gp, sp, r, bits);
    if (!refined) {
      reject("refinement_failed", "S' = " + std::to_string(sp.value()));
      continue;
    }
    res.kind = RecoveryKind::kPipDistance;
    res.value = *refined;
    res.z_pair = at.z;
    at.outcome = "ok";
    at.detail = "S' = " + std::to_string(sp.value()) + ", p = " + rec.value->p.get_str();
    res.diagnostics.push_back(at);
    res.successes = 1;
    attach_pip_oracle(res, g, r, config);
    return res;
  }
  res.kind = RecoveryKind::kFail;
  return res;
}

}  // namespace rqinfra
