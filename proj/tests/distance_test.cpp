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
#include <random>
#include <vector>

#include "mpfr_oracle.hpp"
#include "rqinfra/distance.hpp"
#include "rqinfra/error.hpp"
#include "rqinfra/oracle.hpp"

using namespace rqinfra;
using rqtest::Mp;

namespace {

Mp to_mp(const ApproxReal& x) { return Mp::dyadic(x.mantissa(), x.frac_bits()); }

double abs_diff(const ApproxReal& x, const Mp& ref) { return (to_mp(x) - ref).abs().to_double(); }

// True positions of the R_A forms and the true R+, walked with MPFR steps.
struct MpCycle {
  std::vector<Form> forms;
  std::vector<Mp> dists;
  Mp regulator;
};

MpCycle mp_cycle(const Discriminant& disc) {
  MpCycle out;
  ReducedForm start = unit_form(disc).reduced();
  ReducedForm f = start;
  Mp dist;
  do {
    if (f.a() > 0) {
      out.forms.push_back(f.form());
      out.dists.push_back(dist);
    }
    dist += rqtest::mp_step(f.b(), disc.value());
    f = rho(f);
  } while (!(f == start));
  out.regulator = dist;
  return out;
}

// |x - (true position of f + k R+)| minimized over k.
double cycle_error(const MpCycle& cyc, const WalkState& s) {
  for (std::size_t i = 0; i < cyc.forms.size(); ++i) {
    if (cyc.forms[i] == s.form.form()) {
      double r = cyc.regulator.to_double();
      Mp diff = to_mp(s.dist) - cyc.dists[i];
      double k = std::nearbyint(diff.to_double() / r);
      return (diff - Mp(k) * cyc.regulator).abs().to_double();
    }
  }
  return 1e9;
}

}  // namespace

TEST_CASE("approx_ln against an independent reference") {
  ApproxReal zero = approx_ln(Int(1), 30);
  CHECK(zero.mantissa() == 0);
  CHECK(zero.err_bound() == std::ldexp(1.0, -30));

  ApproxReal ln2 = approx_ln(Int(2), 20);
  CHECK(abs_diff(ln2, rqtest::mp_log_ratio(2, 1)) <= std::ldexp(1.0, -20));
  CHECK(ln2.err_bound() == std::ldexp(1.0, -20));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    Int num = Int(static_cast<unsigned long>(rng() >> (rng() % 60))) + 1;
    Int den = Int(static_cast<unsigned long>(rng() >> (rng() % 60))) + 1;
    long bits = 8 + static_cast<long>(rng() % 200);
    ApproxReal a = approx_ln(num, den, bits);
    Mp err = (to_mp(a) - rqtest::mp_log_ratio(num, den)).abs();
    Mp bound = Mp::dyadic(1, bits);
    CHECK_FALSE(bound < err);
    // Bit-identical on recomputation.
    CHECK(approx_ln(num, den, bits).mantissa() == a.mantissa());
  }
  for (int i = 0; i < 10000; ++i) {
    Int x = Int(static_cast<unsigned long>(rng() % 1000000)) + 1;
    Int y = x + Int(static_cast<unsigned long>(rng() % 1000)) + 1;
    ApproxReal lx = approx_ln(x, 24), ly = approx_ln(y, 24);
    CHECK(compare(lx, ly + ApproxReal(2, 24)) <= 0);
  }
  CHECK_THROWS_AS(approx_ln(Int(0), 10), InputError);
}

TEST_CASE("step distances") {
  auto d8 = Discriminant::make(8);
  ReducedForm u = unit_form(d8).reduced();
  ApproxReal s1 = step_distance(u, 80);
  // ln(1 + sqrt 2)
  Mp ref = (Mp(1.0) + Mp::sqrt_z(2)).log();
  CHECK(abs_diff(s1, ref) < 1e-20);
  ApproxReal both = s1 + step_distance(rho(u), 80);
  Mp reg = (Mp(3.0) + Mp(2.0) * Mp::sqrt_z(2)).log();
  CHECK(abs_diff(both, reg) < 1e-20);

  for (long d : {8, 13, 40, 60, 316, 1001}) {
    auto disc = Discriminant::make(d);
    double sq = std::sqrt(static_cast<double>(d));
    for (const auto& f : all_reduced_forms(disc)) {
      ApproxReal s = step_distance(f, 100);
      CHECK(s.value() > 1.0 / sq);
      CHECK(s.value() < std::log(sq));
      CHECK(abs_diff(s, rqtest::mp_step(f.b(), disc.value())) < std::ldexp(1.0, -100));
      // Two consecutive steps exceed ln 2.
      CHECK((s + step_distance(rho(f), 100)).value() > std::log(2.0));
    }
  }
}

TEST_CASE("giant steps") {
  auto d8 = Discriminant::make(8);
  auto budget = PrecisionBudget::for_disc(d8);
  WalkState u = unit_state(d8);
  WalkState uu = giant_step(u, u, budget);
  CHECK(uu.form == u.form);
  CHECK(std::fabs(uu.dist.value()) < 1e-15);

  WalkState s = next_state(u, budget.per_log_bits);
  CHECK(s.form == u.form);
  WalkState ss = giant_step(s, s, budget);
  CHECK(ss.form == u.form);
  Mp reg = (Mp(3.0) + Mp(2.0) * Mp::sqrt_z(2)).log();
  CHECK(abs_diff(ss.dist, reg + reg) < 1e-15);

  std::mt19937_64 rng(316);
  for (long d : {316L, 1001L, 4 * 9973L, 99961L}) {
    auto disc = Discriminant::make(d);
    auto b = PrecisionBudget::for_disc(disc);
    MpCycle cyc = mp_cycle(disc);
    std::vector<WalkState> states{unit_state(disc)};
    while (states.size() < cyc.forms.size()) states.push_back(next_state(states.back(), b.per_log_bits));
    for (int i = 0; i < 300; ++i) {
      const auto& a = states[rng() % states.size()];
      const auto& c = states[rng() % states.size()];
      WalkState g = giant_step(a, c, b);
      CHECK(cycle_error(cyc, g) < 1e-15);
    }
  }
}

TEST_CASE("Reg examples") {
  auto d8 = Discriminant::make(8);
  auto budget = PrecisionBudget::for_disc(d8);
  WalkState r0 = form_left_of(d8, 0, budget);
  CHECK(r0.form == unit_form(d8));
  CHECK(r0.dist.mantissa() == 0);
  WalkState r4 = form_left_of(d8, 4, budget);
  CHECK(r4.form == unit_form(d8));
  CHECK(r4.dist.mantissa() == 0);
  WalkState r8 = form_left_of(d8, 8, budget);
  CHECK(r8.form == unit_form(d8));
  CHECK(std::fabs(r8.dist.value() - 1.762747174039086) < 1e-12);
  CHECK_THROWS_AS(form_left_of(d8, -1, budget), InputError);
  CHECK_THROWS_AS(form_left_of(d8, 64, budget), SizingError);
}

TEST_CASE("Reg agrees with an exhaustive walk and keeps the error contract") {
  std::mt19937_64 rng(2024);
  for (long d : {13L, 60L, 316L, 1001L, 4 * 9973L, 99961L}) {
    auto disc = Discriminant::make(d);
    auto budget = PrecisionBudget::for_disc(disc);
    MpCycle cyc = mp_cycle(disc);
    double reg = cyc.regulator.to_double();
    for (int i = 0; i < 60; ++i) {
      Int x = Int(static_cast<unsigned long>(rng() % static_cast<unsigned long>(d * d)));
      WalkState s = form_left_of(disc, x, budget);
      CHECK(s.dist.le_dyadic(x, 2));
      WalkState n = next_state(s, budget.per_log_bits);
      CHECK_FALSE(n.dist.le_dyadic(x, 2));
      CHECK(cycle_error(cyc, s) < 0.125);
      // True position of the result lies within 1/8 of the exhaustive
      // answer: the last R_A form whose true position is at most x/4.
      double target = x.get_d() / 4;
      double laps = std::floor(target / reg);
      double best = -1;
      std::size_t best_i = 0;
      for (std::size_t j = 0; j < cyc.forms.size(); ++j) {
        for (double k : {laps - 1, laps}) {
          double pos = cyc.dists[j].to_double() + k * reg;
          if (pos <= target && pos > best) {
            best = pos;
            best_i = j;
          }
        }
      }
      double dist_true = std::fabs(s.dist.value() - best);
      if (!(cyc.forms[best_i] == s.form.form())) {
        // Only allowed when x/4 falls within the error bound of a boundary.
        CHECK(dist_true < 0.25);
      }
    }
  }
}

TEST_CASE("power_form and pip_eval") {
  // The principal cycle of D = 40 holds only the unit form with a > 0, so the
  // non-unit principal example uses D = 316.
  auto d40 = Discriminant::make(316);
  auto budget = PrecisionBudget::for_disc(d40);
  auto cyc = enumerate_cycle(d40);
  REQUIRE(cyc.forms.size() >= 2);
  const auto& g = cyc.forms[1];
  CHECK(power_form(g, 0, budget).form == unit_form(d40));
  WalkState g1 = power_form(g, 1, budget);
  CHECK(g1.form == g);
  CHECK(g1.dist.mantissa() == 0);
  WalkState g2 = power_form(g, 2, budget);
  WalkState gg = giant_step({g, ApproxReal()}, {g, ApproxReal()}, budget);
  CHECK(g2.form == gg.form);
  CHECK(compare(g2.dist, gg.dist) == 0);

  WalkState base{g, cyc.dists[1]};
  WalkState p5 = power_form(base, 5, budget);
  CHECK(std::fabs(p5.dist.value() - 5 * cyc.dists[1].value()) < 5 * std::log(316.0));

  CHECK(pip_eval(g, 0, 0, budget).form == unit_form(d40));
  CHECK(pip_eval(g, 1, 0, budget).form == g);
  std::mt19937_64 rng(40);
  for (int i = 0; i < 50; ++i) {
    Int x = Int(static_cast<unsigned long>(rng() % 1600));
    Int y = Int(static_cast<unsigned long>(rng() % 1600));
    CHECK(pip_eval(unit_form(d40), x, y, budget).form == form_left_of(d40, y, budget).form);
  }
}
