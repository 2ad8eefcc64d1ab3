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

#include "rqinfra/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "rqinfra/error.hpp"

namespace rqinfra {

std::uint64_t default_cycle_cap() {
  if (const char* env = std::getenv("RQI_CYCLE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw InputError("RQI_CYCLE_CAP must be a positive integer");
  }
  return kDefaultCycleCap;
}

std::optional<std::size_t> PrincipalCycle::index_of(const Form& f) const {
  auto it = index.find(f);
  if (it == index.end() || it->first.b() != f.b() || it->first.a() != f.a()) return std::nullopt;
  return it->second;
}

PrincipalCycle enumerate_cycle(const Discriminant& disc, std::uint64_t cap, long precision_bits) {
  PrincipalCycle cyc{disc, {}, {}, ApproxReal(), 0, precision_bits, {}};
  const ReducedForm start = unit_form(disc).reduced();
  ReducedForm f = start;
  ApproxReal dist;
  std::uint64_t steps = 0;
  do {
    if (f.a() > 0) {
      cyc.index.emplace(f.form(), cyc.forms.size());
      cyc.forms.push_back(PositiveReducedForm::make(f));
      cyc.dists.push_back(dist);
    }
    dist += step_distance(f, precision_bits);
    f = rho(f);
    if (++steps > cap) throw CapExceeded("principal cycle of D = " + to_string(disc.value()), cap);
  } while (!(f == start));
  cyc.regulator_narrow = dist;
  cyc.full_length = steps;
  return cyc;
}

ApproxReal regulator_classical(const Discriminant& disc, long target_bits, std::uint64_t cap) {
  // Per-step error is 2^-(bits+2); 40 extra bits cover cycles up to 2^38 steps.
  PrincipalCycle cyc = enumerate_cycle(disc, cap, target_bits + 40);
  if (!cyc.regulator_narrow.err_below(1, target_bits)) {
    throw InvariantViolation("regulator_classical: precision target missed");
  }
  return cyc.regulator_narrow;
}

PrincipalTest principal_test_bruteforce(const ReducedForm& g, const PrincipalCycle& cycle) {
  PositiveReducedForm p = to_positive_rep(g);
  auto idx = cycle.index_of(p.form());
  if (!idx) return {false, std::nullopt};
  return {true, cycle.dists[*idx]};
}

PrincipalTest principal_test_bruteforce(const ReducedForm& g, std::uint64_t cap) {
  return principal_test_bruteforce(g, enumerate_cycle(g.disc(), cap));
}

ApproxReal mod_regulator(ApproxReal x, const ApproxReal& regulator) {
  if (compare(regulator, ApproxReal()) <= 0) throw InvariantViolation("regulator must be positive");
  // Jump close first so huge arguments stay cheap, then settle exactly.
  double q = std::floor(x.value() / regulator.value());
  if (std::fabs(q) > 2) x -= regulator * Int(static_cast<long>(q) - (q > 0 ? 1 : -1));
  while (compare(x, ApproxReal()) < 0) x += regulator;
  while (compare(x, regulator) >= 0) x -= regulator;
  return x;
}

OrderAndS order_and_S(const ReducedForm& g, const PrincipalCycle& cycle, std::uint64_t max_order) {
  PrecisionBudget budget = PrecisionBudget::for_disc(cycle.disc, cycle.precision_bits, true);
  WalkState base{to_positive_rep(g), ApproxReal()};
  if (g.a() < 0) base.dist = step_distance(g, cycle.precision_bits);
  WalkState cur = base;
  Int n = 1;
  for (;;) {
    if (auto idx = cycle.index_of(cur.form.form())) {
      ApproxReal s = mod_regulator(cycle.dists[*idx] - cur.dist, cycle.regulator_narrow);
      return {n, s, cur.form};
    }
    if (n >= max_order) throw CapExceeded("class order search", max_order);
    cur = giant_step(cur, base, budget);
    ++n;
  }
}

ClassGroupInfo class_group_bruteforce(const Discriminant& disc, std::uint64_t cap) {
  ClassGroupInfo info;
  std::vector<ReducedForm> all = all_reduced_forms(disc);
  if (all.size() > cap) throw CapExceeded("reduced forms of D = " + to_string(disc.value()), cap);
  std::map<Form, std::size_t, FormLess> owner;
  for (const auto& f : all) {
    if (owner.count(f.form())) continue;
    std::vector<ReducedForm> cyc;
    ReducedForm h = f;
    do {
      owner.emplace(h.form(), info.cycles.size());
      cyc.push_back(h);
      h = rho(h);
    } while (!(h == f));
    info.cycles.push_back(std::move(cyc));
  }
  info.principal_cycle = owner.at(unit_form(disc).form());
  info.narrow_class_number = info.cycles.size();
  const PositiveReducedForm u = unit_form(disc);
  Form neg = Form::trusted(disc, -u.a(), u.b(), -u.c());
  info.norm_minus_one_unit = owner.at(neg) == info.principal_cycle;
  info.class_number =
      info.norm_minus_one_unit ? info.narrow_class_number : info.narrow_class_number / 2;
  return info;
}

std::string cycle_dump_jsonl(const PrincipalCycle& cycle) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cycle.forms.size(); ++i) {
    const auto& f = cycle.forms[i];
    nlohmann::ordered_json rec;
    for (auto [key, v] : {std::pair{"a", &f.a()}, {"b", &f.b()}, {"c", &f.c()}}) {
      if (fits_i64(*v)) {
        rec[key] = to_i64(*v);
      } else {
        rec[key] = to_string(*v);
      }
    }
    rec["dist_mantissa"] = to_string(cycle.dists[i].mantissa());
    rec["dist_frac_bits"] = cycle.dists[i].frac_bits();
    out << rec.dump() << '\n';
  }
  return out.str();
}

}  // namespace rqinfra
