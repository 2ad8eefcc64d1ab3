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

#include <cmath>
#include <limits>
#include <numbers>

#include "rqinfra/error.hpp"
#include "rqinfra/qsim.hpp"
#include "qsim_internal.hpp"

namespace rqinfra {

namespace {

double log2_of(const Int& v) {
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return static_cast<double>(exp) + std::log2(m);
}

double ln_of(const Int& v) { return log2_of(v) * std::numbers::ln2; }

using detail::mulmod;

void add_check(BoundReport& rep, std::string name, double measured, double bound,
               std::string relation) {
  bool ok = relation == ">=" ? measured >= bound : measured <= bound;
  CheckStatus st = !rep.preconditions_met ? CheckStatus::kNotApplicable
                   : ok                   ? CheckStatus::kPass
                                          : CheckStatus::kFail;
  rep.checks.push_back({std::move(name), measured, bound, std::move(relation), st});
}

// Geometric prefix sums grown on demand.
struct Geometric {
  std::int64_t y;
  std::vector<std::complex<double>> g{0.0};
  const std::complex<double>& operator()(std::int64_t len, const PhaseTable& ph) {
    while (static_cast<std::int64_t>(g.size()) <= len) {
      std::int64_t j = static_cast<std::int64_t>(g.size()) - 1;
      g.push_back(g.back() + ph(mulmod(j, y, ph.modulus())));
    }
    return g[len];
  }
};

}  // namespace

bool BoundReport::passed() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::kFail) return false;
  }
  return preconditions_met;
}

const BoundCheck* BoundReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

BoundReport verify_bounds_1d(const RegTable& table, const TargetSet1D& target,
                             const PrincipalCycle& cycle) {
  BoundReport rep;
  rep.which = "regulator";
  const double ln_d = ln_of(cycle.disc.value());
  const double r = cycle.regulator();
  const double q = static_cast<double>(table.q);
  const RunStats& st = table.stats;
  const bool big_r = r > 32 * ln_d;
  const bool q_ok = q_admissible_1d(cycle.disc, table.q);
  rep.preconditions_met = big_r && q_ok && st.m_min >= 1;
  if (!big_r) rep.notes.push_back("R+ > 32 ln D does not hold");
  if (!q_ok) rep.notes.push_back("q violates q/2 <= 5 D (ln D)^2 < q");
  if (st.m_min < 1) rep.notes.push_back("m_min < 1");

  const std::int64_t n = 4 * table.q;
  PhaseTable phases(n);
  std::vector<std::vector<const Run*>> by_form(table.forms.size());
  for (const auto& run : table.runs) by_form[run.form].push_back(&run);

  double joint = 0, min_cond = std::numeric_limits<double>::infinity();
  double min_elem = std::numeric_limits<double>::infinity(), max_arc = 0;
  double min_p_ratio = std::numeric_limits<double>::infinity();
  const double p_bound = q / (8 * r) * static_cast<double>(st.m_min + 1);
  const int shift = ArcCover::default_shift(n);
  for (std::uint32_t f = 0; f < table.forms.size(); ++f) {
    std::int64_t p = 0;
    for (const Run* run : by_form[f]) p += run->length;
    if (p == 0) continue;
    min_p_ratio = std::min(min_p_ratio, static_cast<double>(p) / p_bound);
    double cond = 0;
    for (std::int64_t y : target.ys) {
      Geometric g{y};
      ArcCover arc(n, shift);
      std::complex<double> s = 0;
      for (const Run* run : by_form[f]) {
        std::int64_t start = mulmod(run->start, y, n);
        s += phases(start) * g(run->length, phases);
        arc.add(start, (run->length - 1) * y);
      }
      double pr = std::norm(s) / (static_cast<double>(n) * static_cast<double>(p));
      cond += pr;
      joint += std::norm(s) / (static_cast<double>(n) * q);
      min_elem = std::min(min_elem, pr / (static_cast<double>(p) / (8 * q)));
      max_arc = std::max(max_arc, arc.fraction());
    }
    min_cond = std::min(min_cond, cond);
    ++rep.forms_examined;
  }
  rep.y_mass = joint;
  rep.min_conditional_y_mass = min_cond;
  const double floor = std::ldexp(1.0, -11);
  add_check(rep, "y_mass", joint, floor, ">=");
  add_check(rep, "min_conditional_y_mass", min_cond, floor, ">=");
  add_check(rep, "per_element_ratio_to_p_over_8q", min_elem, 1.0, ">=");
  add_check(rep, "phase_arc_fraction", max_arc, 0.25, "<=");
  add_check(rep, "support_ratio_to_q_over_8R_times_m_min_plus_1", min_p_ratio, 1.0, ">=");
  add_check(rep, "card_Y", static_cast<double>(target.ys.size()),
            r / (8 * static_cast<double>(st.m_max + 1)), ">=");
  add_check(rep, "chain_m_min_plus_1_over_2e9_m_max_plus_1",
            static_cast<double>(st.m_min + 1) / (512.0 * static_cast<double>(st.m_max + 1)), floor,
            ">=");
  return rep;
}

BoundReport verify_bounds_2d(const PipTable& table, const TargetSet2D& target,
                             const PrincipalCycle& cycle, const Int& n_order,
                             const std::vector<std::uint32_t>& forms) {
  BoundReport rep;
  rep.which = "pip";
  const double ln_d = ln_of(cycle.disc.value());
  const double r = cycle.regulator();
  const double q = static_cast<double>(table.q());
  const double n = n_order.get_d();
  const RunStats& st = target.stats;
  const bool big_r = r >= 64 * ln_d;
  const bool q_ok = q_admissible_2d(cycle.disc, table.q());
  rep.preconditions_met = big_r && q_ok && st.m_min >= 1;
  if (!big_r) rep.notes.push_back("R+ >= 64 ln D does not hold");
  if (!q_ok) rep.notes.push_back("q violates 2q < D (ln D)^2 < 4q");
  if (st.m_min < 1) rep.notes.push_back("m_min < 1");
  if (!st.exact) rep.notes.push_back("m_min, m_max derived from cycle gaps");

  std::vector<std::uint32_t> ids = forms;
  const bool all = ids.empty();
  if (all) {
    for (std::uint32_t f = 0; f < table.form_count(); ++f) ids.push_back(f);
  }
  rep.y_mass_exact = all;
  if (!all) rep.notes.push_back("y_mass is the mean conditional mass over measured forms");

  const std::int64_t mod = 8 * table.q();
  PhaseTable phases(mod);
  const int shift = ArcCover::default_shift(mod);
  const std::size_t ny = target.ys.size();
  const double p_bound = (q / n) * (q / (8 * r)) * static_cast<double>(st.m_min + 1);

  double joint = 0, cond_sum = 0, min_cond = std::numeric_limits<double>::infinity();
  double min_elem = std::numeric_limits<double>::infinity(), max_arc = 0;
  double min_p_ratio = std::numeric_limits<double>::infinity();
  for (std::uint32_t f : ids) {
    std::vector<detail::RunPhaser> phasers;
    std::vector<ArcCover> arcs;
    for (const auto& y : target.ys) {
      phasers.emplace_back(phases, y.second);
      arcs.emplace_back(mod, shift);
    }
    std::vector<std::complex<double>> s(ny, 0.0);
    detail::IndexedRuns row;
    std::int64_t p = 0;
    for (std::int64_t x1 = 0; x1 < table.q(); ++x1) {
      if (table.cycle_of_row(x1) != table.cycle_of_form(f)) continue;
      detail::collect_form_runs(table, x1, f, row.runs);
      if (row.runs.empty()) continue;
      row.index();
      for (const auto& r : row.runs) p += r.length;
      for (std::size_t k = 0; k < ny; ++k) {
        const std::int64_t lead = mulmod(x1, target.ys[k].first, mod);
        s[k] += detail::indexed_sum(row, phasers[k], lead, phases, &arcs[k]);
      }
    }
    if (p == 0) continue;
    min_p_ratio = std::min(min_p_ratio, static_cast<double>(p) / p_bound);
    double cond = 0;
    for (std::size_t k = 0; k < ny; ++k) {
      double pr = std::norm(s[k]) / (64 * q * q * static_cast<double>(p));
      cond += pr;
      joint += std::norm(s[k]) / (64 * q * q * q * q);
      min_elem = std::min(min_elem, pr / (static_cast<double>(p) / (128 * q * q)));
      max_arc = std::max(max_arc, arcs[k].fraction());
    }
    cond_sum += cond;
    min_cond = std::min(min_cond, cond);
    ++rep.forms_examined;
  }
  rep.y_mass = all ? joint : cond_sum / static_cast<double>(rep.forms_examined);
  rep.min_conditional_y_mass = min_cond;
  const double floor = std::ldexp(1.0, -16);
  add_check(rep, "y_mass", rep.y_mass, floor, ">=");
  add_check(rep, "min_conditional_y_mass", min_cond, floor, ">=");
  add_check(rep, "per_element_ratio_to_p_over_128q2", min_elem, 1.0, ">=");
  add_check(rep, "phase_arc_fraction", max_arc, 0.25, "<=");
  add_check(rep, "support_ratio_to_q_over_n_q_over_8R_times_m_min_plus_1", min_p_ratio, 1.0, ">=");
  add_check(rep, "card_Y", static_cast<double>(ny), n * r / (8 * static_cast<double>(st.m_max + 2)),
            ">=");
  add_check(rep, "chain_m_min_plus_1_over_2e13_m_max_plus_2",
            static_cast<double>(st.m_min + 1) / (8192.0 * static_cast<double>(st.m_max + 2)), floor,
            ">=");
  return rep;
}

ResourceReport estimate_qubits(const Int& disc_value, const std::string& which) {
  if (disc_value < 2) throw InputError("discriminant must be at least 2");
  ResourceReport rep;
  rep.which = which;
  rep.log_d = log2_of(disc_value);
  rep.log_ln_d = std::log2(ln_of(disc_value));
  rep.n_bound = 10.5 * rep.log_d;
  const double x_reg = rep.log_d + 2 * rep.log_ln_d;
  const double form_reg = rep.log_d + 2;
  auto up = [](double v) { return static_cast<long>(std::ceil(v - 1e-12)); };
  if (which == "regulator") {
    rep.registers.push_back({"x", x_reg + 5, up(x_reg) + 5});
    rep.registers.push_back({"form", form_reg, up(rep.log_d) + 2});
    rep.formula_total_without_n = 2 * rep.log_d + 2 * rep.log_ln_d + 7;
  } else if (which == "pip") {
    rep.registers.push_back({"x1", x_reg, up(x_reg)});
    rep.registers.push_back({"x2", x_reg, up(x_reg)});
    rep.registers.push_back({"form", form_reg, up(rep.log_d) + 2});
    rep.formula_total_without_n = 3 * rep.log_d + 4 * rep.log_ln_d;
  } else {
    throw InputError("resource target must be 'regulator' or 'pip'");
  }
  rep.register_total_without_n = 0;
  for (const auto& r : rep.registers) rep.register_total_without_n += r.qubits;
  return rep;
}

}  // namespace rqinfra
