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

#include "rqinfra/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rqinfra/error.hpp"

namespace rqinfra {

namespace {

std::int64_t pow2_at_least(double v) {
  std::int64_t q = 16;
  while (static_cast<double>(q) < v) q *= 2;
  return q;
}

double centered(double v, double period) {
  double r = std::fmod(v, period);
  if (r > period / 2) r -= period;
  if (r <= -period / 2) r += period;
  return r;
}

class Clause {
 public:
  Clause(std::string lemma, std::string name, double bound, std::size_t max_examples)
      : max_examples_(max_examples) {
    r_.lemma = std::move(lemma);
    r_.name = std::move(name);
    r_.bound = bound;
  }

  // extreme keeps the worst measured value seen.
  void record(bool ok, double measured, bool larger_is_worse, const std::string& what) {
    if (r_.checked == 0 || (larger_is_worse ? measured > r_.extreme : measured < r_.extreme)) {
      r_.extreme = measured;
    }
    ++r_.checked;
    if (!ok) {
      ++r_.violations;
      if (r_.counterexamples.size() < max_examples_) r_.counterexamples.push_back(what);
    }
  }

  ClauseResult finish(bool applicable) {
    if (!applicable) {
      r_.status = CheckStatus::kNotApplicable;
      r_.checked = 0;
      r_.violations = 0;
      r_.counterexamples.clear();
    } else {
      r_.status = r_.violations == 0 ? CheckStatus::kPass : CheckStatus::kFail;
    }
    return r_;
  }

 private:
  ClauseResult r_;
  std::size_t max_examples_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct RowRun {
  std::int64_t start;
  std::int64_t length;
  std::uint32_t form;
};

}  // namespace

bool LemmaReport::passed() const {
  return std::none_of(clauses.begin(), clauses.end(),
                      [](const ClauseResult& c) { return c.status == CheckStatus::kFail; });
}

LemmaReport verify_reg_lemmas(const Discriminant& disc, const LemmaConfig& config) {
  if (config.periods < 1) throw InputError("periods must be positive");
  LemmaReport rep;
  rep.disc = disc.value();
  const PrincipalCycle cycle = enumerate_cycle(disc, config.cycle_cap);
  const double r = cycle.regulator();
  rep.regulator = r;
  rep.ln_d = std::log(disc.value().get_d());
  rep.periods = config.periods;
  rep.precondition_met = r > 5 * rep.ln_d;
  const bool lemma2 = rep.precondition_met || config.relaxed;

  const std::int64_t q = pow2_at_least(4 * r * (config.periods + 1) + 8);
  rep.q = q;
  auto params = DualParams1D::make(disc, q, true);
  const RegTable table =
      tabulate_reg(params, PrecisionBudget::for_disc(disc, 0, true), config.cycle_cap);
  const std::size_t h = table.forms.size();

  std::vector<double> delta(h);
  for (std::size_t i = 0; i < h; ++i) {
    auto idx = cycle.index_of(table.forms[i].form());
    if (!idx) throw InvariantViolation("Reg table form missing from the principal cycle");
    delta[i] = cycle.dists[*idx].value();
  }
  auto name = [&](std::uint32_t i) { return format_form(table.forms[i].form()); };

  const std::size_t ex = config.max_counterexamples;
  Clause offset("1", "first-element offset |eps| <= 1", 1, ex);
  Clause pred("1", "Reg(x - 1) = rho^-2(g) at the first element", 0, ex);
  Clause coverage("1", "every form occurs in every period", 0, ex);
  Clause length("2", "1 <= m < ln D + 3", rep.ln_d + 3, ex);
  Clause succ("2", "Reg(x + m + 1) = rho^2(g)", 0, ex);
  Clause variation("2", "max_k |m(g,k) - m(g,k')| <= 4", 4, ex);

  std::vector<std::int64_t> m_min(h, INT64_MAX), m_max(h, -1);
  std::vector<std::vector<std::int64_t>> laps_seen(h);
  for (std::size_t i = 0; i < table.runs.size(); ++i) {
    const Run& run = table.runs[i];
    const std::uint32_t f = run.form;
    const double y = 4 * delta[f] + 0.5;
    const double k = std::round((static_cast<double>(run.start) - y) / (4 * r));
    const double eps = static_cast<double>(run.start) - (y + 4 * k * r);
    offset.record(std::fabs(eps) <= 1, std::fabs(eps), true,
                  name(f) + " period " + std::to_string(static_cast<long long>(k)) + ": x = " + std::to_string(run.start) +
                      ", eps = " + fmt(eps));
    laps_seen[f].push_back(static_cast<std::int64_t>(k));
    if (i > 0) {
      const std::uint32_t want = static_cast<std::uint32_t>((f + h - 1) % h);
      const std::uint32_t got = table.runs[i - 1].form;
      pred.record(got == want, 0, true,
                  "x = " + std::to_string(run.start) + ": Reg(x - 1) = " + name(got) +
                      ", expected " + name(want));
    }
    const bool complete = run.start + run.length < q;
    if (!complete) continue;
    const std::int64_t m = run.length - 1;
    length.record(m >= 1 && static_cast<double>(m) < rep.ln_d + 3, static_cast<double>(m), true,
                  name(f) + " period " + std::to_string(static_cast<long long>(k)) + ": x = " + std::to_string(run.start) +
                      ", m = " + std::to_string(m) + ", ln D + 3 = " + fmt(rep.ln_d + 3));
    const std::uint32_t want = static_cast<std::uint32_t>((f + 1) % h);
    const std::uint32_t got = table.runs[i + 1].form;
    succ.record(got == want, 0, true,
                "x = " + std::to_string(run.start + m + 1) + ": Reg = " + name(got) +
                    ", expected " + name(want));
    m_min[f] = std::min(m_min[f], m);
    m_max[f] = std::max(m_max[f], m);
  }
  for (std::uint32_t f = 0; f < h; ++f) {
    auto& seen = laps_seen[f];
    for (int k = 0; k < config.periods; ++k) {
      bool ok = std::find(seen.begin(), seen.end(), k) != seen.end();
      coverage.record(ok, 0, true, name(f) + " missing in period " + std::to_string(k));
    }
    if (m_max[f] < 0) continue;
    const double v = static_cast<double>(m_max[f] - m_min[f]);
    variation.record(v <= 4, v, true,
                     name(f) + ": m ranges " + std::to_string(m_min[f]) + ".." +
                         std::to_string(m_max[f]));
  }
  rep.clauses.push_back(offset.finish(true));
  rep.clauses.push_back(pred.finish(true));
  rep.clauses.push_back(coverage.finish(true));
  rep.clauses.push_back(length.finish(lemma2));
  rep.clauses.push_back(succ.finish(lemma2));
  rep.clauses.push_back(variation.finish(lemma2));
  return rep;
}

void verify_pip_lemma(const ReducedForm& g, const LemmaConfig& config, LemmaReport& rep) {
  const Discriminant& disc = g.disc();
  const PrincipalCycle cycle = enumerate_cycle(disc, config.cycle_cap);
  const double r = cycle.regulator();
  const OrderAndS os = order_and_S(g, cycle);
  if (!fits_i64(os.n) || os.n > 4096) throw CapExceeded("order of g", 4096);
  const std::int64_t n = to_i64(os.n);
  const double s = os.S.value();
  rep.pip_form = format_form(g.form());
  rep.pip_order = os.n;
  rep.pip_S = s;
  const double ln_d = std::log(disc.value().get_d());
  const bool lemma2 = r > 5 * ln_d || config.relaxed;

  const std::int64_t q =
      pow2_at_least(std::max(4 * r * (config.periods + 1) + 4 * s + 8, 3.0 * n + 8));
  auto params = DualParams2D::make(disc, to_positive_rep(g), q, true);
  const PipTable table =
      PipTable::build(params, PrecisionBudget::for_disc(disc, 0, true), config.cycle_cap);
  auto name = [&](std::uint32_t i) { return format_form(table.form(i).form()); };

  const std::int64_t rows = std::min<std::int64_t>(2 * n + 2, q);
  std::vector<std::vector<RowRun>> runs(rows);
  for (std::int64_t x1 = 0; x1 < rows; ++x1) {
    table.row_runs(x1, [&](std::int64_t st, std::int64_t len, std::uint32_t id) {
      runs[x1].push_back({st, len, id});
    });
  }
  auto complete_start = [](const RowRun& run) { return run.start > 0; };

  const std::size_t ex = config.max_counterexamples;
  Clause shift("4", "PIP(x1 + n, x2 - 4S + eps) = PIP(x1, x2), |eps| < 1", 1, ex);
  Clause off("4", "rows x1 + j, 0 < j < n, meet a different class", 0, ex);
  Clause period("4", "a form recurs along x2 only after 4R+ (within 1)", 1, ex);
  Clause length("4", "1 <= m <= ln D + 3", ln_d + 3, ex);
  Clause variation("4", "max |m - m'| <= 4 over the lattice", 4, ex);

  std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> m_range;
  for (std::int64_t x1 = 0; x1 < rows; ++x1) {
    std::map<std::uint32_t, std::int64_t> last_start;
    for (const RowRun& run : runs[x1]) {
      if (!complete_start(run)) continue;
      if (auto it = last_start.find(run.form); it != last_start.end()) {
        const double gap = static_cast<double>(run.start - it->second) - 4 * r;
        period.record(std::fabs(gap) < 1, std::fabs(gap), true,
                      "row " + std::to_string(x1) + ", " + name(run.form) + ": starts " +
                          std::to_string(it->second) + " and " + std::to_string(run.start));
      }
      last_start[run.form] = run.start;
      if (run.start + run.length >= q) continue;
      const std::int64_t m = run.length - 1;
      length.record(m >= 1 && static_cast<double>(m) <= ln_d + 3, static_cast<double>(m), true,
                    "row " + std::to_string(x1) + ", x2 = " + std::to_string(run.start) + ", " +
                        name(run.form) + ": m = " + std::to_string(m));
      auto [it, fresh] = m_range.try_emplace(run.form, m, m);
      if (!fresh) {
        it->second.first = std::min(it->second.first, m);
        it->second.second = std::max(it->second.second, m);
      }
    }
  }
  for (const auto& [id, mm] : m_range) {
    const double v = static_cast<double>(mm.second - mm.first);
    variation.record(v <= 4, v, true,
                     name(id) + ": m ranges " + std::to_string(mm.first) + ".." +
                         std::to_string(mm.second));
  }
  for (std::int64_t x1 = 0; x1 + n < rows; ++x1) {
    for (std::int64_t j = 1; j < n; ++j) {
      const bool ok = table.cycle_of_row(x1) != table.cycle_of_row(x1 + j);
      off.record(ok, 0, true,
                 "rows " + std::to_string(x1) + " and " + std::to_string(x1 + j) +
                     " share a class cycle");
    }
    for (const RowRun& run : runs[x1 + n]) {
      if (!complete_start(run)) continue;
      double best = INFINITY;
      for (const RowRun& other : runs[x1]) {
        if (other.form != run.form || !complete_start(other)) continue;
        const double e = centered(static_cast<double>(run.start) + 4 * s -
                                      static_cast<double>(other.start),
                                  4 * r);
        best = std::min(best, std::fabs(e));
      }
      shift.record(best < 1, best, true,
                   "row " + std::to_string(x1 + n) + ", x2 = " + std::to_string(run.start) + ", " +
                       name(run.form) + ": |eps| = " + fmt(best));
    }
  }
  rep.clauses.push_back(shift.finish(true));
  rep.clauses.push_back(off.finish(true));
  rep.clauses.push_back(period.finish(true));
  rep.clauses.push_back(length.finish(lemma2));
  rep.clauses.push_back(variation.finish(lemma2));
}

std::vector<DiscCandidate> find_discriminants(const Int& start, double min_ratio, std::size_t count,
                                              const Int& limit, std::uint64_t cycle_cap) {
  std::vector<DiscCandidate> out;
  for (Int d = std::max(start, Int(5)); d <= limit && out.size() < count; ++d) {
    if (Discriminant::violation(d)) continue;
    auto disc = Discriminant::make(d);
    try {
      const double r = regulator_classical(disc, 32, cycle_cap).value();
      const double ratio = r / std::log(d.get_d());
      if (ratio > min_ratio) out.push_back({d, r, ratio});
    } catch (const CapExceeded&) {
    }
  }
  return out;
}

}  // namespace rqinfra
