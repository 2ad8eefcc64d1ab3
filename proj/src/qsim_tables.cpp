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

#include <algorithm>
#include <limits>

#include "rqinfra/error.hpp"
#include "rqinfra/qsim.hpp"

namespace rqinfra {

namespace {

// Sign of k * D * (ln D)^2 - v, refining ln D until the interval decides.
int compare_kdln2(const Discriminant& disc, long k, const Int& v) {
  const Int kd = disc.value() * k;
  for (long bits = 64; bits <= 4096; bits *= 2) {
    ApproxReal l = approx_ln(disc.value(), bits);
    Int m = l.mantissa() * shift_left(Int(1), static_cast<unsigned long>(bits + 2 - l.frac_bits()));
    // |ln D - m / 2^(bits+2)| <= 2^-bits = 4 ulps.
    Int lo = m - 4, hi = m + 4;
    if (lo < 0) lo = 0;
    Int scaled = shift_left(v, static_cast<unsigned long>(2 * (bits + 2)));
    if (kd * lo * lo > scaled) return 1;
    if (kd * hi * hi < scaled) return -1;
  }
  throw InvariantViolation("D (ln D)^2 comparison did not resolve");
}

bool is_power_of_two(std::int64_t q) { return q > 0 && (q & (q - 1)) == 0; }

constexpr int kFixedBits = 96;

PipTable::Fixed to_fixed(const ApproxReal& a) {
  if (a.frac_bits() > kFixedBits) throw InvariantViolation("distance precision exceeds table format");
  Int m = shift_left(a.mantissa(), static_cast<unsigned long>(kFixedBits - a.frac_bits()));
  if (bit_length(m) > 118) throw CapExceeded("distance magnitude in PIP table", 118);
  bool neg = m < 0;
  if (neg) m = -m;
  PipTable::Fixed r = 0;
  for (long limb = (bit_length(m) + 63) / 64 - 1; limb >= 0; --limb) {
    Int part = shift_right_floor(m, static_cast<unsigned long>(64 * limb));
    part -= shift_left(shift_right_floor(part, 64), 64);
    r = (r << 64) | static_cast<unsigned __int128>(mpz_getlimbn(part.get_mpz_t(), 0));
  }
  return neg ? -r : r;
}

}  // namespace

int compare_5dln2(const Discriminant& disc, const Int& v) { return compare_kdln2(disc, 5, v); }
int compare_dln2(const Discriminant& disc, const Int& v) { return compare_kdln2(disc, 1, v); }

bool q_admissible_1d(const Discriminant& disc, std::int64_t q) {
  return is_power_of_two(q) && compare_5dln2(disc, from_i64(q / 2)) >= 0 &&
         compare_5dln2(disc, from_i64(q)) < 0;
}

bool q_admissible_2d(const Discriminant& disc, std::int64_t q) {
  return q > 0 && compare_dln2(disc, from_i64(2 * q)) > 0 && compare_dln2(disc, from_i64(4 * q)) < 0;
}

std::int64_t choose_q_1d(const Discriminant& disc) {
  for (std::int64_t q = 1; q <= kMaxQ1D; q *= 2) {
    if (compare_5dln2(disc, from_i64(q)) < 0) return q;
  }
  throw CapExceeded("q for the one-dimensional subroutine", static_cast<std::uint64_t>(kMaxQ1D));
}

std::int64_t choose_q_2d(const Discriminant& disc) {
  for (std::int64_t q = 1; q <= kMaxQ2D; q *= 2) {
    if (compare_dln2(disc, from_i64(4 * q)) < 0) {
      if (compare_dln2(disc, from_i64(2 * q)) > 0) return q;
      throw InputError("no power of two q satisfies 2q < D (ln D)^2 < 4q for D = " +
                       to_string(disc.value()));
    }
  }
  throw CapExceeded("q for the two-dimensional subroutine", static_cast<std::uint64_t>(kMaxQ2D));
}

DualParams1D DualParams1D::make(const Discriminant& disc, std::optional<std::int64_t> q,
                                bool relaxed) {
  if (!q) return {disc, choose_q_1d(disc), relaxed};
  if (!is_power_of_two(*q)) throw InputError("q must be a power of two");
  if (*q > kMaxQ1D) throw CapExceeded("q for the one-dimensional subroutine", kMaxQ1D);
  if (!relaxed && !q_admissible_1d(disc, *q)) {
    throw InputError("q must satisfy q/2 <= 5 D (ln D)^2 < q (or pass the relaxed flag)");
  }
  return {disc, *q, relaxed};
}

DualParams2D DualParams2D::make(const Discriminant& disc, const PositiveReducedForm& g,
                                std::optional<std::int64_t> q, bool relaxed) {
  if (!(g.disc() == disc)) throw InputError("form and discriminant differ");
  if (!q) return {disc, g, choose_q_2d(disc), relaxed};
  if (!is_power_of_two(*q)) throw InputError("q must be a power of two");
  if (*q > kMaxQ2D) throw CapExceeded("q for the two-dimensional subroutine", kMaxQ2D);
  if (!relaxed && !q_admissible_2d(disc, *q)) {
    throw InputError("q must satisfy 2q < D (ln D)^2 < 4q (or pass the relaxed flag)");
  }
  return {disc, g, *q, relaxed};
}

std::uint32_t RegTable::form_index_at(std::int64_t x) const {
  if (x < 0 || x >= q) throw InputError("x outside [0, q)");
  auto it = std::upper_bound(runs.begin(), runs.end(), x,
                             [](std::int64_t v, const Run& r) { return v < r.start; });
  return std::prev(it)->form;
}

std::vector<std::int64_t> RegTable::support_sizes() const {
  std::vector<std::int64_t> p(forms.size(), 0);
  for (const auto& r : runs) p[r.form] += r.length;
  return p;
}

RegTable tabulate_reg(const DualParams1D& params, const PrecisionBudget& budget,
                      std::uint64_t cycle_cap) {
  if (params.q > kMaxQ1D) throw CapExceeded("q for Reg tabulation", kMaxQ1D);
  RegTable t;
  t.q = params.q;
  WalkState s = unit_state(params.disc);
  const PositiveReducedForm unit = s.form;
  do {
    t.forms.push_back(s.form);
    t.lap_dists.push_back(s.dist);
    if (t.forms.size() > cycle_cap) throw CapExceeded("principal cycle", cycle_cap);
    s = next_state(s, budget.per_log_bits);
  } while (!(s.form == unit));
  t.lap_regulator = s.dist;

  long bits = t.lap_regulator.frac_bits();
  for (const auto& d : t.lap_dists) bits = std::max(bits, d.frac_bits());
  std::vector<Int> pos;
  for (const auto& d : t.lap_dists) pos.push_back(d.at_frac_bits(bits).mantissa());
  const Int lap = t.lap_regulator.at_frac_bits(bits).mantissa();
  pos.push_back(lap);
  // First x with position <= x/4, i.e. ceil(4 * position).
  auto boundary = [&](std::size_t i, const Int& shift) {
    Int v = (pos[i] + shift) * 4;
    Int r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(bits));
    return to_i64(r);
  };

  const std::size_t len = t.forms.size();
  t.stats.m_min = std::numeric_limits<std::int64_t>::max();
  t.stats.m_max = 0;
  Int shift = 0;
  std::int64_t lo = boundary(0, shift);
  for (;;) {
    for (std::size_t i = 0; i < len; ++i) {
      std::int64_t hi = boundary(i + 1, shift);
      if (hi <= t.q) {
        t.stats.m_min = std::min(t.stats.m_min, hi - lo - 1);
        t.stats.m_max = std::max(t.stats.m_max, hi - lo - 1);
      }
      t.runs.push_back({lo, std::min(hi, t.q) - lo, static_cast<std::uint32_t>(i)});
      lo = hi;
      if (lo >= t.q) break;
    }
    if (lo >= t.q) break;
    shift += lap;
  }
  if (t.stats.m_max == 0 && t.stats.m_min == std::numeric_limits<std::int64_t>::max()) {
    t.stats.m_min = 0;
  }
  return t;
}

PipTable PipTable::build(const DualParams2D& params, const PrecisionBudget& budget,
                         std::uint64_t cycle_cap) {
  if (params.q > kMaxQ2D) throw CapExceeded("q for PIP tabulation", kMaxQ2D);
  PipTable t;
  t.q_ = params.q;
  t.frac_bits_ = kFixedBits;
  t.rows_.reserve(static_cast<std::size_t>(params.q));
  const WalkState base{params.g, ApproxReal()};
  WalkState p = unit_state(params.disc);
  for (std::int64_t x1 = 0; x1 < params.q; ++x1) {
    auto it = t.ids_.find(p.form.form());
    if (it == t.ids_.end()) {
      Cycle c;
      const auto cyc_id = static_cast<std::uint32_t>(t.cycles_.size());
      WalkState w{p.form, ApproxReal()};
      do {
        auto id = static_cast<std::uint32_t>(t.forms_.size());
        t.forms_.push_back(w.form);
        t.form_cycle_.push_back(cyc_id);
        t.form_slot_.push_back(static_cast<std::uint32_t>(c.ids.size()));
        t.ids_.emplace(w.form.form(), id);
        c.ids.push_back(id);
        c.pos.push_back(to_fixed(w.dist));
        if (t.forms_.size() > cycle_cap) throw CapExceeded("form cycles of the PIP table", cycle_cap);
        w = next_state(w, budget.per_log_bits);
      } while (!(w.form == p.form));
      c.lap = to_fixed(w.dist);
      t.cycles_.push_back(std::move(c));
      it = t.ids_.find(p.form.form());
    }
    const std::uint32_t id = it->second;
    const Cycle& c = t.cycles_[t.form_cycle_[id]];
    t.rows_.push_back({t.form_cycle_[id], to_fixed(p.dist) - c.pos[t.form_slot_[id]]});
    if (x1 + 1 < params.q) p = giant_step(p, base, budget);
  }
  return t;
}

std::optional<std::uint32_t> PipTable::form_id(const Form& f) const {
  auto it = ids_.find(f);
  if (it == ids_.end() || !(forms_[it->second].form() == f)) return std::nullopt;
  return it->second;
}

std::uint32_t PipTable::at(std::int64_t x1, std::int64_t x2) const {
  if (x1 < 0 || x1 >= q_ || x2 < 0 || x2 >= q_) throw InputError("(x1, x2) outside [0, q)^2");
  std::uint32_t found = 0;
  row_runs(x1, [&](std::int64_t s, std::int64_t len, std::uint32_t id) {
    if (x2 >= s && x2 < s + len) found = id;
  });
  return found;
}

std::int64_t PipTable::support_size(std::uint32_t id) const {
  std::int64_t p = 0;
  for (std::int64_t x1 = 0; x1 < q_; ++x1) {
    form_runs(x1, id, [&](std::int64_t, std::int64_t len) { p += len; });
  }
  return p;
}

RunStats PipTable::run_stats(std::int64_t scan_limit) const {
  RunStats st;
  st.m_min = std::numeric_limits<std::int64_t>::max();
  double estimate = 0;
  for (const auto& row : rows_) {
    const Cycle& c = cycles_[row.cycle];
    double lap = static_cast<double>(c.lap) / std::ldexp(1.0, frac_bits_);
    estimate += static_cast<double>(q_) * static_cast<double>(c.ids.size()) / (4 * lap) + 1;
  }
  if (estimate <= static_cast<double>(scan_limit)) {
    for (std::int64_t x1 = 0; x1 < q_; ++x1) {
      row_runs(x1, [&](std::int64_t s, std::int64_t len, std::uint32_t id) {
        // Complete runs: not cut by x2 = q, and not cut at x2 = 0 unless a
        // boundary falls exactly there.
        if (s + len >= q_) return;
        if (s == 0) {
          const Cycle& c = cycles_[form_cycle_[id]];
          Fixed t = -rows_[x1].origin;
          Fixed k = t / c.lap;
          if (t - k * c.lap < 0) --k;
          if (ceil4(rows_[x1].origin + c.pos[form_slot_[id]] + k * c.lap) != 0) return;
        }
        st.m_min = std::min(st.m_min, len - 1);
        st.m_max = std::max(st.m_max, len - 1);
      });
    }
    st.exact = true;
  } else {
    // A gap of g quarter-units yields runs of floor(4g) or ceil(4g) points.
    for (const auto& c : cycles_) {
      for (std::size_t i = 0; i < c.ids.size(); ++i) {
        Fixed gap = (i + 1 == c.ids.size() ? c.lap : c.pos[i + 1]) - c.pos[i];
        Fixed lo = (gap << 2) >> frac_bits_;
        Fixed hi = ceil4(gap);
        st.m_min = std::min(st.m_min, static_cast<std::int64_t>(lo) - 1);
        st.m_max = std::max(st.m_max, static_cast<std::int64_t>(hi) - 1);
      }
    }
    st.exact = false;
  }
  if (st.m_min == std::numeric_limits<std::int64_t>::max()) st.m_min = 0;
  return st;
}

}  // namespace rqinfra
