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

// Exact classical simulation of the two dual-sampling subroutines. The state
// before the Fourier transform is a classical correlation between x and the
// period-function value, so every distribution is computed group by group
// from the indicator of {x : f(x) = h}; no state vector is ever built.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rqinfra/distance.hpp"
#include "rqinfra/oracle.hpp"

namespace rqinfra {

inline constexpr std::int64_t kMaxQ1D = std::int64_t{1} << 24;
inline constexpr std::int64_t kMaxQ2D = std::int64_t{1} << 22;
// Full two-dimensional transforms allocate (8q)^2 bins.
inline constexpr std::int64_t kMaxFullQ2D = std::int64_t{1} << 9;
inline constexpr std::int64_t kMaxNaiveQ1D = std::int64_t{1} << 8;
inline constexpr std::int64_t kMaxNaiveQ2D = std::int64_t{1} << 4;

/// Sign of 5 D (ln D)^2 - v and of D (ln D)^2 - v, decided exactly.
int compare_5dln2(const Discriminant& disc, const Int& v);
int compare_dln2(const Discriminant& disc, const Int& v);

/// The power of two q with q/2 <= 5 D (ln D)^2 < q.
std::int64_t choose_q_1d(const Discriminant& disc);
/// The power of two q with 2q < D (ln D)^2 < 4q.
std::int64_t choose_q_2d(const Discriminant& disc);
bool q_admissible_1d(const Discriminant& disc, std::int64_t q);
bool q_admissible_2d(const Discriminant& disc, std::int64_t q);

struct DualParams1D {
  Discriminant disc;
  std::int64_t q;
  bool relaxed;

  /// Without q the admissible power of two is chosen. An explicit q must be a
  /// power of two and admissible unless relaxed.
  static DualParams1D make(const Discriminant& disc, std::optional<std::int64_t> q = {},
                           bool relaxed = false);
};

struct DualParams2D {
  Discriminant disc;
  PositiveReducedForm g;
  std::int64_t q;
  bool relaxed;

  static DualParams2D make(const Discriminant& disc, const PositiveReducedForm& g,
                           std::optional<std::int64_t> q = {}, bool relaxed = false);
};

struct Run {
  std::int64_t start;
  std::int64_t length;
  std::uint32_t form;
};

struct RunStats {
  std::int64_t m_min = 0;  // m = run length - 1, complete runs only
  std::int64_t m_max = 0;
  bool exact = true;       // false when derived from the cycle gaps instead of a scan
};

/// Reg(x) for every x in [0, q), as consecutive runs.
struct RegTable {
  std::int64_t q = 0;
  std::vector<PositiveReducedForm> forms;  // R_A in cycle order, unit first
  std::vector<ApproxReal> lap_dists;       // walk positions of forms within one lap
  ApproxReal lap_regulator;                // walk distance of one full lap
  std::vector<Run> runs;
  RunStats stats;

  std::uint32_t form_index_at(std::int64_t x) const;
  const PositiveReducedForm& at(std::int64_t x) const { return forms[form_index_at(x)]; }
  std::vector<std::int64_t> support_sizes() const;
};

/// Positions come from one lap of rho^2 steps; lap k is the same lap shifted
/// by k times the lap distance, which is exactly what a continued walk adds.
RegTable tabulate_reg(const DualParams1D& params, const PrecisionBudget& budget,
                      std::uint64_t cycle_cap = default_cycle_cap());

/// PIP(x1, x2) over [0, q)^2 in compact form: every row x1 is one class
/// cycle shifted by a row origin, so runs are generated on demand.
class PipTable {
 public:
  using Fixed = __int128;

  static PipTable build(const DualParams2D& params, const PrecisionBudget& budget,
                        std::uint64_t cycle_cap = default_cycle_cap());

  std::int64_t q() const { return q_; }
  std::size_t form_count() const { return forms_.size(); }
  const PositiveReducedForm& form(std::uint32_t id) const { return forms_[id]; }
  std::optional<std::uint32_t> form_id(const Form& f) const;
  /// Number of distinct class cycles met by the rows.
  std::size_t cycle_count() const { return cycles_.size(); }
  /// Cycle holding form id, and whether row x1 lives in it.
  std::uint32_t cycle_of_form(std::uint32_t id) const { return form_cycle_[id]; }
  std::uint32_t cycle_of_row(std::int64_t x1) const { return rows_[x1].cycle; }

  /// f(start, length, form_id) for the runs of row x1 in increasing x2.
  template <class F>
  void row_runs(std::int64_t x1, F&& f) const;
  /// f(start, length) for the runs of form id in row x1.
  template <class F>
  void form_runs(std::int64_t x1, std::uint32_t id, F&& f) const;

  std::uint32_t at(std::int64_t x1, std::int64_t x2) const;
  std::int64_t support_size(std::uint32_t id) const;
  /// Run-length statistics; exact scan when the table has at most
  /// scan_limit runs, otherwise floor/ceil of four times every cycle gap.
  RunStats run_stats(std::int64_t scan_limit = 200'000'000) const;

 private:
  struct Cycle {
    std::vector<std::uint32_t> ids;
    std::vector<Fixed> pos;  // pos[0] = 0
    Fixed lap = 0;
  };
  struct Row {
    std::uint32_t cycle;
    Fixed origin;  // position of ids[0] relative to the unreduced power
  };

  Fixed ceil4(Fixed v) const { return -((-(v << 2)) >> frac_bits_); }

  std::int64_t q_ = 0;
  int frac_bits_ = 0;
  std::vector<PositiveReducedForm> forms_;
  std::vector<std::uint32_t> form_cycle_;
  std::vector<std::uint32_t> form_slot_;  // index inside its cycle
  std::map<Form, std::uint32_t, FormLess> ids_;
  std::vector<Cycle> cycles_;
  std::vector<Row> rows_;
};

/// exp(2 pi i r / n) for r in [0, n).
class PhaseTable {
 public:
  explicit PhaseTable(std::int64_t n);
  std::int64_t modulus() const { return n_; }
  std::complex<double> operator()(std::int64_t r) const { return table_[r]; }

 private:
  std::int64_t n_;
  std::vector<std::complex<double>> table_;
};

/// Smallest arc of a circle of integer circumference containing a union of
/// arcs [start, start + span]. Residues are bucketed by 2^shift, which can
/// only enlarge the reported arc.
class ArcCover {
 public:
  ArcCover(std::int64_t modulus, int shift);
  /// Bucket width chosen so that at most 2^12 buckets are used.
  static int default_shift(std::int64_t modulus);
  void add(std::int64_t start, std::int64_t span);
  /// Upper bound on the covering arc as a fraction of the full circle.
  double fraction() const;

 private:
  std::int64_t n_;
  int shift_;
  std::int64_t buckets_;
  std::vector<std::int64_t> diff_;
  bool full_ = false;
};

// ---------------------------------------------------------------------------
// One dimension.

/// Conditional distribution of y in [0, 4q) given the measured form.
struct Conditional1D {
  std::uint32_t form;
  std::int64_t support;  // p
  std::vector<double> prob;
};

struct FullDistribution1D {
  std::int64_t q = 0;
  std::int64_t modulus = 0;
  std::vector<double> prob;  // joint, summed over measured forms
  std::vector<std::int64_t> supports;
  double total = 0;          // compensated sum of prob
};

Conditional1D conditional_1d(const RegTable& table, std::uint32_t form);
/// O(q^2) direct transform in long double, for cross-checks.
Conditional1D conditional_1d_naive(const RegTable& table, std::uint32_t form);
FullDistribution1D full_distribution_1d(const RegTable& table);

/// Sum over {x : Reg(x) = form} of exp(2 pi i x y / 4q), by runs.
std::complex<double> amplitude_1d(const RegTable& table, std::uint32_t form, std::int64_t y,
                                  const PhaseTable& phases);

struct Sample1D {
  std::uint32_t form;
  std::int64_t y;
};

/// Measure the form register (uniform x), then y from its conditional.
/// Holds transform buffers so repeated draws reuse one plan.
class RegSampler {
 public:
  explicit RegSampler(const RegTable& table);
  ~RegSampler();
  RegSampler(const RegSampler&) = delete;
  RegSampler& operator=(const RegSampler&) = delete;
  Sample1D draw(std::mt19937_64& rng);

 private:
  struct Impl;
  const RegTable& table_;
  std::unique_ptr<Impl> impl_;
};

Sample1D sample_regulator_dual(const RegTable& table, std::mt19937_64& rng);

struct TargetSet1D {
  std::vector<std::int64_t> ys;  // increasing
  std::vector<std::int64_t> zs;  // ys[i] = nearest integer to q zs[i] / R+
  std::int64_t y_limit_num;      // y <= q / (4 (m_max + 1))
  RunStats stats;
};

/// Y = {0 <= y <= q / (4 (m_max + 1)) : |y - q z / R+| <= 1/2, z in Z}.
TargetSet1D target_set_1d(const RegTable& table, const PrincipalCycle& cycle);

// ---------------------------------------------------------------------------
// Two dimensions.

struct FullDistribution2D {
  std::int64_t q = 0;
  std::int64_t modulus = 0;         // 8q
  std::vector<double> prob;         // joint, index y1 * modulus + y2
  std::vector<std::int64_t> supports;
  double total = 0;

  double at(std::int64_t y1, std::int64_t y2) const { return prob[y1 * modulus + y2]; }
};

/// Conditional distribution of (y1, y2) for one measured form.
std::vector<double> conditional_2d(const PipTable& table, std::uint32_t form);
std::vector<double> conditional_2d_naive(const PipTable& table, std::uint32_t form);
FullDistribution2D full_distribution_2d(const PipTable& table);

std::complex<double> amplitude_2d(const PipTable& table, std::uint32_t form, std::int64_t y1,
                                  std::int64_t y2, const PhaseTable& phases);

/// y2-marginal of one form's distribution via the row decomposition
/// Pr(y2) = sum_x1 |T_x1(y2)|^2 / (8 q p), T_x1 the row transform.
std::vector<double> marginal_y2_2d(const PipTable& table, std::uint32_t form);

struct Sample2D {
  std::uint32_t form;
  std::int64_t y1;
  std::int64_t y2;
};

/// Exact sampling without the (8q)^2 grid: the y2-marginal is the mixture of
/// row distributions weighted by row support, and y1 given y2 is the
/// transform over x1 of the row amplitudes T_x1(y2).
class PipSampler {
 public:
  explicit PipSampler(const PipTable& table);
  ~PipSampler();
  PipSampler(const PipSampler&) = delete;
  PipSampler& operator=(const PipSampler&) = delete;
  Sample2D draw(std::mt19937_64& rng);

 private:
  struct Impl;
  const PipTable& table_;
  std::unique_ptr<Impl> impl_;
};

Sample2D sample_pip_dual(const PipTable& table, std::mt19937_64& rng);

struct TargetSet2D {
  std::vector<std::pair<std::int64_t, std::int64_t>> ys;
  std::vector<std::pair<Int, Int>> zs;
  RunStats stats;
};

/// Y = {(y1, y2) : 0 <= y2 < q / (m_max + 2), |y2 - 2q z2 / R+| <= 1/2,
///      |y1 - 8q (z1 / n + z2 S / (n R+))| <= 1/2 mod 8q}, S in nats.
TargetSet2D target_set_2d(const PipTable& table, const PrincipalCycle& cycle, const Int& n,
                          const ApproxReal& S);

// ---------------------------------------------------------------------------
// Bound verification.

enum class CheckStatus { kPass, kFail, kNotApplicable };

struct BoundCheck {
  std::string name;
  double measured;
  double bound;
  std::string relation;  // ">=" or "<="
  CheckStatus status;
};

struct BoundReport {
  std::string which;  // "regulator" or "pip"
  bool preconditions_met = false;
  std::vector<std::string> notes;
  std::vector<BoundCheck> checks;
  double y_mass = 0;              // joint mass on Y (estimate when sampled)
  bool y_mass_exact = true;
  double min_conditional_y_mass = 0;
  std::size_t forms_examined = 0;

  bool passed() const;
  const BoundCheck* find(const std::string& name) const;
};

BoundReport verify_bounds_1d(const RegTable& table, const TargetSet1D& target,
                             const PrincipalCycle& cycle);

/// forms empty: every form (exact joint mass). Otherwise the listed forms,
/// which should be drawn by measurement so that the mean of their
/// conditional masses estimates the joint mass.
BoundReport verify_bounds_2d(const PipTable& table, const TargetSet2D& target,
                             const PrincipalCycle& cycle, const Int& n,
                             const std::vector<std::uint32_t>& forms = {});

// ---------------------------------------------------------------------------
// Qubit accounting.

struct RegisterCount {
  std::string name;
  double formula;     // the real-valued expression
  long qubits;        // ceiling used to instantiate it
};

struct ResourceReport {
  std::string which;
  double log_d;
  double log_ln_d;
  std::vector<RegisterCount> registers;
  double formula_total_without_n;  // 2 log D + 2 log ln D + 7, or 3 log D + 4 log ln D
  double n_bound;                  // 10.5 log D
  long register_total_without_n;
};

ResourceReport estimate_qubits(const Int& disc_value, const std::string& which);

// ---------------------------------------------------------------------------

template <class F>
void PipTable::row_runs(std::int64_t x1, F&& f) const {
  const Row& row = rows_[x1];
  const Cycle& c = cycles_[row.cycle];
  const std::size_t len = c.ids.size();
  Fixed t = -row.origin;
  Fixed k = t / c.lap;
  if (t - k * c.lap < 0) --k;
  Fixed rem = t - k * c.lap;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(c.pos.begin(), c.pos.end(), rem) -
                                           c.pos.begin()) -
                  1;
  Fixed base = row.origin + k * c.lap;
  Fixed lo = ceil4(base + c.pos[i]);
  for (;;) {
    Fixed next_base = base;
    std::size_t j = i + 1;
    if (j == len) {
      j = 0;
      next_base += c.lap;
    }
    Fixed hi = ceil4(next_base + c.pos[j]);
    std::int64_t s = lo < 0 ? 0 : static_cast<std::int64_t>(lo);
    std::int64_t e = hi > q_ ? q_ : static_cast<std::int64_t>(hi);
    if (e > s) f(s, e - s, c.ids[i]);
    if (hi >= q_) return;
    lo = hi;
    i = j;
    base = next_base;
  }
}

template <class F>
void PipTable::form_runs(std::int64_t x1, std::uint32_t id, F&& f) const {
  const Row& row = rows_[x1];
  if (form_cycle_[id] != row.cycle) return;
  const Cycle& c = cycles_[row.cycle];
  const std::size_t i = form_slot_[id];
  const Fixed a = row.origin + c.pos[i];
  const Fixed b = row.origin + (i + 1 == c.ids.size() ? c.lap : c.pos[i + 1]);
  // Smallest k with ceil4(b + k lap) > 0, approached from below.
  Fixed k = -b / c.lap - 1;
  while (ceil4(b + k * c.lap) <= 0) ++k;
  for (;; ++k) {
    Fixed lo = ceil4(a + k * c.lap);
    if (lo >= q_) return;
    Fixed hi = ceil4(b + k * c.lap);
    std::int64_t s = lo < 0 ? 0 : static_cast<std::int64_t>(lo);
    std::int64_t e = hi > q_ ? q_ : static_cast<std::int64_t>(hi);
    if (e > s) f(s, e - s);
  }
}

}  // namespace rqinfra
