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

#ifndef RQINFRA_SRC_QSIM_INTERNAL_HPP_
#define RQINFRA_SRC_QSIM_INTERNAL_HPP_

#include <complex>
#include <stdexcept>
#include <cstdint>
#include <vector>

#include "rqinfra/qsim.hpp"

namespace rqinfra::detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  constexpr std::int64_t kSmall = std::int64_t{1} << 31;
  if (a >= 0 && b >= 0 && a < kSmall && b < kSmall) return (a * b) % n;
  std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
  return r < 0 ? r + n : r;
}

// Plain product; std::complex multiplication goes through the
// Annex G NaN recovery path.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

struct Span {
  std::int64_t start;
  std::int64_t length;
};

// Sums exp(2 pi i y s / n) over the cells of a run list with increasing
// starts. Successive phases are advanced by the start difference, which takes
// few distinct values, so the large phase table is touched once per list.
class RunPhaser {
 public:
  RunPhaser(const PhaseTable& phases, std::int64_t y) : phases_(phases), y_(y) {}

  std::int64_t y() const { return y_; }

  const std::complex<double>& geometric(std::int64_t len) {
    while (static_cast<std::int64_t>(g_.size()) <= len) {
      std::int64_t j = static_cast<std::int64_t>(g_.size()) - 1;
      g_.push_back(g_.back() + phases_(mulmod(j, y_, phases_.modulus())));
    }
    return g_[len];
  }

  struct Step {
    std::int64_t delta;
    std::int64_t residue;  // delta * y mod n
    std::complex<double> phase;
  };

  const Step& step(std::int64_t delta) {
    for (const auto& st : steps_) {
      if (st.delta == delta) return st;
    }
    std::int64_t r = mulmod(delta, y_, phases_.modulus());
    if (steps_.size() == kMaxSteps) steps_.pop_back();
    steps_.insert(steps_.begin(), {delta, r, phases_(r)});
    return steps_.front();
  }

  std::complex<double> sum(const std::vector<Span>& runs) {
    if (runs.empty()) return 0.0;
    std::complex<double> cur = phases_(mulmod(runs[0].start, y_, phases_.modulus()));
    std::complex<double> s = cmul(cur, geometric(runs[0].length));
    for (std::size_t k = 1; k < runs.size(); ++k) {
      cur = cmul(cur, step(runs[k].start - runs[k - 1].start).phase);
      s += cmul(cur, geometric(runs[k].length));
    }
    return s;
  }

 private:
  const PhaseTable& phases_;
  std::int64_t y_;
  std::vector<std::complex<double>> g_{0.0};
  static constexpr std::size_t kMaxSteps = 8;
  std::vector<Step> steps_;
};

inline void collect_form_runs(const PipTable& t, std::int64_t x1, std::uint32_t form,
                              std::vector<Span>& out) {
  out.clear();
  t.form_runs(x1, form, [&](std::int64_t s, std::int64_t len) { out.push_back({s, len}); });
}

// Runs of one row with the gaps between successive starts indexed by a short
// list of distinct values, so per-target work avoids any lookup.
struct IndexedRuns {
  std::vector<Span> runs;
  std::vector<std::int64_t> deltas;    // distinct start gaps
  std::vector<std::uint8_t> gap;       // gap[k] indexes deltas for run k >= 1
  std::vector<std::int64_t> lengths;   // distinct lengths
  std::vector<std::uint8_t> len;       // len[k] indexes lengths

  static std::uint8_t index_of(std::vector<std::int64_t>& v, std::int64_t x) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == x) return static_cast<std::uint8_t>(i);
    }
    if (v.size() == 255) throw std::logic_error("too many distinct run gaps");
    v.push_back(x);
    return static_cast<std::uint8_t>(v.size() - 1);
  }

  void index() {
    deltas.clear();
    gap.assign(runs.size(), 0);
    lengths.clear();
    len.assign(runs.size(), 0);
    for (std::size_t k = 0; k < runs.size(); ++k) {
      len[k] = index_of(lengths, runs[k].length);
      if (k > 0) gap[k] = index_of(deltas, runs[k].start - runs[k - 1].start);
    }
  }
};

// Amplitude sum_k exp(2 pi i y start_k / n) G(len_k) and the phase-arc
// coverage of an indexed row, offset by the residue `lead`.
template <class Arc>
std::complex<double> indexed_sum(const IndexedRuns& r, RunPhaser& phaser, std::int64_t lead,
                                 const PhaseTable& phases, Arc* arc) {
  if (r.runs.empty()) return 0.0;
  const std::int64_t n = phases.modulus();
  const std::int64_t y = phaser.y();
  std::complex<double> step[256], geo[256];
  std::int64_t step_res[256], span[256];
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    step_res[i] = mulmod(r.deltas[i], y, n);
    step[i] = phases(step_res[i]);
  }
  for (std::size_t i = 0; i < r.lengths.size(); ++i) {
    geo[i] = phaser.geometric(r.lengths[i]);
    span[i] = (r.lengths[i] - 1) * y;
  }
  std::int64_t at = (lead + mulmod(r.runs[0].start, y, n)) % n;
  std::complex<double> cur = phases(at);
  std::complex<double> s = cmul(cur, geo[r.len[0]]);
  if (arc) arc->add(at, span[r.len[0]]);
  for (std::size_t k = 1; k < r.runs.size(); ++k) {
    const std::uint8_t d = r.gap[k];
    cur = cmul(cur, step[d]);
    s += cmul(cur, geo[r.len[k]]);
    if (arc) {
      at += step_res[d];
      if (at >= n) at -= n;
      arc->add(at, span[r.len[k]]);
    }
  }
  return s;
}

}  // namespace rqinfra::detail

#endif  // RQINFRA_SRC_QSIM_INTERNAL_HPP_
