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

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "rqinfra/error.hpp"
#include "rqinfra/qsim.hpp"
#include "qsim_internal.hpp"

namespace rqinfra {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanFree {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using ComplexBuf = std::unique_ptr<fftw_complex[], FftwFree>;
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanFree>;

int checked_int(std::int64_t n) {
  if (n > (std::int64_t{1} << 30)) throw CapExceeded("transform length", std::uint64_t{1} << 30);
  return static_cast<int>(n);
}

// Real-input transform of length n; |X(y)| = |X(n - y)| fills the upper half.
class RealDft {
 public:
  explicit RealDft(std::int64_t n)
      : n_(n),
        in_(fftw_alloc_real(static_cast<std::size_t>(n))),
        out_(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1))),
        plan_(fftw_plan_dft_r2c_1d(checked_int(n), in_.get(), out_.get(), FFTW_ESTIMATE)) {
    if (!in_ || !out_ || !plan_) throw CapExceeded("transform memory", static_cast<std::uint64_t>(n));
  }

  void clear() { std::fill(in_.get(), in_.get() + n_, 0.0); }
  double* in() { return in_.get(); }

  /// |X(y)|^2 for every y in [0, n).
  void power(std::vector<double>& out) {
    fftw_execute(plan_.get());
    out.resize(static_cast<std::size_t>(n_));
    for (std::int64_t y = 0; y <= n_ / 2; ++y) {
      double v = out_[y][0] * out_[y][0] + out_[y][1] * out_[y][1];
      out[y] = v;
      if (y != 0 && y != n_ - y) out[n_ - y] = v;
    }
  }

 private:
  std::int64_t n_;
  RealBuf in_;
  ComplexBuf out_;
  Plan plan_;
};

// Complex transform with the exp(+2 pi i x y / n) kernel.
class ComplexDft {
 public:
  explicit ComplexDft(std::int64_t n)
      : n_(n),
        buf_(fftw_alloc_complex(static_cast<std::size_t>(n))),
        plan_(fftw_plan_dft_1d(checked_int(n), buf_.get(), buf_.get(), FFTW_BACKWARD,
                               FFTW_ESTIMATE)) {
    if (!buf_ || !plan_) throw CapExceeded("transform memory", static_cast<std::uint64_t>(n));
  }

  void clear() { std::fill(&buf_[0][0], &buf_[0][0] + 2 * n_, 0.0); }
  void set(std::int64_t i, std::complex<double> v) {
    buf_[i][0] = v.real();
    buf_[i][1] = v.imag();
  }
  void power(std::vector<double>& out) {
    fftw_execute(plan_.get());
    out.resize(static_cast<std::size_t>(n_));
    for (std::int64_t y = 0; y < n_; ++y) out[y] = buf_[y][0] * buf_[y][0] + buf_[y][1] * buf_[y][1];
  }

 private:
  std::int64_t n_;
  ComplexBuf buf_;
  Plan plan_;
};

// Neumaier summation.
double compensated_sum(const std::vector<double>& v) {
  double s = 0, c = 0;
  for (double x : v) {
    double t = s + x;
    c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

std::int64_t draw_index(const std::vector<double>& w, std::mt19937_64& rng) {
  double total = compensated_sum(w);
  double u = std::generate_canonical<double, 53>(rng) * total;
  double acc = 0;
  std::int64_t last = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) continue;
    last = static_cast<std::int64_t>(i);
    acc += w[i];
    if (u < acc) return last;
  }
  return last;
}

std::int64_t draw_uniform(std::int64_t n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
}

// sum_{j < len} exp(2 pi i j y / n) for len = 0 .. max_len.
std::vector<std::complex<double>> geometric_prefix(std::int64_t y, std::int64_t max_len,
                                                   const PhaseTable& phases) {
  const std::int64_t n = phases.modulus();
  std::vector<std::complex<double>> g(static_cast<std::size_t>(max_len + 1));
  g[0] = 0;
  std::int64_t r = 0;
  for (std::int64_t j = 0; j < max_len; ++j) {
    g[j + 1] = g[j] + phases(r);
    r += y;
    if (r >= n) r -= n;
  }
  return g;
}

using detail::mulmod;

void fill_form_1d(const RegTable& table, std::uint32_t form, double* in, std::int64_t& p) {
  p = 0;
  for (const auto& r : table.runs) {
    if (r.form != form) continue;
    std::fill(in + r.start, in + r.start + r.length, 1.0);
    p += r.length;
  }
}

}  // namespace

PhaseTable::PhaseTable(std::int64_t n) : n_(n), table_(static_cast<std::size_t>(n)) {
  auto exact = [n](std::int64_t r) {
    long double a = 2 * std::numbers::pi_v<long double> * static_cast<long double>(r) /
                    static_cast<long double>(n);
    return std::complex<double>(static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a)));
  };
  if (n % 8 != 0) {
    for (std::int64_t r = 0; r < n; ++r) table_[r] = exact(r);
    return;
  }
  const std::int64_t e = n / 8, quarter = n / 4;
  for (std::int64_t r = 0; r <= e; ++r) table_[r] = exact(r);
  for (std::int64_t r = e + 1; r < quarter; ++r) {
    const auto& m = table_[quarter - r];
    table_[r] = {m.imag(), m.real()};
  }
  for (std::int64_t r = quarter; r < n; ++r) {
    const auto& m = table_[r - quarter];
    table_[r] = {-m.imag(), m.real()};
  }
}

ArcCover::ArcCover(std::int64_t modulus, int shift)
    : n_(modulus),
      shift_(shift),
      buckets_(((modulus - 1) >> shift) + 1),
      diff_(static_cast<std::size_t>(buckets_ + 1), 0) {}

int ArcCover::default_shift(std::int64_t modulus) {
  int s = 0;
  while ((modulus >> s) > (std::int64_t{1} << 12)) ++s;
  return s;
}

void ArcCover::add(std::int64_t start, std::int64_t span) {
  if (full_) return;
  if (span >= n_ - 1) {
    full_ = true;
    return;
  }
  if (start < 0 || start >= n_) {
    start %= n_;
    if (start < 0) start += n_;
  }
  std::int64_t end = start + span;
  auto mark = [&](std::int64_t a, std::int64_t b) {
    ++diff_[a >> shift_];
    --diff_[(b >> shift_) + 1];
  };
  if (end < n_) {
    mark(start, end);
  } else {
    mark(start, n_ - 1);
    mark(0, end - n_);
  }
}

double ArcCover::fraction() const {
  if (full_) return 1.0;
  // Longest circular run of empty buckets.
  std::int64_t cover = 0, run = 0, best = 0, lead = -1, covered = 0;
  for (std::int64_t b = 0; b < buckets_; ++b) {
    cover += diff_[b];
    if (cover > 0) {
      if (lead < 0) lead = run;
      best = std::max(best, run);
      run = 0;
      ++covered;
    } else {
      ++run;
    }
  }
  if (covered == 0) return 0.0;
  best = std::max(best, run + lead);
  double width = std::ldexp(1.0, shift_);
  return std::min(1.0, static_cast<double>(buckets_ - best) * width / static_cast<double>(n_));
}

// ---------------------------------------------------------------------------

Conditional1D conditional_1d(const RegTable& table, std::uint32_t form) {
  const std::int64_t n = 4 * table.q;
  RealDft dft(n);
  dft.clear();
  Conditional1D c{form, 0, {}};
  fill_form_1d(table, form, dft.in(), c.support);
  if (c.support == 0) throw InputError("form is not attained by Reg on [0, q)");
  dft.power(c.prob);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(c.support));
  for (double& v : c.prob) v *= scale;
  return c;
}

Conditional1D conditional_1d_naive(const RegTable& table, std::uint32_t form) {
  if (table.q > kMaxNaiveQ1D) throw CapExceeded("direct transform q", kMaxNaiveQ1D);
  const std::int64_t n = 4 * table.q;
  std::vector<std::int64_t> xs;
  for (const auto& r : table.runs) {
    if (r.form != form) continue;
    for (std::int64_t j = 0; j < r.length; ++j) xs.push_back(r.start + j);
  }
  if (xs.empty()) throw InputError("form is not attained by Reg on [0, q)");
  Conditional1D c{form, static_cast<std::int64_t>(xs.size()), std::vector<double>(n)};
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  for (std::int64_t y = 0; y < n; ++y) {
    long double re = 0, im = 0;
    for (std::int64_t x : xs) {
      long double a = two_pi * static_cast<long double>((x * y) % n) / static_cast<long double>(n);
      re += std::cos(a);
      im += std::sin(a);
    }
    c.prob[y] = static_cast<double>((re * re + im * im) /
                                    (static_cast<long double>(n) * static_cast<long double>(xs.size())));
  }
  return c;
}

FullDistribution1D full_distribution_1d(const RegTable& table) {
  FullDistribution1D d;
  d.q = table.q;
  d.modulus = 4 * table.q;
  d.prob.assign(static_cast<std::size_t>(d.modulus), 0.0);
  d.supports.assign(table.forms.size(), 0);
  RealDft dft(d.modulus);
  std::vector<double> power;
  const double scale = 1.0 / (static_cast<double>(d.modulus) * static_cast<double>(d.q));
  for (std::uint32_t f = 0; f < table.forms.size(); ++f) {
    dft.clear();
    fill_form_1d(table, f, dft.in(), d.supports[f]);
    if (d.supports[f] == 0) continue;
    dft.power(power);
    for (std::int64_t y = 0; y < d.modulus; ++y) d.prob[y] += power[y] * scale;
  }
  d.total = compensated_sum(d.prob);
  return d;
}

std::complex<double> amplitude_1d(const RegTable& table, std::uint32_t form, std::int64_t y,
                                  const PhaseTable& phases) {
  const std::int64_t n = phases.modulus();
  if (n != 4 * table.q) throw InputError("phase table modulus must be 4q");
  std::int64_t max_len = 0;
  for (const auto& r : table.runs) {
    if (r.form == form) max_len = std::max(max_len, r.length);
  }
  auto g = geometric_prefix(y, max_len, phases);
  std::complex<double> s = 0;
  for (const auto& r : table.runs) {
    if (r.form == form) s += phases(mulmod(r.start, y, n)) * g[r.length];
  }
  return s;
}

struct RegSampler::Impl {
  RealDft dft;
  std::vector<double> power;
  explicit Impl(std::int64_t n) : dft(n) {}
};

RegSampler::RegSampler(const RegTable& table)
    : table_(table), impl_(std::make_unique<Impl>(4 * table.q)) {}
RegSampler::~RegSampler() = default;

Sample1D RegSampler::draw(std::mt19937_64& rng) {
  const std::uint32_t form = table_.form_index_at(draw_uniform(table_.q, rng));
  impl_->dft.clear();
  std::int64_t p = 0;
  fill_form_1d(table_, form, impl_->dft.in(), p);
  impl_->dft.power(impl_->power);
  return {form, draw_index(impl_->power, rng)};
}

Sample1D sample_regulator_dual(const RegTable& table, std::mt19937_64& rng) {
  RegSampler s(table);
  return s.draw(rng);
}

// ---------------------------------------------------------------------------

namespace {

struct Dft2D {
  std::int64_t n;
  RealBuf in;
  ComplexBuf out;
  Plan plan;

  explicit Dft2D(std::int64_t n_)
      : n(n_),
        in(fftw_alloc_real(static_cast<std::size_t>(n_ * n_))),
        out(fftw_alloc_complex(static_cast<std::size_t>(n_ * (n_ / 2 + 1)))),
        plan(fftw_plan_dft_r2c_2d(checked_int(n_), checked_int(n_), in.get(), out.get(),
                                  FFTW_ESTIMATE)) {
    if (!in || !out || !plan) throw CapExceeded("transform memory", static_cast<std::uint64_t>(n_ * n_));
  }

  std::int64_t fill(const PipTable& t, std::uint32_t form) {
    std::fill(in.get(), in.get() + n * n, 0.0);
    std::int64_t p = 0;
    for (std::int64_t x1 = 0; x1 < t.q(); ++x1) {
      t.form_runs(x1, form, [&](std::int64_t s, std::int64_t len) {
        std::fill(in.get() + x1 * n + s, in.get() + x1 * n + s + len, 1.0);
        p += len;
      });
    }
    return p;
  }

  // Adds scale * |X(y1, y2)|^2 to out_prob over the full n x n grid.
  void accumulate(std::vector<double>& out_prob, double scale) {
    fftw_execute(plan.get());
    const std::int64_t h = n / 2 + 1;
    for (std::int64_t y1 = 0; y1 < n; ++y1) {
      for (std::int64_t y2 = 0; y2 < h; ++y2) {
        const auto& c = out[y1 * h + y2];
        double v = (c[0] * c[0] + c[1] * c[1]) * scale;
        out_prob[y1 * n + y2] += v;
        if (y2 != 0 && y2 != n - y2) out_prob[((n - y1) % n) * n + (n - y2)] += v;
      }
    }
  }
};

void check_full_2d(const PipTable& t) {
  if (t.q() > kMaxFullQ2D) throw CapExceeded("q for a full two-dimensional transform", kMaxFullQ2D);
}

}  // namespace

std::vector<double> conditional_2d(const PipTable& table, std::uint32_t form) {
  check_full_2d(table);
  Dft2D dft(8 * table.q());
  std::int64_t p = dft.fill(table, form);
  if (p == 0) throw InputError("form is not attained by PIP on [0, q)^2");
  std::vector<double> prob(static_cast<std::size_t>(dft.n * dft.n), 0.0);
  dft.accumulate(prob, 1.0 / (static_cast<double>(dft.n) * static_cast<double>(dft.n) *
                              static_cast<double>(p)));
  return prob;
}

std::vector<double> conditional_2d_naive(const PipTable& table, std::uint32_t form) {
  if (table.q() > kMaxNaiveQ2D) throw CapExceeded("direct transform q", kMaxNaiveQ2D);
  const std::int64_t n = 8 * table.q();
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::int64_t x1 = 0; x1 < table.q(); ++x1) {
    table.form_runs(x1, form, [&](std::int64_t s, std::int64_t len) {
      for (std::int64_t j = 0; j < len; ++j) pts.emplace_back(x1, s + j);
    });
  }
  if (pts.empty()) throw InputError("form is not attained by PIP on [0, q)^2");
  std::vector<double> prob(static_cast<std::size_t>(n * n));
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  const long double norm = static_cast<long double>(n) * static_cast<long double>(n) *
                           static_cast<long double>(pts.size());
  for (std::int64_t y1 = 0; y1 < n; ++y1) {
    for (std::int64_t y2 = 0; y2 < n; ++y2) {
      long double re = 0, im = 0;
      for (auto [a, b] : pts) {
        long double ang =
            two_pi * static_cast<long double>((a * y1 + b * y2) % n) / static_cast<long double>(n);
        re += std::cos(ang);
        im += std::sin(ang);
      }
      prob[y1 * n + y2] = static_cast<double>((re * re + im * im) / norm);
    }
  }
  return prob;
}

FullDistribution2D full_distribution_2d(const PipTable& table) {
  check_full_2d(table);
  FullDistribution2D d;
  d.q = table.q();
  d.modulus = 8 * table.q();
  Dft2D dft(d.modulus);
  d.prob.assign(static_cast<std::size_t>(d.modulus * d.modulus), 0.0);
  d.supports.assign(table.form_count(), 0);
  const double q2 = static_cast<double>(d.q) * static_cast<double>(d.q);
  const double scale = 1.0 / (static_cast<double>(d.modulus) * static_cast<double>(d.modulus) * q2);
  for (std::uint32_t f = 0; f < table.form_count(); ++f) {
    d.supports[f] = dft.fill(table, f);
    if (d.supports[f] == 0) continue;
    dft.accumulate(d.prob, scale);
  }
  d.total = compensated_sum(d.prob);
  return d;
}

namespace {

// T_x1(y2) = sum over the form's runs in row x1 of exp(2 pi i x2 y2 / 8q).
std::complex<double> row_amplitude(const PipTable& t, std::int64_t x1, std::uint32_t form,
                                   detail::RunPhaser& phaser, const PhaseTable& phases,
                                   detail::IndexedRuns& buf) {
  detail::collect_form_runs(t, x1, form, buf.runs);
  buf.index();
  return detail::indexed_sum<ArcCover>(buf, phaser, 0, phases, nullptr);
}

}  // namespace

std::complex<double> amplitude_2d(const PipTable& table, std::uint32_t form, std::int64_t y1,
                                  std::int64_t y2, const PhaseTable& phases) {
  const std::int64_t n = phases.modulus();
  if (n != 8 * table.q()) throw InputError("phase table modulus must be 8q");
  detail::RunPhaser phaser(phases, y2);
  detail::IndexedRuns buf;
  std::complex<double> s = 0;
  for (std::int64_t x1 = 0; x1 < table.q(); ++x1) {
    if (table.cycle_of_row(x1) != table.cycle_of_form(form)) continue;
    std::complex<double> t = row_amplitude(table, x1, form, phaser, phases, buf);
    if (t != 0.0) s += phases(mulmod(x1, y1, n)) * t;
  }
  return s;
}

std::vector<double> marginal_y2_2d(const PipTable& table, std::uint32_t form) {
  if (table.q() > (std::int64_t{1} << 12)) throw CapExceeded("q for a y2 marginal", 1 << 12);
  const std::int64_t n = 8 * table.q();
  RealDft dft(n);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0), power;
  std::int64_t p = 0;
  for (std::int64_t x1 = 0; x1 < table.q(); ++x1) {
    if (table.cycle_of_row(x1) != table.cycle_of_form(form)) continue;
    dft.clear();
    bool any = false;
    table.form_runs(x1, form, [&](std::int64_t s, std::int64_t len) {
      std::fill(dft.in() + s, dft.in() + s + len, 1.0);
      p += len;
      any = true;
    });
    if (!any) continue;
    dft.power(power);
    for (std::int64_t y = 0; y < n; ++y) acc[y] += power[y];
  }
  if (p == 0) throw InputError("form is not attained by PIP on [0, q)^2");
  for (double& v : acc) v /= static_cast<double>(n) * static_cast<double>(p);
  return acc;
}

struct PipSampler::Impl {
  PhaseTable phases;
  RealDft row_dft;
  ComplexDft col_dft;
  std::vector<double> power;
  explicit Impl(std::int64_t n) : phases(n), row_dft(n), col_dft(n) {}
};

PipSampler::PipSampler(const PipTable& table)
    : table_(table), impl_(std::make_unique<Impl>(8 * table.q())) {}
PipSampler::~PipSampler() = default;

Sample2D PipSampler::draw(std::mt19937_64& rng) {
  const std::int64_t q = table_.q();
  const std::int64_t x1m = draw_uniform(q, rng);
  const std::int64_t x2m = draw_uniform(q, rng);
  const std::uint32_t form = table_.at(x1m, x2m);

  // Row weights p_x1.
  std::vector<double> weight(static_cast<std::size_t>(q), 0.0);
  for (std::int64_t x1 = 0; x1 < q; ++x1) {
    if (table_.cycle_of_row(x1) != table_.cycle_of_form(form)) continue;
    std::int64_t w = 0;
    table_.form_runs(x1, form, [&](std::int64_t, std::int64_t len) { w += len; });
    weight[x1] = static_cast<double>(w);
  }
  const std::int64_t row = draw_index(weight, rng);

  // y2 from the chosen row's own distribution.
  auto& rd = impl_->row_dft;
  rd.clear();
  table_.form_runs(row, form, [&](std::int64_t s, std::int64_t len) {
    std::fill(rd.in() + s, rd.in() + s + len, 1.0);
  });
  rd.power(impl_->power);
  const std::int64_t y2 = draw_index(impl_->power, rng);

  // y1 given y2.
  auto& cd = impl_->col_dft;
  cd.clear();
  detail::RunPhaser phaser(impl_->phases, y2);
  detail::IndexedRuns buf;
  for (std::int64_t x1 = 0; x1 < q; ++x1) {
    if (weight[x1] == 0) continue;
    cd.set(x1, row_amplitude(table_, x1, form, phaser, impl_->phases, buf));
  }
  cd.power(impl_->power);
  const std::int64_t y1 = draw_index(impl_->power, rng);
  return {form, y1, y2};
}

Sample2D sample_pip_dual(const PipTable& table, std::mt19937_64& rng) {
  PipSampler s(table);
  return s.draw(rng);
}

// ---------------------------------------------------------------------------

namespace {

// Nearest integer to num / den (den > 0); ties cannot occur for the
// irrational quantities these approximate, and are rejected by the callers'
// perturbation check.
Int nearest(const Int& num, const Int& den) { return floor_div(2 * num + den, 2 * den); }

}  // namespace

TargetSet1D target_set_1d(const RegTable& table, const PrincipalCycle& cycle) {
  TargetSet1D t;
  t.stats = table.stats;
  const ApproxReal& r = cycle.regulator_narrow;
  const Int m = r.mantissa(), e = r.err_ulps() + 1;
  const Int q = from_i64(table.q);
  const Int limit_den = 4 * (t.stats.m_max + 1);
  t.y_limit_num = table.q;
  for (std::int64_t z = 0;; ++z) {
    Int num = shift_left(q * z, static_cast<unsigned long>(r.frac_bits()));
    Int y = nearest(num, m);
    if (nearest(num, m - e) != y || nearest(num, m + e) != y) {
      throw InvariantViolation("target set membership undecided at this precision");
    }
    if (y * limit_den > q) break;
    t.ys.push_back(to_i64(y));
    t.zs.push_back(z);
  }
  return t;
}

TargetSet2D target_set_2d(const PipTable& table, const PrincipalCycle& cycle, const Int& n,
                          const ApproxReal& S) {
  if (n < 1) throw InputError("order must be positive");
  TargetSet2D t;
  t.stats = table.run_stats();
  const long bits = std::max(S.frac_bits(), cycle.regulator_narrow.frac_bits());
  const ApproxReal r = cycle.regulator_narrow.at_frac_bits(bits);
  const ApproxReal s = S.at_frac_bits(bits);
  const Int m = r.mantissa(), em = r.err_ulps() + 1;
  const Int ms = s.mantissa(), es = s.err_ulps() + 1;
  const Int q = from_i64(table.q());
  const Int mod = 8 * q;
  for (Int z2 = 0;; ++z2) {
    Int num2 = shift_left(2 * q * z2, static_cast<unsigned long>(bits));
    Int y2 = nearest(num2, m);
    if (nearest(num2, m - em) != y2 || nearest(num2, m + em) != y2) {
      throw InvariantViolation("target set membership undecided at this precision");
    }
    if (y2 * (t.stats.m_max + 2) >= q) break;
    for (Int z1 = 0; z1 < n; ++z1) {
      auto y1_of = [&](const Int& mm, const Int& mss) {
        return mod_floor(nearest(8 * q * (z1 * mm + z2 * mss), n * mm), mod);
      };
      Int y1 = y1_of(m, ms);
      for (const Int& a : {Int(m - em), Int(m + em)}) {
        for (const Int& b : {Int(ms - es), Int(ms + es)}) {
          if (y1_of(a, b) != y1) throw InvariantViolation("target set membership undecided");
        }
      }
      t.ys.emplace_back(to_i64(y1), to_i64(y2));
      t.zs.emplace_back(z1, z2);
    }
  }
  return t;
}

}  // namespace rqinfra
