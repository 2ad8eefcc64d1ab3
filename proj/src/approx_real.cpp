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

#include "rqinfra/approx_real.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "rqinfra/error.hpp"

namespace rqinfra {

namespace {

// mpz_get_d truncates; split to keep 53 significant bits.
double dyadic_to_double(const Int& m, long bits) {
  long shift = std::max(0L, bit_length(m) - 60);
  Int top = m;
  if (shift > 0) mpz_tdiv_q_2exp(top.get_mpz_t(), m.get_mpz_t(), shift);
  return std::ldexp(mpz_get_d(top.get_mpz_t()), static_cast<int>(shift - bits));
}

// atanh((N - D) / (N + D)) * 2^W for N >= D > 0, truncated. The total error
// is below (W + 10) ulps when the argument is at most 1/3.
Int atanh_fixed(const Int& n, const Int& d, long w) {
  Int t = shift_left(n - d, w) / (n + d);
  Int t2 = shift_right_floor(t * t, w);
  Int p = t;
  Int sum = 0;
  for (unsigned long k = 1; p != 0; k += 2) {
    sum += p / k;
    p = shift_right_floor(p * t2, w);
  }
  return sum;
}

const Int& ln2_fixed(long w) {
  thread_local std::unordered_map<long, Int> cache;
  auto it = cache.find(w);
  if (it != cache.end()) return it->second;
  return cache.emplace(w, 2 * atanh_fixed(2, 1, w)).first->second;
}

}  // namespace

ApproxReal::ApproxReal(Int mantissa, long frac_bits, Int err_ulps)
    : mantissa_(std::move(mantissa)), frac_bits_(frac_bits), err_ulps_(std::move(err_ulps)) {
  if (frac_bits_ < 0) throw InvariantViolation("ApproxReal: negative frac_bits");
  if (err_ulps_ < 0) throw InvariantViolation("ApproxReal: negative error");
}

double ApproxReal::value() const { return dyadic_to_double(mantissa_, frac_bits_); }
double ApproxReal::err_bound() const { return dyadic_to_double(err_ulps_, frac_bits_); }

ApproxReal ApproxReal::at_frac_bits(long bits) const {
  if (bits >= frac_bits_) {
    long s = bits - frac_bits_;
    return ApproxReal(shift_left(mantissa_, s), bits, shift_left(err_ulps_, s));
  }
  long s = frac_bits_ - bits;
  // Error in new ulps: ceil(err / 2^s) + 1 for the floor.
  Int err = shift_right_floor(err_ulps_ + (shift_left(Int(1), s) - 1), s) + 1;
  return ApproxReal(shift_right_floor(mantissa_, s), bits, err);
}

ApproxReal ApproxReal::halved() const { return ApproxReal(mantissa_, frac_bits_ + 1, err_ulps_); }

ApproxReal operator+(const ApproxReal& x, const ApproxReal& y) {
  long bits = std::max(x.frac_bits_, y.frac_bits_);
  ApproxReal a = x.at_frac_bits(bits), b = y.at_frac_bits(bits);
  return ApproxReal(a.mantissa_ + b.mantissa_, bits, a.err_ulps_ + b.err_ulps_);
}

ApproxReal operator-(const ApproxReal& x, const ApproxReal& y) { return x + (-y); }

ApproxReal operator*(const ApproxReal& x, const Int& k) {
  Int ak = k < 0 ? Int(-k) : k;
  return ApproxReal(x.mantissa_ * k, x.frac_bits_, x.err_ulps_ * ak);
}

int compare(const ApproxReal& x, const ApproxReal& y) {
  long bits = std::max(x.frac_bits_, y.frac_bits_);
  Int a = shift_left(x.mantissa_, bits - x.frac_bits_);
  Int b = shift_left(y.mantissa_, bits - y.frac_bits_);
  return cmp(a, b) < 0 ? -1 : (a == b ? 0 : 1);
}

bool ApproxReal::le_dyadic(const Int& num, long bits) const {
  long common = std::max(bits, frac_bits_);
  return shift_left(mantissa_, common - frac_bits_) <= shift_left(num, common - bits);
}

bool ApproxReal::err_below(const Int& num, long bits) const {
  long common = std::max(bits, frac_bits_);
  return shift_left(err_ulps_, common - frac_bits_) < shift_left(num, common - bits);
}

Int ApproxReal::ceil_scaled(long bits) const {
  if (bits >= frac_bits_) return shift_left(mantissa_, bits - frac_bits_);
  Int r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), mantissa_.get_mpz_t(), frac_bits_ - bits);
  return r;
}

Int ApproxReal::floor_scaled(long bits) const {
  if (bits >= frac_bits_) return shift_left(mantissa_, bits - frac_bits_);
  return shift_right_floor(mantissa_, frac_bits_ - bits);
}

std::string ApproxReal::to_string() const {
  return rqinfra::to_string(mantissa_) + " p " + std::to_string(frac_bits_);
}

ApproxReal approx_ln(const Int& num, const Int& den, long precision_bits) {
  if (num <= 0 || den <= 0) throw InputError("approx_ln: argument must be positive");
  if (precision_bits < 1) throw InputError("approx_ln: precision must be below 1");
  const long out_bits = precision_bits + 2;
  if (num == den) return ApproxReal(0, out_bits, 4);

  long e = bit_length(num) - bit_length(den);
  Int n = shift_left(num, static_cast<unsigned long>(std::max(0L, -e)));
  Int d = shift_left(den, static_cast<unsigned long>(std::max(0L, e)));
  if (n < d) {
    n = shift_left(n, 1);
    --e;
  }
  long abs_e = e < 0 ? -e : e;
  long w = precision_bits + 2 * bit_length(Int(precision_bits + 64)) +
           bit_length(Int(abs_e + 1)) + 16;

  Int total = 2 * atanh_fixed(n, d, w);
  if (e != 0) total += ln2_fixed(w) * e;
  // Truncation error of the series is below 2^-(precision+1); the final
  // floor adds at most one ulp at precision + 2 bits.
  return ApproxReal(shift_right_floor(total, w - out_bits), out_bits, 4);
}

}  // namespace rqinfra
