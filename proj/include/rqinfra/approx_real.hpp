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

#pragma once

#include <string>

#include "rqinfra/bigint.hpp"

namespace rqinfra {

/// Dyadic fixed-point value mantissa / 2^frac_bits together with an error
/// bound err_ulps / 2^frac_bits on its distance to the true real.
class ApproxReal {
 public:
  ApproxReal() = default;
  ApproxReal(Int mantissa, long frac_bits, Int err_ulps = 0);

  static ApproxReal from_int(const Int& v) { return ApproxReal(v, 0, 0); }

  const Int& mantissa() const { return mantissa_; }
  long frac_bits() const { return frac_bits_; }
  const Int& err_ulps() const { return err_ulps_; }

  double value() const;
  double err_bound() const;

  /// Rescale. Raising the precision is exact; lowering it floors the
  /// mantissa and adds one ulp of the new scale to the error.
  ApproxReal at_frac_bits(long bits) const;
  /// Exact division by 2.
  ApproxReal halved() const;

  ApproxReal operator-() const { return ApproxReal(-mantissa_, frac_bits_, err_ulps_); }
  friend ApproxReal operator+(const ApproxReal& x, const ApproxReal& y);
  friend ApproxReal operator-(const ApproxReal& x, const ApproxReal& y);
  ApproxReal& operator+=(const ApproxReal& y) { return *this = *this + y; }
  ApproxReal& operator-=(const ApproxReal& y) { return *this = *this - y; }
  /// Exact scaling by an integer; the error scales by |k|.
  friend ApproxReal operator*(const ApproxReal& x, const Int& k);

  /// Three-way comparison of the represented dyadic values (errors ignored).
  friend int compare(const ApproxReal& x, const ApproxReal& y);
  /// value <= num / 2^bits, exactly.
  bool le_dyadic(const Int& num, long bits) const;
  /// err_bound < num / 2^bits, exactly.
  bool err_below(const Int& num, long bits) const;

  /// ceil(value * 2^bits) and floor(value * 2^bits), exactly.
  Int ceil_scaled(long bits) const;
  Int floor_scaled(long bits) const;

  /// `mantissa p frac_bits`
  std::string to_string() const;

 private:
  Int mantissa_ = 0;
  long frac_bits_ = 0;
  Int err_ulps_ = 0;
};

/// ln(num / den) to within 2^-precision_bits. Argument reduction to [1, 2)
/// by exponent extraction, then an atanh series in integer arithmetic with
/// truncating rounding; the result is a deterministic function of the
/// arguments and has err_bound exactly 2^-precision_bits.
ApproxReal approx_ln(const Int& num, const Int& den, long precision_bits);
inline ApproxReal approx_ln(const Int& x, long precision_bits) {
  return approx_ln(x, Int(1), precision_bits);
}

}  // namespace rqinfra
