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

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rqinfra {

using Int = mpz_class;

struct BezoutResult {
  Int gcd;
  Int s;  // s*a + t*b == gcd
  Int t;
};

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

/// Floor division, rounding toward negative infinity.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Least non-negative residue of a modulo |m|.
inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

BezoutResult ext_gcd(const Int& a, const Int& b);

/// u < sqrt(d), decided exactly (d > 0).
inline bool less_than_sqrt(const Int& u, const Int& d) { return u < 0 || u * u < d; }

/// v > sqrt(d), decided exactly (d > 0, d not a perfect square).
inline bool greater_than_sqrt(const Int& v, const Int& d) { return v > 0 && v * v > d; }

inline Int shift_left(const Int& a, unsigned long bits) {
  Int r;
  mpz_mul_2exp(r.get_mpz_t(), a.get_mpz_t(), bits);
  return r;
}

/// floor(a / 2^bits)
inline Int shift_right_floor(const Int& a, unsigned long bits) {
  Int r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), bits);
  return r;
}

/// Number of bits of |a| (0 for a == 0).
inline long bit_length(const Int& a) {
  return a == 0 ? 0 : static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
}

inline std::int64_t to_i64(const Int& a) {
  return static_cast<std::int64_t>(mpz_get_si(a.get_mpz_t()));
}

inline bool fits_i64(const Int& a) { return mpz_fits_slong_p(a.get_mpz_t()) != 0; }

inline Int from_i64(std::int64_t v) { return Int(static_cast<long>(v)); }

inline std::string to_string(const Int& a) { return a.get_str(10); }

}  // namespace rqinfra
