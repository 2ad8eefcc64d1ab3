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

// Indefinite binary quadratic forms aX^2 + bXY + cY^2 of positive
// non-square discriminant. All predicates involving sqrt(disc) are decided
// with exact integer comparisons.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rqinfra/bigint.hpp"

namespace rqinfra {

class Discriminant {
 public:
  /// Throws InputError naming the violated invariant.
  static Discriminant make(const Int& value);
  static Discriminant make(long value) { return make(Int(value)); }

  /// Description of the first violated invariant, or nullopt if valid.
  static std::optional<std::string> violation(const Int& value);

  const Int& value() const { return rep_->value; }
  /// floor(sqrt(value)); sqrt(value) itself is irrational.
  const Int& floor_sqrt() const { return rep_->root; }
  bool odd() const { return mpz_odd_p(rep_->value.get_mpz_t()) != 0; }

  friend bool operator==(const Discriminant& x, const Discriminant& y) {
    return x.rep_ == y.rep_ || x.value() == y.value();
  }

 private:
  struct Rep {
    Int value;
    Int root;
  };
  explicit Discriminant(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

class Form {
 public:
  /// Validated construction; throws InputError naming the violated invariant.
  static Form make(const Discriminant& disc, Int a, Int b, Int c);
  /// c is derived as (b^2 - disc) / 4a; throws if that is not an integer.
  static Form from_ab(const Discriminant& disc, Int a, Int b);
  /// For internal use where the invariants hold by construction.
  static Form trusted(const Discriminant& disc, Int a, Int b, Int c) {
    return Form(disc, std::move(a), std::move(b), std::move(c));
  }

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  const Discriminant& disc() const { return disc_; }

  friend bool operator==(const Form& x, const Form& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.disc_ == y.disc_;
  }

 private:
  Form(Discriminant disc, Int a, Int b, Int c)
      : disc_(std::move(disc)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  Discriminant disc_;
  Int a_, b_, c_;
};

/// |sqrt(D) - 2|a|| < b < sqrt(D).
bool is_reduced(const Form& f);

class ReducedForm {
 public:
  static std::optional<ReducedForm> try_make(const Form& f);
  static ReducedForm make(const Form& f);

  const Form& form() const { return f_; }
  const Int& a() const { return f_.a(); }
  const Int& b() const { return f_.b(); }
  const Int& c() const { return f_.c(); }
  const Discriminant& disc() const { return f_.disc(); }

  friend bool operator==(const ReducedForm& x, const ReducedForm& y) { return x.f_ == y.f_; }

 private:
  explicit ReducedForm(Form f) : f_(std::move(f)) {}
  Form f_;
};

class PositiveReducedForm {
 public:
  static std::optional<PositiveReducedForm> try_make(const ReducedForm& f);
  static PositiveReducedForm make(const ReducedForm& f);
  static PositiveReducedForm make(const Form& f) { return make(ReducedForm::make(f)); }

  const ReducedForm& reduced() const { return r_; }
  const Form& form() const { return r_.form(); }
  const Int& a() const { return r_.a(); }
  const Int& b() const { return r_.b(); }
  const Int& c() const { return r_.c(); }
  const Discriminant& disc() const { return r_.disc(); }

  friend bool operator==(const PositiveReducedForm& x, const PositiveReducedForm& y) {
    return x.r_ == y.r_;
  }

 private:
  explicit PositiveReducedForm(ReducedForm r) : r_(std::move(r)) {}
  ReducedForm r_;
};

/// The principal form (1, b, (b^2 - D)/4) with b the largest integer below
/// sqrt(D) congruent to D mod 2.
PositiveReducedForm unit_form(const Discriminant& disc);

/// One application of the reduction operator to an arbitrary form. The new
/// middle coefficient B = -b mod 2c is normalized into (-|c|, |c|] when
/// |c| > sqrt(D), and into (sqrt(D) - 2|c|, sqrt(D)) otherwise.
Form rho_step(const Form& f);

ReducedForm rho(const ReducedForm& f);
ReducedForm rho_inv(const ReducedForm& f);

struct Reduction {
  ReducedForm form;
  int steps;
};

Reduction reduce(const Form& f);

/// Reduce, calling on_step(form_before_step) for every rho application.
template <class OnStep>
Reduction reduce_visit(const Form& f, OnStep&& on_step) {
  int steps = 0;
  Form cur = f;
  while (!is_reduced(cur)) {
    on_step(static_cast<const Form&>(cur));
    cur = rho_step(cur);
    ++steps;
  }
  return {ReducedForm::make(cur), steps};
}

/// Dirichlet composition of two forms of the same discriminant with
/// positive first coefficients. The result has a = a1*a2/m^2 and b
/// normalized into (-a, a]; it is in general not reduced.
Form compose(const Form& f1, const Form& f2);

/// f if f.a > 0, else rho(f).
PositiveReducedForm to_positive_rep(const ReducedForm& f);

/// Equality of Gamma-orbits: same a and b == b' (mod 2a).
bool same_orbit(const Form& f, const Form& g);

/// `D:a,b,c` in decimal.
std::string format_form(const Form& f);

/// Inverse of format_form. Throws InputError naming the violated invariant.
Form parse_form(std::string_view text);

/// Every primitive reduced form of the discriminant (both signs of a).
std::vector<ReducedForm> all_reduced_forms(const Discriminant& disc);

/// Strict weak order on (a, b), for use as a map key.
struct FormLess {
  bool operator()(const Form& x, const Form& y) const {
    if (x.a() != y.a()) return x.a() < y.a();
    return x.b() < y.b();
  }
};

}  // namespace rqinfra
