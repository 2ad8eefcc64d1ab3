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

#include "rqinfra/forms.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "rqinfra/error.hpp"

namespace rqinfra {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

Int parse_int(std::string_view text, const char* what) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  bool ok = !s.empty();
  for (std::size_t i = 0; i < s.size() && ok; ++i) {
    ok = std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-' && s.size() > 1);
  }
  if (!ok) throw InputError(std::string("form text: ") + what + " is not a decimal integer");
  return Int(s, 10);
}

}  // namespace

std::optional<std::string> Discriminant::violation(const Int& value) {
  if (value <= 0) return "discriminant must be positive";
  Int r = mod_floor(value, 4);
  if (r != 0 && r != 1) return "discriminant must be 0 or 1 mod 4";
  if (is_square(value)) return "discriminant must not be a perfect square";
  return std::nullopt;
}

Discriminant Discriminant::make(const Int& value) {
  if (auto v = violation(value)) throw InputError(*v + " (got " + to_string(value) + ")");
  return Discriminant(std::make_shared<const Rep>(Rep{value, isqrt(value)}));
}

Form Form::make(const Discriminant& disc, Int a, Int b, Int c) {
  if (b * b - 4 * a * c != disc.value()) {
    throw InputError("b^2 - 4ac must equal the discriminant " + to_string(disc.value()));
  }
  if (gcd(gcd(a, b), c) != 1) throw InputError("gcd(a, b, c) must be 1");
  return Form(disc, std::move(a), std::move(b), std::move(c));
}

Form Form::from_ab(const Discriminant& disc, Int a, Int b) {
  if (a == 0) throw InputError("a must be nonzero");
  Int num = b * b - disc.value();
  Int den = 4 * a;
  if (mod_floor(num, den) != 0) {
    throw InputError("b^2 - disc must be divisible by 4a");
  }
  Int c = num / den;
  return make(disc, std::move(a), std::move(b), std::move(c));
}

bool is_reduced(const Form& f) {
  const Int& d = f.disc().value();
  const Int& b = f.b();
  // b < sqrt(D) and |sqrt(D) - 2|a|| < b, i.e. sqrt(D) - b < 2|a| < sqrt(D) + b.
  if (b <= 0 || !less_than_sqrt(b, d)) return false;
  Int two_a = 2 * abs_int(f.a());
  return greater_than_sqrt(two_a + b, d) && less_than_sqrt(two_a - b, d);
}

std::optional<ReducedForm> ReducedForm::try_make(const Form& f) {
  if (!is_reduced(f)) return std::nullopt;
  return ReducedForm(f);
}

ReducedForm ReducedForm::make(const Form& f) {
  if (!is_reduced(f)) {
    throw InputError("form " + format_form(f) + " violates |sqrt(D) - 2|a|| < b < sqrt(D)");
  }
  return ReducedForm(f);
}

std::optional<PositiveReducedForm> PositiveReducedForm::try_make(const ReducedForm& f) {
  if (f.a() <= 0) return std::nullopt;
  return PositiveReducedForm(f);
}

PositiveReducedForm PositiveReducedForm::make(const ReducedForm& f) {
  if (f.a() <= 0) throw InputError("form " + format_form(f.form()) + " must have a > 0");
  return PositiveReducedForm(f);
}

PositiveReducedForm unit_form(const Discriminant& disc) {
  Int b = disc.floor_sqrt();
  if (mod_floor(b - disc.value(), 2) != 0) b -= 1;
  Int c = (b * b - disc.value()) / 4;
  return PositiveReducedForm::make(ReducedForm::make(Form::trusted(disc, 1, b, c)));
}

Form rho_step(const Form& f) {
  const Int& d = f.disc().value();
  const Int& c = f.c();
  Int abs_c = abs_int(c);
  Int two_c = 2 * abs_c;
  Int big_b;
  if (greater_than_sqrt(abs_c, d)) {
    // Representative of -b mod 2|c| in (-|c|, |c|].
    big_b = mod_floor(-f.b(), two_c);
    if (big_b > abs_c) big_b -= two_c;
  } else {
    // Representative in (sqrt(D) - 2|c|, sqrt(D)).
    const Int& r = f.disc().floor_sqrt();
    big_b = r - mod_floor(r + f.b(), two_c);
  }
  Int big_a = (big_b * big_b - d) / (4 * c);
  return Form::trusted(f.disc(), c, std::move(big_b), std::move(big_a));
}

ReducedForm rho(const ReducedForm& f) { return ReducedForm::make(rho_step(f.form())); }

ReducedForm rho_inv(const ReducedForm& f) {
  // With tau(a, b, c) = (c, b, a), which preserves reducedness,
  // rho^-1 = tau o rho o tau.
  const Form& g = f.form();
  Form swapped = Form::trusted(g.disc(), g.c(), g.b(), g.a());
  Form s = rho_step(swapped);
  return ReducedForm::make(Form::trusted(s.disc(), s.c(), s.b(), s.a()));
}

Reduction reduce(const Form& f) {
  return reduce_visit(f, [](const Form&) {});
}

Form compose(const Form& f1, const Form& f2) {
  if (!(f1.disc() == f2.disc())) throw InputError("compose: discriminants differ");
  if (f1.a() <= 0 || f2.a() <= 0) throw InputError("compose: first coefficients must be positive");
  const Int& d = f1.disc().value();
  const Int &a1 = f1.a(), &b1 = f1.b(), &a2 = f2.a(), &b2 = f2.b();
  Int s = (b1 + b2) / 2;

  // j*a2 + k*a1 + l*s = m = gcd(a1, a2, s).
  BezoutResult e1 = ext_gcd(a2, a1);
  BezoutResult e2 = ext_gcd(e1.gcd, s);
  const Int& m = e2.gcd;
  Int j = e2.s * e1.s;
  Int k = e2.s * e1.t;
  const Int& l = e2.t;

  Int a = (a1 * a2) / (m * m);
  Int num = j * a2 * b1 + k * a1 * b2 + l * ((b1 * b2 + d) / 2);
  if (mod_floor(num, m) != 0) throw InvariantViolation("compose: b numerator not divisible by m");
  Int b = mod_floor(num / m, 2 * a);
  if (b > a) b -= 2 * a;
  Int c_num = b * b - d;
  if (mod_floor(c_num, 4 * a) != 0) throw InvariantViolation("compose: c is not integral");
  return Form::trusted(f1.disc(), std::move(a), std::move(b), c_num / (4 * a));
}

PositiveReducedForm to_positive_rep(const ReducedForm& f) {
  if (f.a() > 0) return PositiveReducedForm::make(f);
  return PositiveReducedForm::make(rho(f));
}

bool same_orbit(const Form& f, const Form& g) {
  if (!(f.disc() == g.disc()) || f.a() != g.a()) return false;
  return mod_floor(f.b() - g.b(), 2 * f.a()) == 0;
}

std::string format_form(const Form& f) {
  return to_string(f.disc().value()) + ":" + to_string(f.a()) + "," + to_string(f.b()) + "," +
         to_string(f.c());
}

Form parse_form(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InputError("form text must look like D:a,b,c");
  std::string_view rest = text.substr(colon + 1);
  auto c1 = rest.find(',');
  auto c2 = c1 == std::string_view::npos ? c1 : rest.find(',', c1 + 1);
  if (c2 == std::string_view::npos || rest.find(',', c2 + 1) != std::string_view::npos) {
    throw InputError("form text must look like D:a,b,c");
  }
  Discriminant disc = Discriminant::make(parse_int(text.substr(0, colon), "D"));
  return Form::make(disc, parse_int(rest.substr(0, c1), "a"),
                    parse_int(rest.substr(c1 + 1, c2 - c1 - 1), "b"),
                    parse_int(rest.substr(c2 + 1), "c"));
}

std::vector<ReducedForm> all_reduced_forms(const Discriminant& disc) {
  const Int& d = disc.value();
  std::vector<ReducedForm> out;
  Int b = disc.odd() ? 1 : 2;
  for (; less_than_sqrt(b, d); b += 2) {
    Int n = (d - b * b) / 4;  // |a| * |c|
    for (Int a = 1; a * a <= n; ++a) {
      if (mod_floor(n, a) != 0) continue;
      Int co = n / a;
      std::vector<Int> cands{a};
      if (co != a) cands.push_back(co);
      for (const Int& x : cands) {
        Int two_x = 2 * x;
        if (!greater_than_sqrt(two_x + b, d) || !less_than_sqrt(two_x - b, d)) continue;
        Int other = n / x;
        if (gcd(gcd(x, b), other) != 1) continue;
        out.push_back(ReducedForm::make(Form::trusted(disc, x, b, -other)));
        out.push_back(ReducedForm::make(Form::trusted(disc, -x, b, other)));
      }
    }
  }
  return out;
}

}  // namespace rqinfra
