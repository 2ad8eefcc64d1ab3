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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mpfr_oracle.hpp"
#include "rqinfra/error.hpp"
#include "rqinfra/forms.hpp"

using namespace rqinfra;

namespace {

Form mk(long d, long a, long b, long c) { return Form::make(Discriminant::make(d), a, b, c); }

std::vector<PositiveReducedForm> principal_positive(const Discriminant& disc) {
  std::vector<PositiveReducedForm> out;
  ReducedForm f = unit_form(disc).reduced();
  do {
    if (f.a() > 0) out.push_back(PositiveReducedForm::make(f));
    f = rho(f);
  } while (!(f == unit_form(disc).reduced()));
  return out;
}

bool on_cycle(const std::vector<PositiveReducedForm>& cyc, const Form& f) {
  for (const auto& g : cyc) {
    if (same_orbit(g.form(), f)) return true;
  }
  return false;
}

// Reference reducedness decided with 320-bit floating point.
bool reduced_mpfr(const Form& f) {
  rqtest::Mp s = rqtest::Mp::sqrt_z(f.disc().value());
  rqtest::Mp b = rqtest::Mp::from_z(f.b());
  mpz_class two_a = 2 * (f.a() < 0 ? mpz_class(-f.a()) : f.a());
  rqtest::Mp lhs = (s - rqtest::Mp::from_z(two_a)).abs();
  return lhs < b && b < s;
}

}  // namespace

TEST_CASE("discriminant validation names the invariant") {
  CHECK_THROWS_WITH(Discriminant::make(7), Catch::Matchers::ContainsSubstring("0 or 1 mod 4"));
  CHECK_THROWS_WITH(Discriminant::make(16), Catch::Matchers::ContainsSubstring("perfect square"));
  CHECK_THROWS_WITH(Discriminant::make(-3), Catch::Matchers::ContainsSubstring("positive"));
  CHECK(Discriminant::make(12).floor_sqrt() == 3);
}

TEST_CASE("unit forms") {
  auto u8 = unit_form(Discriminant::make(8));
  CHECK(u8.form() == mk(8, 1, 2, -1));
  CHECK(unit_form(Discriminant::make(13)).form() == mk(13, 1, 3, -1));
  CHECK(unit_form(Discriminant::make(5)).form() == mk(5, 1, 1, -1));
}

TEST_CASE("rho examples") {
  auto f8 = ReducedForm::make(mk(8, 1, 2, -1));
  CHECK(rho(f8).form() == mk(8, -1, 2, 1));
  CHECK(rho(rho(f8)) == f8);
  auto f13 = ReducedForm::make(mk(13, 1, 3, -1));
  CHECK(rho(f13).form() == mk(13, -1, 3, 1));
  CHECK(rho_inv(ReducedForm::make(mk(8, -1, 2, 1))) == f8);
  CHECK(rho_inv(ReducedForm::make(mk(13, -1, 3, 1))) == f13);
}

TEST_CASE("exhaustive structural properties over small discriminants") {
  for (long d : {5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 40, 41, 44, 60, 316, 1001}) {
    auto disc = Discriminant::make(d);
    auto forms = all_reduced_forms(disc);
    REQUIRE(!forms.empty());
    for (const auto& f : forms) {
      ReducedForm r = rho(f);
      CHECK(r.b() * r.b() - 4 * r.a() * r.c() == d);
      CHECK(rho_inv(r) == f);
      CHECK(rho(rho_inv(f)) == f);
      CHECK(sgn(r.a()) == -sgn(f.a()));
      CHECK(f.a() * f.c() < 0);
      Reduction again = reduce(f.form());
      CHECK(again.steps == 0);
      CHECK(again.form == f);
    }
    auto cyc = principal_positive(disc);
    CHECK(cyc.front() == unit_form(disc));
  }
}

TEST_CASE("enumeration of reduced forms is complete") {
  for (long d : {5, 8, 13, 40, 60, 316}) {
    auto disc = Discriminant::make(d);
    auto forms = all_reduced_forms(disc);
    long count = 0;
    long r = static_cast<long>(std::sqrt(static_cast<double>(d))) + 1;
    for (long a = -r; a <= r; ++a) {
      for (long b = -r; b <= r; ++b) {
        if (a == 0 || (b * b - d) % (4 * a) != 0) continue;
        long c = (b * b - d) / (4 * a);
        if (std::gcd(std::gcd(a, b), c) != 1) continue;
        Form f = Form::make(disc, a, b, c);
        if (!is_reduced(f)) continue;
        ++count;
        bool found = false;
        for (const auto& g : forms) found = found || g.form() == f;
        CHECK(found);
      }
    }
    CHECK(count == static_cast<long>(forms.size()));
  }
}

TEST_CASE("reduction step bound and cycle membership") {
  std::mt19937_64 rng(12345);
  for (long d : {8, 13, 17, 21, 24}) {
    auto disc = Discriminant::make(d);
    auto cyc = principal_positive(disc);
    double sq = std::sqrt(static_cast<double>(d));
    int done = 0;
    while (done < 1000) {
      // Random form in the principal class: act on the unit form by a random
      // SL2(Z) matrix built from elementary moves.
      Int a = 1, b = unit_form(disc).b(), c = unit_form(disc).c();
      int moves = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < moves; ++i) {
        long t = static_cast<long>(rng() % 7) - 3;
        if (rng() % 2) {
          // x -> x + t y
          Int nb = b + 2 * a * t;
          Int nc = a * t * t + b * t + c;
          b = nb;
          c = nc;
        } else {
          // (a, b, c) -> (c, -b, a)
          Int tmp = a;
          a = c;
          c = tmp;
          b = -b;
        }
      }
      // The bound is stated for ideals, i.e. with b normalized modulo 2|a|.
      Int two_a = 2 * (a < 0 ? Int(-a) : a);
      Int t = floor_div(two_a / 2 - b, two_a);
      if (sgn(a) < 0) t = -t;
      Int nb = b + 2 * a * t;
      c = a * t * t + b * t + c;
      b = nb;
      Form f = Form::make(disc, a, b, c);
      Reduction r = reduce(f);
      CHECK(r.form.b() * r.form.b() - 4 * r.form.a() * r.form.c() == d);
      double absa = std::fabs(a.get_d());
      if (absa > sq) CHECK(r.steps <= std::log2(absa / sq) + 2 + 1e-9);
      CHECK(on_cycle(cyc, to_positive_rep(r.form).form()));
      ++done;
    }
  }
}

TEST_CASE("composition stays in the principal cycle") {
  std::mt19937_64 rng(777);
  for (long d : {8, 13, 40, 60}) {
    auto disc = Discriminant::make(d);
    auto cyc = principal_positive(disc);
    for (int i = 0; i < 500; ++i) {
      const auto& f1 = cyc[rng() % cyc.size()];
      const auto& f2 = cyc[rng() % cyc.size()];
      Form c = compose(f1.form(), f2.form());
      CHECK(c.b() * c.b() - 4 * c.a() * c.c() == d);
      CHECK(c.b() > -c.a());
      CHECK(c.b() <= c.a());
      CHECK(on_cycle(cyc, to_positive_rep(reduce(c).form).form()));
    }
    for (const auto& f : all_reduced_forms(disc)) {
      auto p = to_positive_rep(f);
      CHECK(p.a() > 0);
      Form c = compose(unit_form(disc).form(), p.form());
      CHECK(same_orbit(c, p.form()));
    }
  }
  auto disc = Discriminant::make(40);
  Form sq = compose(mk(40, 2, 4, -3), mk(40, 2, 4, -3));
  CHECK(sq.a() == 1);
  CHECK(sq.b() == 0);
}

TEST_CASE("reducedness predicate agrees with high-precision evaluation") {
  std::mt19937_64 rng(99);
  long checked = 0, reduced = 0;
  while (checked < 1000000) {
    long a = static_cast<long>(rng() % 81) - 40;
    long b = static_cast<long>(rng() % 81) - 40;
    long c = static_cast<long>(rng() % 81) - 40;
    long d = b * b - 4 * a * c;
    if (a == 0 || d <= 0 || Discriminant::violation(d)) continue;
    Form f = Form::trusted(Discriminant::make(d), a, b, c);
    bool exact = is_reduced(f);
    CHECK(exact == reduced_mpfr(f));
    reduced += exact;
    ++checked;
  }
  CHECK(reduced > 10000);
}

TEST_CASE("text format round trip and diagnostics") {
  Form f = parse_form("8:1,2,-1");
  CHECK(format_form(f) == "8:1,2,-1");
  CHECK(parse_form(" 40 : 2 , 4 , -3 ").c() == -3);
  CHECK_THROWS_WITH(parse_form("8:1,2,1"), Catch::Matchers::ContainsSubstring("b^2 - 4ac"));
  CHECK_THROWS_WITH(parse_form("7:1,1,-1"), Catch::Matchers::ContainsSubstring("0 or 1 mod 4"));
  CHECK_THROWS_WITH(parse_form("8:1,2"), Catch::Matchers::ContainsSubstring("D:a,b,c"));
  CHECK_THROWS_WITH(parse_form("8:x,2,-1"), Catch::Matchers::ContainsSubstring("decimal"));
  CHECK_THROWS_WITH(parse_form("32:2,4,-2"), Catch::Matchers::ContainsSubstring("gcd"));
}
