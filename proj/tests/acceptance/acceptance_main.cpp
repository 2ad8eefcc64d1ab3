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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Arguments select criteria by number. Reference values
// come from tests/support (MPFR and the continued-fraction unit) and from
// the brute-force oracles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "mpfr_oracle.hpp"
#include "rqinfra/error.hpp"
#include "rqinfra/forms.hpp"
#include "rqinfra/oracle.hpp"
#include "rqinfra/recover.hpp"

using namespace rqinfra;
using namespace rqinfra::cli;
using rqtest::Mp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

RunConfig config_for(const std::string& d) {
  RunConfig c;
  c.disc = d;
  return c;
}

double circular_gap(double a, double b, double r) {
  double d = std::fmod(std::fabs(a - b), r);
  return std::min(d, r - d);
}

Json find_check(const Json& bounds, const std::string& name) {
  for (const auto& c : bounds["checks"]) {
    if (c["name"] == name) return c;
  }
  return Json::object();
}

bool check_passes(const Json& bounds, const std::string& name) {
  return find_check(bounds, name).value("status", std::string()) == "pass";
}

std::vector<std::string> found_discs(double ratio, int count, const std::string& limit) {
  RunConfig c;
  c.min_ratio = ratio;
  c.count = count;
  c.limit = limit;
  CommandResult r = run_guarded("find-disc", c, cmd_find_disc);
  std::vector<std::string> out;
  if (r.exit_code != kExitOk) return out;
  for (const auto& e : r.report["result"]["discriminants"]) out.push_back(e["disc"]);
  return out;
}

// 1 ---------------------------------------------------------------------------

Outcome forms_suite() {
  long forms_checked = 0, failures = 0;
  std::string first;
  for (long d : {5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 40, 41, 44, 60}) {
    const auto disc = Discriminant::make(d);
    const auto forms = all_reduced_forms(disc);
    for (const auto& f : forms) {
      ++forms_checked;
      const ReducedForm r = rho(f);
      bool ok = r.b() * r.b() - 4 * r.a() * r.c() == d;
      ok = ok && rho_inv(r) == f && rho(rho_inv(f)) == f;
      ok = ok && ((f.a() > 0) != (r.a() > 0));
      ReducedForm g = r;
      std::size_t steps = 1;
      while (!(g == f) && steps <= forms.size()) {
        g = rho(g);
        ++steps;
      }
      ok = ok && g == f;
      if (!ok) {
        ++failures;
        if (first.empty()) first = format_form(f.form());
      }
    }
  }
  return {failures == 0, std::to_string(forms_checked) + " reduced forms, " +
                             std::to_string(failures) + " failures" +
                             (first.empty() ? "" : ", first " + first)};
}

// 2 ---------------------------------------------------------------------------

Outcome regulator_oracle() {
  const Mp r8 = (Mp(3.0) + Mp(2.0) * Mp::sqrt_z(2)).log();
  const Mp r13 = ((Mp(11.0) + Mp(3.0) * Mp::sqrt_z(13)) / Mp(2.0)).log();
  auto diff = [](const ApproxReal& x, const Mp& ref) {
    return (Mp::dyadic(x.mantissa(), x.frac_bits()) - ref).abs().to_double();
  };
  const double s8 = diff(enumerate_cycle(Discriminant::make(8)).regulator_narrow, r8);
  const double s13 = diff(enumerate_cycle(Discriminant::make(13)).regulator_narrow, r13);
  long checked = 0, capped = 0, bad = 0;
  double worst = 0;
  long worst_d = 0;
  for (long d = 5; d <= 10000; ++d) {
    if (Discriminant::violation(d)) continue;
    const auto disc = Discriminant::make(d);
    std::optional<PrincipalCycle> cyc;
    try {
      cyc = enumerate_cycle(disc);
    } catch (const CapExceeded&) {
      ++capped;
      continue;
    }
    const double e = diff(cyc->regulator_narrow, rqtest::pell_regulator(d).regulator_narrow);
    ++checked;
    if (e > worst) {
      worst = e;
      worst_d = d;
    }
    if (!(e < 1e-20)) ++bad;
  }
  return {bad == 0 && s8 < 1e-20 && s13 < 1e-20,
          std::to_string(checked) + " discriminants, " + std::to_string(capped) +
              " over the cycle cap, max |diff| " + fmt(worst) + " (D = " +
              std::to_string(worst_d) + "), D=8 " + fmt(s8) + ", D=13 " + fmt(s13)};
}

// 3 ---------------------------------------------------------------------------

Outcome lemma_harness() {
  const auto discs = found_discs(5, 20, "100000");
  int passed = 0;
  std::string fails;
  for (const auto& d : discs) {
    CommandResult r = run_guarded("verify-lemmas", config_for(d), cmd_verify_lemmas);
    if (r.exit_code == kExitOk) {
      ++passed;
      continue;
    }
    if (!r.report.contains("result")) {
      fails += " " + d + "(error)";
      continue;
    }
    for (const auto& cl : r.report["result"]["clauses"]) {
      if (cl["status"] != "fail") continue;
      if (fails.size() < 400) {
        fails += " " + d + "[L" + cl["lemma"].get<std::string>() + " " +
                 cl["clause"].get<std::string>() + ": " + fmt(cl["extreme"].get<double>()) +
                 " vs " + fmt(cl["bound"].get<double>()) + "]";
      }
      break;
    }
  }
  const bool enough = discs.size() >= 20;
  return {enough && passed == static_cast<int>(discs.size()),
          std::to_string(passed) + "/" + std::to_string(discs.size()) +
              " discriminants with R+ > 5 ln D pass;" + (fails.empty() ? "" : " failing:" + fails)};
}

// 4 ---------------------------------------------------------------------------

Outcome dual_structure() {
  int ok = 0;
  std::string detail;
  for (const char* d : {"601", "5569", "6841", "7561", "8089"}) {
    RunConfig c = config_for(d);
    c.relaxed = true;
    c.q = std::int64_t{1} << 16;
    CommandResult r = run_guarded("simulate", c, cmd_simulate);
    if (!r.report.contains("result")) {
      detail += std::string(" ") + d + ":error";
      continue;
    }
    const Json& res = r.report["result"];
    const double q = res["q"].get<double>();
    const double mod = 4 * q;
    const double rp = res["regulator_oracle"].get<double>();
    const double unit = res["unitarity_error"].get<double>();
    double worst = 0;
    for (const auto& p : res["peaks"]) {
      double y = p["y"].get<double>();
      if (y > mod / 2) y -= mod;
      const double z = std::round(y * rp / q);
      worst = std::max(worst, std::fabs(y - q * z / rp));
    }
    const bool good = unit <= std::ldexp(1.0, -40) && worst <= 0.5 && !res["peaks"].empty();
    if (good) ++ok;
    detail += std::string(" ") + d + ":|Y|=" + std::to_string(res["peaks"].size()) +
              ",unit.err=" + fmt(unit) + ",max|w|=" + fmt(worst);
  }
  return {ok == 5, std::to_string(ok) + "/5 at q = 2^16;" + detail};
}

// 5 ---------------------------------------------------------------------------

Outcome theorem1_bound() {
  const auto discs = found_discs(32, 1, "100000");
  if (discs.empty()) return {false, "find-disc located no discriminant with R+ > 32 ln D"};
  RunConfig c = config_for(discs.front());
  CommandResult r = run_guarded("simulate", c, cmd_simulate);
  if (!r.report.contains("result")) return {false, "simulation error: " + r.report.dump()};
  const Json& res = r.report["result"];
  const Json& b = res["bounds"];
  const double mass = res["y_mass_from_distribution"].get<double>();
  const bool inter = check_passes(b, "per_element_ratio_to_p_over_8q") &&
                     check_passes(b, "support_ratio_to_q_over_8R_times_m_min_plus_1") &&
                     check_passes(b, "card_Y") && check_passes(b, "phase_arc_fraction");
  const Json chain = find_check(b, "chain_m_min_plus_1_over_2e9_m_max_plus_1");
  const bool pre = b["preconditions_met"].get<bool>();
  return {pre && mass >= std::ldexp(1.0, -11) && inter,
          "D = " + discs.front() + ", q = " + std::to_string(res["q"].get<long>()) +
              ", preconditions " + (pre ? "met" : "unmet") + ", Y-mass " + fmt(mass) +
              " >= 2^-11, intermediate inequalities " + (inter ? "hold" : "fail") +
              "; closing chain step " + chain.value("status", std::string("?")) + " (" +
              fmt(chain.value("measured", 0.0)) + " vs " + fmt(chain.value("bound", 0.0)) + ")"};
}

// 6 ---------------------------------------------------------------------------

Outcome theorem3_bound() {
  const auto discs = found_discs(64, 1, "100000");
  if (discs.empty()) return {false, "find-disc located no discriminant with R+ >= 64 ln D"};
  RunConfig c = config_for(discs.front());
  c.which = "pip";
  c.mode = "sample";
  c.samples = 1;
  c.bound_forms = 4;
  c.seed = 2026;
  CommandResult r = run_guarded("simulate", c, cmd_simulate);
  if (!r.report.contains("result")) return {false, "simulation error: " + r.report.dump()};
  const Json& res = r.report["result"];
  const Json& b = res["bounds"];
  const double floor = std::ldexp(1.0, -16);
  const double mass = b["y_mass"].get<double>();
  const double min_cond = b["min_conditional_y_mass"].get<double>();
  const bool inter = check_passes(b, "card_Y") &&
                     check_passes(b, "support_ratio_to_q_over_n_q_over_8R_times_m_min_plus_1") &&
                     check_passes(b, "per_element_ratio_to_p_over_128q2") &&
                     check_passes(b, "phase_arc_fraction");
  const Json chain = find_check(b, "chain_m_min_plus_1_over_2e13_m_max_plus_2");
  const bool pre = b["preconditions_met"].get<bool>();
  return {pre && inter && mass >= floor && min_cond >= floor,
          "D = " + discs.front() + ", q = " + std::to_string(res["q"].get<long>()) + ", " +
              std::to_string(b["forms_examined"].get<long>()) +
              " measured forms; preconditions " + (pre ? "met" : "unmet") +
              ", Y-mass estimate " + fmt(mass) + ", min conditional " + fmt(min_cond) +
              " (floor 2^-16), |Y| and p inequalities " + (inter ? "hold" : "fail") +
              "; closing chain step " + chain.value("status", std::string("?")) + " (" +
              fmt(chain.value("measured", 0.0)) + " vs " + fmt(chain.value("bound", 0.0)) + ")"};
}

// 7 ---------------------------------------------------------------------------

Outcome end_to_end_regulator() {
  const std::vector<std::string> discs = {"8",    "13",   "40",   "229",  "1001",
                                          "5569", "6841", "7489", "7561", "7681"};
  int ok = 0, classical = 0, quantum = 0;
  long attempts = 0, successes = 0;
  double worst = 0;
  for (const auto& d : discs) {
    CommandResult r = run_guarded("regulator", config_for(d), cmd_regulator);
    if (r.exit_code != kExitOk) continue;
    const Json& res = r.report["result"];
    const double got = res["value"]["value"].get<double>();
    const double ref = rqtest::pell_regulator(std::stol(d)).regulator_narrow.to_double();
    const double e = std::fabs(got - ref);
    worst = std::max(worst, e);
    if (e < 1) ++ok;
    if (res["path"] == "classical") {
      ++classical;
    } else {
      ++quantum;
      attempts += res["attempts"].get<long>();
      successes += res["successes"].get<long>();
    }
  }
  const double rate = attempts > 0 ? static_cast<double>(successes) / attempts : 0;
  return {ok == 10 && classical > 0 && quantum > 0 && rate >= std::ldexp(1.0, -26),
          std::to_string(ok) + "/10 within 1 of the Pell regulator (max |R' - R+| " + fmt(worst) +
              "); " + std::to_string(classical) + " classical, " + std::to_string(quantum) +
              " quantum; quantum success rate " + std::to_string(successes) + "/" +
              std::to_string(attempts) + " = " + fmt(rate) + " (floor 2^-26)"};
}

// 8 ---------------------------------------------------------------------------

struct PipCase {
  std::string disc;
  std::string form;
  bool force_quantum = false;
  std::int64_t q = 0;
};

std::string positive_form_in(const std::vector<ReducedForm>& cycle) {
  for (const auto& f : cycle) {
    if (f.a() > 0) return format_form(f.form());
  }
  return "";
}

std::string non_principal_form(long d) {
  const auto disc = Discriminant::make(d);
  const auto info = class_group_bruteforce(disc);
  for (std::size_t k = 0; k < info.cycles.size(); ++k) {
    if (k == info.principal_cycle) continue;
    for (const auto& f : info.cycles[k]) {
      if (f.a() > 0 && !principal_test_bruteforce(f).is_principal) return format_form(f.form());
    }
  }
  return "";
}

std::string cycle_form(long d, std::size_t i) {
  const auto cyc = enumerate_cycle(Discriminant::make(d));
  return format_form(cyc.forms[i % cyc.forms.size()].form());
}

Outcome end_to_end_pip() {
  std::vector<PipCase> principal = {
      {"13", cycle_form(13, 0)},        {"316", cycle_form(316, 1)},
      {"1001", cycle_form(1001, 2)},    {"1001", cycle_form(1001, 5)},
      {"5569", cycle_form(5569, 7)},    {"5569", cycle_form(5569, 40)},
      {"5569", cycle_form(5569, 101)},  {"229", cycle_form(229, 1), true, 64},
      {"229", cycle_form(229, 2), true, 64}, {"24049", "24049:6,155,-1"},
  };
  std::vector<PipCase> other = {
      {"40", non_principal_form(40)},
      {"1001", non_principal_form(1001)},
      {"229", non_principal_form(229), true, 64},
  };
  int principal_ok = 0, rejected_ok = 0, false_principal = 0, quantum_runs = 0;
  double worst = 0;
  std::string notes;
  auto run_case = [&](const PipCase& pc) {
    RunConfig c = config_for(pc.disc);
    c.form = pc.form;
    if (pc.force_quantum) {
      c.force_quantum = true;
      c.relaxed = true;
      c.q = pc.q;
    }
    return run_guarded("pip", c, cmd_pip);
  };
  for (const auto& pc : principal) {
    const ReducedForm g = ReducedForm::make(parse_form(pc.form));
    const PrincipalTest t = principal_test_bruteforce(g);
    if (!t.is_principal) {
      notes += " oracle rejects " + pc.form;
      continue;
    }
    CommandResult r = run_case(pc);
    const Json& res = r.report["result"];
    if (!r.report.contains("result") || res["kind"] != "pip_distance") {
      notes += " " + pc.form + ":" + (r.report.contains("result") ? res["kind"].dump() : "error");
      continue;
    }
    if (res["path"] == "quantum") ++quantum_runs;
    const double rp = res["regulator"]["value"].get<double>();
    const double e = circular_gap(res["value"]["value"].get<double>(), t.dist->value(), rp);
    worst = std::max(worst, e);
    if (e < 0.125 + std::ldexp(1.0, -30)) ++principal_ok;
  }
  for (const auto& pc : other) {
    if (pc.form.empty()) {
      notes += " no non-principal form at " + pc.disc;
      continue;
    }
    const ReducedForm g = ReducedForm::make(parse_form(pc.form));
    if (principal_test_bruteforce(g).is_principal) {
      notes += " oracle accepts " + pc.form;
      continue;
    }
    CommandResult r = run_case(pc);
    if (!r.report.contains("result")) continue;
    const Json& res = r.report["result"];
    if (res["kind"] == "not_principal") ++rejected_ok;
    if (res["kind"] == "pip_distance") ++false_principal;
    if (res["path"] == "quantum") ++quantum_runs;
  }
  return {principal_ok == 10 && rejected_ok == 3 && false_principal == 0,
          std::to_string(principal_ok) + "/10 principal within 1/8 (max gap " + fmt(worst) + "), " +
              std::to_string(rejected_ok) + "/3 not_principal, " +
              std::to_string(false_principal) + " false principal, " +
              std::to_string(quantum_runs) + " runs on the quantum path" + notes};
}

// 9 ---------------------------------------------------------------------------

Outcome cf_suite() {
  std::mt19937_64 rng(20260101);
  int random_ok = 0, hyp_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const int k = 10 + static_cast<int>(rng() % 40);
    const Int q = Int(1) << k;
    const long w = cf_window(q).get_si();
    long z2 = 1 + static_cast<long>(rng() % static_cast<unsigned long>(w));
    long z1 = 0;
    do {
      z1 = 1 + static_cast<long>(rng() % static_cast<unsigned long>(z2));
    } while (std::gcd(z1, z2) != 1);
    // R+ in [1, sqrt(q) / 4] so that q > 16 R+^2.
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    const Mp rp = Mp(1.0 + u * (std::ldexp(1.0, k / 2) / 4 - 1));
    auto y_of = [&](long z) {
      Mp v = Mp::from_z(q) * Mp(static_cast<double>(z)) / rp;
      mpz_class out;
      mpfr_get_z(out.get_mpz_t(), v.get(), MPFR_RNDN);
      return out;
    };
    const Int y1 = y_of(z1), y2 = y_of(z2);
    // Legendre's hypothesis |y1/y2 - z1/z2| < 1/(2 z2^2), in integers.
    const Int num = abs(Int(y1 * z2 - z1 * y2));
    if (!(2 * z2 * num < y2)) {
      ++hyp_fail;
      continue;
    }
    auto z = cf_recover(y1, y2, q);
    if (z && z->first == z1 && z->second == z2) ++random_ok;
  }
  int boundary = 0, boundary_ok = 0;
  for (int i = 0; i < 200; ++i) {
    const long z2 = 2 + static_cast<long>(rng() % 5000);
    long z1 = 0;
    do {
      z1 = 1 + static_cast<long>(rng() % static_cast<unsigned long>(z2 - 1));
    } while (std::gcd(z1, z2) != 1);
    const Int q = 4 * Int(z2) * z2;  // window exactly z2
    const long sign = (i % 2 == 0) ? 1 : -1;
    const Int d = Int(100000000);
    // |y1/y2 - z1/z2| = d / (z2 y2) = ratio / (2 z2^2), ratio in (1 - 1e-6, 1 - 5e-7].
    Int y2 = Int(std::ceil(2.0 * z2 * 1e8 / (1 - 5e-7)));
    while ((z1 * y2 + sign * d) % z2 != 0) ++y2;
    const Int y1 = (z1 * y2 + sign * d) / z2;
    const double ratio = Int(2 * z2 * d).get_d() / y2.get_d();
    if (!(ratio < 1 && ratio > 1 - 1e-6) || y1 <= 0 || y1 > y2) continue;
    ++boundary;
    auto z = cf_recover(y1, y2, q);
    if (z && z->first == z1 && z->second == z2) ++boundary_ok;
  }
  return {random_ok + hyp_fail == 10000 && hyp_fail == 0 && boundary >= 100 &&
              boundary_ok == boundary,
          std::to_string(random_ok) + "/10000 random instances recovered (" +
              std::to_string(hyp_fail) + " outside the hypothesis), " +
              std::to_string(boundary_ok) + "/" + std::to_string(boundary) +
              " boundary instances at ratio 1 - 1e-6"};
}

// 10 --------------------------------------------------------------------------

Outcome resources() {
  int ok = 0;
  std::string detail;
  for (int k : {10, 20, 30}) {
    RunConfig c = config_for(Int(Int(1) << k).get_str());
    c.which = "both";
    CommandResult r = run_guarded("resources", c, cmd_resources);
    if (r.exit_code != kExitOk) continue;
    const double log_d = k;
    const double log_ln_d = std::log2(k * std::log(2.0));
    const double n = 10.5 * log_d;
    const long x_ceil = static_cast<long>(std::ceil(log_d + 2 * log_ln_d));
    const Json& reg = r.report["result"][0];
    const Json& pip = r.report["result"][1];
    auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, b); };
    bool good = near(reg["formula_total_without_n"].get<double>(), 2 * log_d + 2 * log_ln_d + 7) &&
                near(reg["formula_total"].get<double>(), 2 * log_d + 2 * log_ln_d + n + 7) &&
                near(pip["formula_total_without_n"].get<double>(), 3 * log_d + 4 * log_ln_d) &&
                near(pip["formula_total"].get<double>(), 3 * log_d + 4 * log_ln_d + n) &&
                near(reg["n_bound"].get<double>(), n) && near(pip["n_bound"].get<double>(), n);
    double reg_formula_sum = 0;
    for (const auto& x : reg["registers"]) reg_formula_sum += x["formula"].get<double>();
    good = good && near(reg_formula_sum, 2 * log_d + 2 * log_ln_d + 7);
    good = good && reg["register_total_without_n"].get<long>() == (x_ceil + 5) + (k + 2);
    good = good && pip["register_total_without_n"].get<long>() == 2 * x_ceil + (k + 2);
    if (good) ++ok;
    detail += " 2^" + std::to_string(k) + ": reg " +
              fmt(reg["formula_total_without_n"].get<double>()) + "+N, pip " +
              fmt(pip["formula_total_without_n"].get<double>()) + "+N, N<=" + fmt(n) + ";";
  }
  return {ok == 3, std::to_string(ok) + "/3 re-derived;" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "form arithmetic", 10, forms_suite},
      {2, "regulator oracle", 60, regulator_oracle},
      {3, "lemma harness", 300, lemma_harness},
      {4, "dual structure", 600, dual_structure},
      {5, "one-dimensional bound", 3600, theorem1_bound},
      {6, "two-dimensional bound", 3600, theorem3_bound},
      {7, "end-to-end regulator", 1800, end_to_end_regulator},
      {8, "end-to-end pip", 1800, end_to_end_pip},
      {9, "continued fractions", 10, cf_suite},
      {10, "resource estimator", 10, resources},
  };
  int failed = 0, run = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++run;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %2d %s  %-22s %7.1fs/%gs  %s%s\n", c.id, pass ? "PASS" : "FAIL",
                c.name.c_str(), secs, c.limit_seconds, o.detail.c_str(),
                in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", run - failed, run);
  return failed == 0 ? 0 : 1;
}
