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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rqinfra/error.hpp"
#include "rqinfra/harness.hpp"
#include "rqinfra/qsim.hpp"
#include "rqinfra/recover.hpp"

#ifndef RQINFRA_BUILD_ID
#define RQINFRA_BUILD_ID "unknown"
#endif

namespace rqinfra::cli {

namespace {

Int parse_int(const std::string& text, const std::string& what) {
  if (text.empty()) throw InputError(what + " is required");
  try {
    return Int(text, 10);
  } catch (const std::invalid_argument&) {
    throw InputError(what + " is not an integer: '" + text + "'");
  }
}

Discriminant parse_disc(const RunConfig& c) { return Discriminant::make(parse_int(c.disc, "--disc")); }

ReducedForm parse_reduced(const std::string& text, const Discriminant& disc) {
  if (text.empty()) throw InputError("--form is required");
  Form f = parse_form(text.find(':') == std::string::npos ? disc.value().get_str() + ":" + text
                                                          : text);
  if (!(f.disc() == disc)) {
    throw InputError("form " + text + " has discriminant " + f.disc().value().get_str() +
                     ", not " + disc.value().get_str());
  }
  return ReducedForm::make(f);
}

Json approx_json(const ApproxReal& x) {
  return Json{{"value", x.value()},
              {"mantissa", x.mantissa().get_str()},
              {"frac_bits", x.frac_bits()},
              {"err_bound", x.err_bound()}};
}

std::string status_text(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kNotApplicable:
      return "precondition unmet";
  }
  return "fail";
}

RecoverConfig recover_config(const RunConfig& c) {
  RecoverConfig r;
  r.seed = c.seed;
  r.max_attempts = c.max_attempts;
  r.max_verify_failures = c.max_verify_failures;
  r.q = c.q;
  r.relaxed = c.relaxed;
  r.force_quantum = c.force_quantum;
  r.tolerance_bits = c.precision_frac_bits;
  r.cycle_cap = c.cycle_cap;
  r.run_oracle = c.run_oracle;
  return r;
}

Json attempts_json(const std::vector<Attempt>& attempts) {
  Json out = Json::array();
  for (const auto& a : attempts) {
    Json samples = Json::array();
    for (const auto& [y1, y2] : a.samples) samples.push_back({y1, y2});
    Json z = a.z ? Json{a.z->first.get_str(), a.z->second.get_str()} : Json();
    out.push_back({{"samples", samples}, {"z", z}, {"outcome", a.outcome}, {"detail", a.detail}});
  }
  return out;
}

Json recovery_json(const RecoveryResult& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["path"] = r.path;
  j["value"] = r.value ? approx_json(*r.value) : Json();
  j["integer_value"] = r.integer_value ? Json(r.integer_value->get_str()) : Json();
  j["z_pair"] = r.z_pair ? Json{r.z_pair->first.get_str(), r.z_pair->second.get_str()} : Json();
  j["q"] = r.q;
  j["attempts"] = r.attempts;
  j["successes"] = r.successes;
  j["success_rate"] = r.attempts > 0 ? static_cast<double>(r.successes) / r.attempts : 0.0;
  j["diagnostics"] = attempts_json(r.diagnostics);
  return j;
}

void attach_oracle(Json& report, const std::optional<OracleCheck>& oc) {
  if (!oc) return;
  report["oracle"] = {{"source", oc->source},
                      {"reference", oc->reference},
                      {"difference", oc->difference},
                      {"agrees", oc->agrees}};
  report["provenance"]["oracle.reference"] = oc->source;
}

Json header(const std::string& command, const RunConfig& c) {
  Json j;
  j["command"] = command;
  j["build_id"] = build_id();
  j["config"] = config_json(c, command);
  j["provenance"] = Json::object();
  return j;
}

Json bound_json(const BoundReport& b) {
  Json checks = Json::array();
  for (const auto& c : b.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"relation", c.relation},
                      {"bound", c.bound},
                      {"status", status_text(c.status)}});
  }
  return {{"which", b.which},
          {"preconditions_met", b.preconditions_met},
          {"notes", b.notes},
          {"y_mass", b.y_mass},
          {"y_mass_exact", b.y_mass_exact},
          {"min_conditional_y_mass", b.min_conditional_y_mass},
          {"forms_examined", b.forms_examined},
          {"passed", b.passed()},
          {"checks", checks}};
}

bool any_failed(const BoundReport& b) {
  return std::any_of(b.checks.begin(), b.checks.end(),
                     [](const BoundCheck& c) { return c.status == CheckStatus::kFail; });
}

Json stats_json(const RunStats& s) {
  return {{"m_min", s.m_min}, {"m_max", s.m_max}, {"exact", s.exact}};
}

std::vector<std::size_t> top_indices(const std::vector<double>& prob, std::size_t k) {
  std::vector<std::size_t> idx(prob.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return prob[a] != prob[b] ? prob[a] > prob[b] : a < b;
                    });
  idx.resize(k);
  return idx;
}

PositiveReducedForm default_principal_form(const PrincipalCycle& cycle) {
  return cycle.forms[cycle.forms.size() / 2];
}

CommandResult simulate_regulator(const RunConfig& c, const Discriminant& disc, Json& rep) {
  auto params = DualParams1D::make(disc, c.q, c.relaxed);
  auto budget = PrecisionBudget::for_disc(disc, 0, c.relaxed);
  const RegTable table = tabulate_reg(params, budget, c.cycle_cap);
  Json res;
  res["q"] = table.q;
  res["modulus"] = 4 * table.q;
  res["forms"] = table.forms.size();
  res["runs"] = table.runs.size();
  res["run_stats"] = stats_json(table.stats);
  rep["provenance"]["distribution"] = "exact simulation: FFT of the Reg state per measured form";

  std::optional<TargetSet1D> target;
  std::optional<PrincipalCycle> cycle;
  if (c.bounds) {
    cycle = enumerate_cycle(disc, c.cycle_cap);
    target = target_set_1d(table, *cycle);
    Json ys = Json::array();
    for (std::size_t i = 0; i < target->ys.size(); ++i) ys.push_back({target->ys[i], target->zs[i]});
    res["target_set"] = {{"size", target->ys.size()}, {"y_z", ys}};
    res["regulator_oracle"] = cycle->regulator();
    rep["provenance"]["regulator_oracle"] = "enumerate_cycle (full principal cycle walk)";
  }
  const std::size_t peaks =
      c.peaks > 0 ? static_cast<std::size_t>(c.peaks) : (target ? target->ys.size() : 16);

  if (c.mode == "full") {
    const FullDistribution1D dist = full_distribution_1d(table);
    res["total"] = dist.total;
    res["unitarity_error"] = std::fabs(dist.total - 1);
    Json top = Json::array();
    for (std::size_t y : top_indices(dist.prob, peaks)) {
      top.push_back({{"y", y}, {"prob", dist.prob[y]}});
    }
    res["peaks"] = top;
    if (target) {
      double mass = 0;
      for (std::int64_t y : target->ys) mass += dist.prob[y];
      res["y_mass_from_distribution"] = mass;
    }
  } else if (c.mode == "sample") {
    RegSampler sampler(table);
    std::mt19937_64 rng(c.seed);
    Json out = Json::array();
    for (int i = 0; i < c.samples; ++i) {
      Sample1D s = sampler.draw(rng);
      out.push_back({{"form", format_form(table.forms[s.form].form())}, {"y", s.y}});
    }
    res["samples"] = out;
  } else {
    throw InputError("--mode must be 'full' or 'sample'");
  }

  int code = kExitOk;
  if (target) {
    const BoundReport b = verify_bounds_1d(table, *target, *cycle);
    res["bounds"] = bound_json(b);
    if (any_failed(b)) code = kExitFail;
  }
  rep["result"] = res;
  return {code, rep};
}

CommandResult simulate_pip(const RunConfig& c, const Discriminant& disc, Json& rep) {
  const PrincipalCycle cycle = enumerate_cycle(disc, c.cycle_cap);
  const ReducedForm g =
      c.form.empty() ? default_principal_form(cycle).reduced() : parse_reduced(c.form, disc);
  const OrderAndS os = order_and_S(g, cycle);
  auto params = DualParams2D::make(disc, to_positive_rep(g), c.q, c.relaxed);
  auto budget = PrecisionBudget::for_disc(disc, 0, c.relaxed);
  const PipTable table = PipTable::build(params, budget, c.cycle_cap);
  Json res;
  res["form"] = format_form(g.form());
  res["order"] = os.n.get_str();
  res["S"] = approx_json(os.S);
  res["regulator_oracle"] = cycle.regulator();
  res["q"] = table.q();
  res["modulus"] = 8 * table.q();
  res["forms"] = table.form_count();
  res["class_cycles"] = table.cycle_count();
  rep["provenance"]["order_and_S"] = "order_and_S over enumerate_cycle (classical oracle)";
  rep["provenance"]["distribution"] = "exact simulation: row-decomposed transform of the PIP state";

  std::optional<TargetSet2D> target;
  if (c.bounds) {
    target = target_set_2d(table, cycle, os.n, os.S);
    res["target_set"] = {{"size", target->ys.size()}, {"run_stats", stats_json(target->stats)}};
  }
  const std::size_t peaks =
      c.peaks > 0 ? static_cast<std::size_t>(c.peaks) : (target ? target->ys.size() : 16);

  std::vector<std::uint32_t> bound_forms;
  if (c.mode == "full") {
    const FullDistribution2D dist = full_distribution_2d(table);
    res["total"] = dist.total;
    res["unitarity_error"] = std::fabs(dist.total - 1);
    Json top = Json::array();
    for (std::size_t i : top_indices(dist.prob, peaks)) {
      top.push_back({{"y1", static_cast<std::int64_t>(i) / dist.modulus},
                     {"y2", static_cast<std::int64_t>(i) % dist.modulus},
                     {"prob", dist.prob[i]}});
    }
    res["peaks"] = top;
    if (target) {
      double mass = 0;
      for (const auto& [y1, y2] : target->ys) mass += dist.at(y1, y2);
      res["y_mass_from_distribution"] = mass;
    }
  } else if (c.mode == "sample") {
    std::mt19937_64 rng(c.seed);
    Json out = Json::array();
    if (c.samples > 0) {
      PipSampler sampler(table);
      for (int i = 0; i < c.samples; ++i) {
        Sample2D s = sampler.draw(rng);
        out.push_back({{"form", format_form(table.form(s.form).form())}, {"y1", s.y1}, {"y2", s.y2}});
      }
    }
    res["samples"] = out;
    // The bound estimate averages conditional masses over forms obtained by
    // measuring the form register alone: a uniform (x1, x2) and its value.
    const int k = c.bound_forms > 0 ? c.bound_forms : std::max(c.samples, 1);
    std::uniform_int_distribution<std::int64_t> cell(0, table.q() - 1);
    Json measured = Json::array();
    for (int i = 0; i < k; ++i) {
      const std::int64_t x1 = cell(rng), x2 = cell(rng);
      bound_forms.push_back(table.at(x1, x2));
      measured.push_back(format_form(table.form(bound_forms.back()).form()));
    }
    res["bound_forms"] = measured;
  } else {
    throw InputError("--mode must be 'full' or 'sample'");
  }

  int code = kExitOk;
  if (target) {
    const BoundReport b = verify_bounds_2d(table, *target, cycle, os.n, bound_forms);
    res["bounds"] = bound_json(b);
    if (any_failed(b)) code = kExitFail;
  }
  rep["result"] = res;
  return {code, rep};
}

Json clause_json(const ClauseResult& c) {
  return {{"lemma", c.lemma},       {"clause", c.name},
          {"status", status_text(c.status)}, {"checked", c.checked},
          {"violations", c.violations}, {"extreme", c.extreme},
          {"bound", c.bound},       {"counterexamples", c.counterexamples}};
}

Json resource_json(const ResourceReport& r) {
  Json regs = Json::array();
  for (const auto& x : r.registers) {
    regs.push_back({{"name", x.name}, {"formula", x.formula}, {"qubits", x.qubits}});
  }
  return {{"which", r.which},
          {"log_d", r.log_d},
          {"log_ln_d", r.log_ln_d},
          {"registers", regs},
          {"formula_total_without_n", r.formula_total_without_n},
          {"register_total_without_n", r.register_total_without_n},
          {"n_bound", r.n_bound},
          {"formula_total", r.formula_total_without_n + r.n_bound}};
}

}  // namespace

std::string build_id() { return RQINFRA_BUILD_ID; }

Json config_json(const RunConfig& c, const std::string& command) {
  Json j;
  j["disc"] = c.disc;
  j["seed"] = c.seed;
  j["precision_frac_bits"] = c.precision_frac_bits;
  j["q"] = c.q ? Json(*c.q) : Json();
  j["cycle_cap"] = c.cycle_cap;
  j["relaxed"] = c.relaxed;
  if (command == "regulator" || command == "pip") {
    j["max_attempts"] = c.max_attempts;
    j["max_verify_failures"] = c.max_verify_failures;
    j["force_quantum"] = c.force_quantum;
    j["oracle"] = c.run_oracle;
  }
  if (command == "pip" || command == "simulate" || command == "verify-lemmas") j["form"] = c.form;
  if (command == "pip") j["regulator"] = c.regulator;
  if (command == "simulate") {
    j["which"] = c.which;
    j["mode"] = c.mode;
    j["samples"] = c.samples;
    j["bound_forms"] = c.bound_forms;
    j["peaks"] = c.peaks;
    j["bounds"] = c.bounds;
  }
  if (command == "resources") j["which"] = c.which;
  if (command == "verify-lemmas") j["periods"] = c.periods;
  if (command == "find-disc") {
    j["min_ratio"] = c.min_ratio;
    j["start"] = c.start;
    j["limit"] = c.limit;
    j["count"] = c.count;
  }
  return j;
}

CommandResult cmd_regulator(const RunConfig& c) {
  const Discriminant disc = parse_disc(c);
  Json rep = header("regulator", c);
  const RecoveryResult r = regulator_pipeline(disc, recover_config(c));
  rep["result"] = recovery_json(r);
  if (r.path == "classical") {
    rep["result"]["path_reason"] = "R+ < 32 ln D, decided by walking the principal cycle";
    rep["provenance"]["value"] = "principal cycle walk (classical path)";
  } else {
    rep["result"]["path_reason"] = c.force_quantum ? "forced" : "R+ >= 32 ln D";
    rep["provenance"]["value"] =
        "exact simulation of dual sampling, continued fractions, local cycle walk";
  }
  attach_oracle(rep, r.oracle);
  int code = r.kind == RecoveryKind::kRegulator ? kExitOk : kExitFail;
  if (r.oracle && !r.oracle->agrees) code = kExitFail;
  return {code, rep};
}

CommandResult cmd_pip(const RunConfig& c) {
  const Discriminant disc = parse_disc(c);
  const ReducedForm g = parse_reduced(c.form, disc);
  Json rep = header("pip", c);
  ApproxReal r_plus;
  if (!c.regulator.empty()) {
    double v = 0;
    try {
      v = std::stod(c.regulator);
    } catch (const std::exception&) {
      throw InputError("--regulator is not a number: '" + c.regulator + "'");
    }
    if (!(v > 0)) throw InputError("--regulator must be positive");
    r_plus = ApproxReal(Int(std::ldexp(v, 52)), 52, 1);
    rep["provenance"]["regulator"] = "supplied on the command line, refined by cycle walking";
  } else {
    RunConfig rc = c;
    rc.force_quantum = false;
    const RecoveryResult reg = regulator_pipeline(disc, recover_config(rc));
    if (reg.kind != RecoveryKind::kRegulator) {
      rep["result"] = {{"kind", "fail"}, {"failing_step", "regulator"}, {"regulator", recovery_json(reg)}};
      return {kExitFail, rep};
    }
    r_plus = *reg.value;
    rep["provenance"]["regulator"] = "regulator pipeline, " + reg.path + " path";
  }
  const RecoveryResult r = pip_pipeline(g, r_plus, recover_config(c));
  rep["result"] = recovery_json(r);
  rep["result"]["form"] = format_form(g.form());
  rep["result"]["regulator"] = approx_json(r_plus);
  rep["provenance"]["value"] = r.path == "classical"
                                   ? "principal cycle walk (classical path, R+ < 64 ln D)"
                                   : "exact simulation of dual sampling, extended gcd, local cycle walk";
  attach_oracle(rep, r.oracle);
  int code = r.kind == RecoveryKind::kFail ? kExitFail : kExitOk;
  if (r.oracle && !r.oracle->agrees) code = kExitFail;
  return {code, rep};
}

CommandResult cmd_simulate(const RunConfig& c) {
  const Discriminant disc = parse_disc(c);
  Json rep = header("simulate", c);
  if (c.which == "regulator") return simulate_regulator(c, disc, rep);
  if (c.which == "pip") return simulate_pip(c, disc, rep);
  throw InputError("--which must be 'regulator' or 'pip'");
}

CommandResult cmd_verify_lemmas(const RunConfig& c) {
  const Discriminant disc = parse_disc(c);
  Json rep = header("verify-lemmas", c);
  LemmaConfig lc;
  lc.periods = c.periods;
  lc.relaxed = c.relaxed;
  lc.cycle_cap = c.cycle_cap;
  LemmaReport lr = verify_reg_lemmas(disc, lc);

  std::optional<ReducedForm> g;
  if (!c.form.empty()) {
    g = parse_reduced(c.form, disc);
  } else {
    auto info = class_group_bruteforce(disc, c.cycle_cap);
    for (std::size_t k = 0; k < info.cycles.size() && !g; ++k) {
      if (k == info.principal_cycle) continue;
      for (const auto& f : info.cycles[k]) {
        if (f.a() > 0) {
          g = f;
          break;
        }
      }
    }
    if (!g) g = default_principal_form(enumerate_cycle(disc, c.cycle_cap)).reduced();
  }
  verify_pip_lemma(*g, lc, lr);

  Json clauses = Json::array();
  for (const auto& cl : lr.clauses) clauses.push_back(clause_json(cl));
  rep["result"] = {{"regulator", lr.regulator},
                   {"ln_d", lr.ln_d},
                   {"precondition_R_gt_5lnD", lr.precondition_met},
                   {"periods", lr.periods},
                   {"q", lr.q},
                   {"pip_form", lr.pip_form ? Json(*lr.pip_form) : Json()},
                   {"pip_order", lr.pip_order ? Json(lr.pip_order->get_str()) : Json()},
                   {"pip_S", lr.pip_S ? Json(*lr.pip_S) : Json()},
                   {"passed", lr.passed()},
                   {"clauses", clauses}};
  rep["provenance"]["regulator"] = "enumerate_cycle (full principal cycle walk)";
  rep["provenance"]["pip_order"] = "order_and_S over enumerate_cycle";
  return {lr.passed() ? kExitOk : kExitFail, rep};
}

CommandResult cmd_resources(const RunConfig& c) {
  const Int d = parse_int(c.disc, "--disc");
  Json rep = header("resources", c);
  Json res = Json::array();
  if (c.which == "both") {
    res.push_back(resource_json(estimate_qubits(d, "regulator")));
    res.push_back(resource_json(estimate_qubits(d, "pip")));
  } else {
    res.push_back(resource_json(estimate_qubits(d, c.which)));
  }
  rep["result"] = res;
  rep["provenance"]["n_bound"] = "10.5 log D ancilla bound";
  return {kExitOk, rep};
}

CommandResult cmd_find_disc(const RunConfig& c) {
  Json rep = header("find-disc", c);
  if (c.count < 1) throw InputError("--count must be positive");
  auto found = find_discriminants(parse_int(c.start, "--start"), c.min_ratio,
                                  static_cast<std::size_t>(c.count), parse_int(c.limit, "--limit"),
                                  c.cycle_cap);
  Json list = Json::array();
  for (const auto& f : found) {
    list.push_back({{"disc", f.disc.get_str()}, {"regulator", f.regulator}, {"ratio", f.ratio}});
  }
  rep["result"] = {{"found", found.size()}, {"discriminants", list}};
  rep["provenance"]["regulator"] = "regulator_classical (principal cycle walk)";
  return {found.empty() ? kExitFail : kExitOk, rep};
}

CommandResult run_guarded(const std::string& command, const RunConfig& config,
                          const std::function<CommandResult(const RunConfig&)>& body) {
  auto error = [&](int code, const std::string& type, const std::string& what) {
    Json rep = header(command, config);
    rep["error"] = {{"type", type}, {"message", what}};
    return CommandResult{code, rep};
  };
  try {
    return body(config);
  } catch (const CapExceeded& e) {
    return error(kExitCap, "cap_exceeded", e.what());
  } catch (const InputError& e) {
    return error(kExitInput, "input", e.what());
  } catch (const SizingError& e) {
    return error(kExitInput, "sizing", e.what());
  } catch (const RefinementError& e) {
    return error(kExitInput, "refinement", e.what());
  } catch (const InvariantViolation& e) {
    return error(kExitInternal, "invariant_violation", e.what());
  } catch (const std::exception& e) {
    return error(kExitInternal, "internal", e.what());
  }
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os, int depth) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os, depth + 1);
    }
  } else if (j.is_array()) {
    const bool scalars =
        std::all_of(j.begin(), j.end(), [](const Json& e) { return !e.is_structured(); });
    if (scalars && j.size() <= 8) {
      os << prefix << " = " << j.dump() << '\n';
    } else if (depth <= 2 && j.size() <= 32) {
      for (std::size_t i = 0; i < j.size(); ++i) {
        flatten(j[i], prefix + "[" + std::to_string(i) + "]", os, depth + 1);
      }
    } else {
      os << prefix << " = [" << j.size() << " entries]\n";
    }
  } else {
    os << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string render_table(const Json& report) {
  std::ostringstream os;
  os << report.value("command", "") << " (" << report.value("build_id", "") << ")\n";
  if (report.contains("error")) {
    os << "error: " << report["error"]["message"].get<std::string>() << '\n';
    return os.str();
  }
  if (report.value("command", "") == "resources") {
    for (const auto& r : report["result"]) {
      os << r["which"].get<std::string>() << ":\n";
      char line[160];
      for (const auto& reg : r["registers"]) {
        std::snprintf(line, sizeof line, "  %-8s %12.4f %8ld\n",
                      reg["name"].get<std::string>().c_str(), reg["formula"].get<double>(),
                      reg["qubits"].get<long>());
        os << line;
      }
      std::snprintf(line, sizeof line, "  %-8s %12.4f %8ld\n  %-8s %12.4f\n", "total",
                    r["formula_total_without_n"].get<double>(),
                    r["register_total_without_n"].get<long>(), "+ N <=", r["n_bound"].get<double>());
      os << line;
    }
    return os.str();
  }
  flatten(report["result"], "", os, 0);
  if (report.contains("oracle")) flatten(report["oracle"], "oracle", os, 1);
  return os.str();
}

}  // namespace rqinfra::cli
