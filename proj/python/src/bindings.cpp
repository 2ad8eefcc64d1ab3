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

// Python bindings. Integers cross the boundary as decimal strings and forms
// as "D:a,b,c" text; the package wrapper converts to int and dict.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commands.hpp"
#include "rqinfra/error.hpp"
#include "rqinfra/forms.hpp"
#include "rqinfra/oracle.hpp"
#include "rqinfra/recover.hpp"

namespace py = pybind11;
using namespace rqinfra;

namespace {

Discriminant disc_of(const std::string& d) { return Discriminant::make(Int(d)); }

ReducedForm reduced_of(const std::string& text) { return ReducedForm::make(parse_form(text)); }

cli::RunConfig config_from(const std::string& text) {
  const cli::Json j = cli::Json::parse(text);
  cli::RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "disc") c.disc = v.is_string() ? v.get<std::string>() : v.dump();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "precision_frac_bits") c.precision_frac_bits = v.get<long>();
    else if (key == "q") c.q = v.is_null() ? std::nullopt : std::optional(v.get<std::int64_t>());
    else if (key == "cycle_cap") c.cycle_cap = v.get<std::uint64_t>();
    else if (key == "max_attempts") c.max_attempts = v.get<int>();
    else if (key == "max_verify_failures") c.max_verify_failures = v.get<int>();
    else if (key == "relaxed") c.relaxed = v.get<bool>();
    else if (key == "force_quantum") c.force_quantum = v.get<bool>();
    else if (key == "oracle") c.run_oracle = v.get<bool>();
    else if (key == "mode") c.mode = v.get<std::string>();
    else if (key == "which") c.which = v.get<std::string>();
    else if (key == "form") c.form = v.get<std::string>();
    else if (key == "regulator") c.regulator = v.is_string() ? v.get<std::string>() : v.dump();
    else if (key == "samples") c.samples = v.get<int>();
    else if (key == "bound_forms") c.bound_forms = v.get<int>();
    else if (key == "peaks") c.peaks = v.get<int>();
    else if (key == "bounds") c.bounds = v.get<bool>();
    else if (key == "periods") c.periods = v.get<int>();
    else if (key == "min_ratio") c.min_ratio = v.get<double>();
    else if (key == "start") c.start = v.is_string() ? v.get<std::string>() : v.dump();
    else if (key == "limit") c.limit = v.is_string() ? v.get<std::string>() : v.dump();
    else if (key == "count") c.count = v.get<int>();
    else throw InputError("unknown config key '" + key + "'");
  }
  return c;
}

std::pair<int, std::string> run_json(const std::string& command, const std::string& config) {
  using Body = cli::CommandResult (*)(const cli::RunConfig&);
  Body body = command == "regulator"       ? cli::cmd_regulator
              : command == "pip"           ? cli::cmd_pip
              : command == "simulate"      ? cli::cmd_simulate
              : command == "verify-lemmas" ? cli::cmd_verify_lemmas
              : command == "resources"     ? cli::cmd_resources
              : command == "find-disc"     ? cli::cmd_find_disc
                                           : nullptr;
  if (body == nullptr) throw InputError("unknown command '" + command + "'");
  cli::CommandResult r;
  {
    py::gil_scoped_release release;
    r = cli::run_guarded(command, config_from(config), body);
  }
  return {r.exit_code, r.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regulator and principal-ideal algorithms for real quadratic fields, by exact simulation";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

  m.def("reduced_forms", [](const std::string& d) {
    std::vector<std::string> out;
    for (const auto& f : all_reduced_forms(disc_of(d))) out.push_back(format_form(f.form()));
    return out;
  });
  m.def("rho", [](const std::string& f) { return format_form(rho(reduced_of(f)).form()); });
  m.def("rho_inv", [](const std::string& f) { return format_form(rho_inv(reduced_of(f)).form()); });
  m.def("is_reduced", [](const std::string& f) { return is_reduced(parse_form(f)); });
  m.def("reduce", [](const std::string& f) {
    Reduction r = reduce(parse_form(f));
    return std::make_pair(format_form(r.form.form()), r.steps);
  });
  m.def("principal_cycle", [](const std::string& d) {
    const PrincipalCycle c = enumerate_cycle(disc_of(d));
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < c.forms.size(); ++i) {
      out.emplace_back(format_form(c.forms[i].form()), c.dists[i].value());
    }
    return std::make_pair(out, c.regulator());
  });
  m.def(
      "regulator_classical",
      [](const std::string& d, long bits) { return regulator_classical(disc_of(d), bits).value(); },
      py::arg("disc"), py::arg("bits") = 64);
  m.def("cf_recover", [](const std::string& y1, const std::string& y2, const std::string& q) {
    auto z = cf_recover(Int(y1), Int(y2), Int(q));
    return z ? std::optional(std::make_pair(z->first.get_str(), z->second.get_str())) : std::nullopt;
  });
  m.def("run_json", &run_json, py::arg("command"), py::arg("config"));
  m.attr("build_id") = cli::build_id();
}
