/*
Copyright 2026 The pbit-pimc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "pbit/analysis.hpp"
#include "pbit/coloring.hpp"
#include "pbit/experiment.hpp"
#include "pbit/lattice.hpp"
#include "pbit/observables.hpp"
#include "pbit/oracle.hpp"
#include "pbit/trotter.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

pbit::ExperimentConfig parse_config(const std::string& text) {
  return pbit::config_from_json(json::parse(text));
}

std::string lattice_summary(const std::string& config_text) {
  const auto cfg = parse_config(config_text);
  const auto pb = pbit::build_problem(cfg);
  json edges = json::array();
  for (const auto& e : pb.lattice.edges) edges.push_back({e.i, e.j, e.coupling});
  std::string labels;
  for (auto s : pb.lattice.sublattice) labels += pbit::sublattice_letter(s);
  const auto z = pbit::config_pseudospin(pb.lattice, pb.initial.view(), pb.network.replicas);
  return json{{"num_spins", pb.lattice.num_spins},
              {"edges", edges},
              {"sublattices", labels},
              {"plaquettes", pb.lattice.plaquettes.size()},
              {"pbits", pb.network.size()},
              {"colors", pb.coloring.num_colors},
              {"bipartite", static_cast<bool>(pbit::two_color(pb.network.graph))},
              {"j_perp", pb.network.j_perp},
              {"initial_order", std::abs(z)}}
      .dump();
}

py::dict run(const std::string& config_text) {
  py::gil_scoped_release release;
  const auto cfg = parse_config(config_text);
  auto res = pbit::run_experiment(cfg);
  if (!cfg.output_dir.empty()) pbit::write_experiment(res, cfg.output_dir);
  py::gil_scoped_acquire acquire;
  py::dict out;
  out["summary"] = res.summary().dump();
  out["time"] = res.series.time;
  out["mean"] = res.series.mean;
  out["ci_half_width"] = res.series.ci_half_width;
  return out;
}

std::string oracle_checks(std::uint64_t seed, std::size_t samples) {
  py::gil_scoped_release release;
  json j = json::array();
  for (const auto& c : pbit::run_oracle_checks(seed, samples))
    j.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  return j.dump();
}

py::dict fit(const std::vector<double>& x, const std::vector<double>& y, bool robust) {
  pbit::FitOptions opt;
  opt.robust = robust;
  const auto f = pbit::fit_double_exp(x, y, opt);
  py::dict d;
  d["a"] = f.a;
  d["b"] = f.b;
  d["c"] = f.c;
  d["d"] = f.d;
  d["g"] = f.g;
  d["r_squared"] = f.r_squared;
  d["converged"] = f.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pbitpimc, m) {
  m.doc() = "Bindings for the pbit-pimc core";
  m.attr("__version__") = pbit::version();
  m.def("replica_coupling", &pbit::replica_coupling, py::arg("beta"), py::arg("gamma"), py::arg("replicas"));
  m.def("wallclock_projection",
        [](double sweeps, double clock_ns, std::size_t colors, std::size_t pbits) {
          const auto p = pbit::wallclock_projection(sweeps, clock_ns, colors, pbits);
          return py::make_tuple(p.time_ns, p.flips_per_ns);
        },
        py::arg("sweeps"), py::arg("clock_period_ns"), py::arg("colors"), py::arg("pbits"));
  m.def("_lattice_summary", &lattice_summary);
  m.def("_run", &run);
  m.def("_oracle_checks", &oracle_checks);
  m.def("fit_double_exp", &fit, py::arg("x"), py::arg("y"), py::arg("robust") = true);
  m.def("_default_config", [] { return pbit::to_json(pbit::ExperimentConfig{}).dump(); });
  py::register_exception<pbit::ConfigError>(m, "ConfigError", PyExc_ValueError);
}
