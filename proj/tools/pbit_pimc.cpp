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

// pbit-pimc: command line front end.
//
// Exit codes: 0 all validations passed, 1 a validation failed (not
// converged, oracle bound exceeded, ...), 2 usage or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbit/coloring.hpp"
#include "pbit/experiment.hpp"
#include "pbit/io.hpp"

namespace {

using json = nlohmann::json;
using namespace pbit;

struct Overrides {
  std::string config_file;
  std::optional<std::string> lattice, initial, engine, neuron, rng, phase_order, attempt_process, ci;
  std::optional<int> L, rows, cols, replicas;
  std::optional<double> beta, gamma, clock_period_ns, tau_n, tau_s, horizon, sample_every, tau_n_ns, threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs, sweeps, initial_sweeps, max_sweeps, record_every, bootstrap_samples;
  std::optional<unsigned> workers;
  std::optional<std::string> output_dir;
  bool no_traces = false;
};

void add_overrides(CLI::App* app, Overrides& o, bool problem_only = false) {
  app->add_option("--config", o.config_file, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  app->add_option("--lattice", o.lattice, "square_octagonal | triangular");
  app->add_option("--L", o.L, "square-octagonal size (multiple of 3, >= 6)");
  app->add_option("--rows", o.rows, "triangular rows");
  app->add_option("--cols", o.cols, "triangular columns");
  app->add_option("--replicas", o.replicas, "Trotter replicas r (1: classical)");
  app->add_option("--beta", o.beta, "inverse temperature");
  app->add_option("--gamma", o.gamma, "transverse field");
  if (problem_only) return;
  app->add_option("--initial", o.initial, "ordered | ccw | cw");
  app->add_option("--engine", o.engine, "sync | async");
  app->add_option("--neuron", o.neuron, "flip_exponential | tanh_sign");
  app->add_option("--rng", o.rng, "xoshiro128plus | lfsr16 | lfsr32 | mt_reference");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--runs", o.runs, "independent runs R");
  app->add_option("--sweeps", o.sweeps, "fixed sweep horizon (0: adaptive)");
  app->add_option("--initial-sweeps", o.initial_sweeps, "first adaptive horizon");
  app->add_option("--max-sweeps", o.max_sweeps, "adaptive horizon cap");
  app->add_option("--record-every", o.record_every, "sweeps between recorded samples");
  app->add_option("--clock-period-ns", o.clock_period_ns, "modeled clock period");
  app->add_option("--phase-order", o.phase_order, "ascending | randomized");
  app->add_option("--tau-n", o.tau_n, "mean attempt interval (async)");
  app->add_option("--tau-s", o.tau_s, "synapse delay (async)");
  app->add_option("--horizon", o.horizon, "async horizon in tau_n (0: adaptive)");
  app->add_option("--sample-every", o.sample_every, "async sample spacing in tau_n");
  app->add_option("--attempt-process", o.attempt_process, "poisson | periodic");
  app->add_option("--tau-n-ns", o.tau_n_ns, "physical tau_n used in reports");
  app->add_option("--threshold", o.threshold, "convergence threshold on |f(t) - g|");
  app->add_option("--ci", o.ci, "normal | bootstrap");
  app->add_option("--bootstrap-samples", o.bootstrap_samples, "bootstrap resamples");
  app->add_option("--workers", o.workers, "worker threads (0: hardware)");
  app->add_option("--output,-o", o.output_dir, "output directory");
  app->add_flag("--no-traces", o.no_traces, "skip per-run trace files");
}

ExperimentConfig resolve(const Overrides& o, ExperimentConfig base) {
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(o.config_file + ": " + e.what());
    }
    base = config_from_json(j, base);
  }
  json j = json::object();
  const auto set = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  set("lattice", o.lattice);
  set("L", o.L);
  set("rows", o.rows);
  set("cols", o.cols);
  set("replicas", o.replicas);
  set("beta", o.beta);
  set("gamma", o.gamma);
  set("initial", o.initial);
  set("engine", o.engine);
  set("neuron", o.neuron);
  set("rng", o.rng);
  set("seed", o.seed);
  set("runs", o.runs);
  set("sweeps", o.sweeps);
  set("initial_sweeps", o.initial_sweeps);
  set("max_sweeps", o.max_sweeps);
  set("record_every", o.record_every);
  set("clock_period_ns", o.clock_period_ns);
  set("phase_order", o.phase_order);
  set("tau_n", o.tau_n);
  set("tau_s", o.tau_s);
  set("horizon", o.horizon);
  set("sample_every", o.sample_every);
  set("attempt_process", o.attempt_process);
  set("tau_n_ns", o.tau_n_ns);
  set("threshold", o.threshold);
  set("ci", o.ci);
  set("bootstrap_samples", o.bootstrap_samples);
  set("workers", o.workers);
  set("output_dir", o.output_dir);
  if (o.no_traces) j["write_traces"] = false;
  auto cfg = config_from_json(j, base);
  validate(cfg);
  return cfg;
}

Logger stderr_logger(bool quiet) {
  if (quiet) return {};
  return [](const std::string& msg) { std::cerr << msg << '\n'; };
}

template <class T>
std::vector<T> split_list(const std::string& text, T (*parse)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse(item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_build_lattice(const Overrides& o, const std::string& out_path, bool with_network, bool as_json) {
  const auto cfg = resolve(o, {});
  const Problem pb = build_problem(cfg);
  const auto degrees = pb.lattice.degrees();
  std::size_t dmin = degrees.empty() ? 0 : degrees[0], dmax = 0;
  for (auto d : degrees) {
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  const bool connected = is_connected(pb.lattice);
  const bool colored = verify_coloring(pb.network.graph, pb.coloring);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    if (with_network) {
      write_network(out, pb.network, pb.coloring);
    } else {
      write_lattice(out, pb.lattice);
    }
  }
  const json summary = {{"lattice", std::string(to_string(pb.lattice.kind))},
                        {"num_spins", pb.lattice.num_spins},
                        {"edges", pb.lattice.edges.size()},
                        {"plaquettes", pb.lattice.plaquettes.size()},
                        {"degree_min", dmin},
                        {"degree_max", dmax},
                        {"connected", connected},
                        {"replicas", pb.network.replicas},
                        {"pbits", pb.network.size()},
                        {"j_perp", pb.network.j_perp},
                        {"colors", pb.coloring.num_colors},
                        {"coloring_valid", colored}};
  if (as_json) {
    std::cout << summary.dump(2) << '\n';
  } else {
    std::cout << "spins " << pb.lattice.num_spins << ", edges " << pb.lattice.edges.size() << ", plaquettes "
              << pb.lattice.plaquettes.size() << ", degree " << dmin << ".." << dmax << ", p-bits "
              << pb.network.size() << ", colors " << pb.coloring.num_colors << '\n';
  }
  return connected && colored ? 0 : 1;
}

int cmd_run(const Overrides& o, bool as_json, bool quiet) {
  const auto cfg = resolve(o, {});
  const auto res = run_experiment(cfg, stderr_logger(quiet));
  if (!cfg.output_dir.empty()) write_experiment(res, cfg.output_dir);
  if (as_json) {
    std::cout << res.summary().dump(2) << '\n';
  } else {
    std::cout << "p-bits " << res.pbits << ", colors " << res.colors << ", runs " << cfg.runs << ", horizon "
              << res.horizon << '\n';
    std::cout << "fit g = " << fmt(res.fit.g) << " +/- " << fmt(res.g_ci) << ", R^2 = " << fmt(res.fit.r_squared)
              << '\n';
    if (res.convergence.converged) {
      std::cout << "t_conv = " << fmt(res.convergence.time)
                << (cfg.engine == EngineKind::sync ? " sweeps" : " tau_n") << " ("
                << fmt(res.convergence.time * res.ns_per_unit) << " ns)"
                << (res.convergence.flagged ? " [raw cross-check disagrees]" : "") << '\n';
    } else {
      std::cout << "not converged within the horizon\n";
    }
    if (cfg.engine == EngineKind::async) {
      std::cout << "s = " << fmt(res.s) << (res.s > 0.2 ? " (above 0.2: sampling fidelity at risk)" : "")
                << ", collision rate " << fmt(res.collision_rate) << '\n';
    }
  }
  return res.convergence.converged ? 0 : 1;
}

int cmd_scaling(const Overrides& o, const std::string& sizes_text, bool ordered, bool as_json, bool quiet) {
  ExperimentConfig base;
  base.runs = 200;
  base.write_traces = false;
  const auto cfg = resolve(o, base);
  const auto sizes = split_list<int>(sizes_text, [](const std::string& s) { return std::stoi(s); });
  const auto report = run_scaling(cfg, sizes, ordered, stderr_logger(quiet));
  if (!cfg.output_dir.empty()) write_scaling(report, cfg, cfg.output_dir);
  if (as_json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    for (const auto& r : report.rows) {
      std::cout << "L " << r.L << ": N_Q " << r.num_qubits << ", t_conv " << (r.converged ? fmt(r.t_conv_sweeps) : "-")
                << " sweeps, g " << fmt(r.g) << (r.flagged ? " [flagged]" : "") << '\n';
    }
    if (report.sweeps_fit) {
      std::cout << "t_conv ~ N_Q^" << fmt(report.sweeps_fit->slope) << " (stderr " << fmt(report.sweeps_fit->slope_stderr)
                << ")\n";
    }
  }
  return report.sweeps_fit ? 0 : 1;
}

int cmd_rng_study(const Overrides& o, const std::string& kinds_text, bool as_json, bool quiet) {
  ExperimentConfig base;
  base.runs = 200;
  base.write_traces = false;
  const auto cfg = resolve(o, base);
  const auto kinds =
      split_list<RngKind>(kinds_text, [](const std::string& s) { return parse_rng_kind(s); });
  const auto report = run_rng_study(cfg, kinds, stderr_logger(quiet));
  if (!cfg.output_dir.empty()) write_rng_study(report, cfg, cfg.output_dir);
  if (as_json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    for (const auto& r : report.rows) {
      std::cout << to_string(r.kind) << ": g " << fmt(r.g) << " +/- " << fmt(r.g_ci) << ", late mean "
                << fmt(r.late_mean) << ", t_conv " << (r.converged ? fmt(r.t_conv_sweeps) : "-") << '\n';
    }
  }
  bool ok = !report.rows.empty();
  for (const auto& r : report.rows) ok = ok && std::isfinite(r.g);
  return ok ? 0 : 1;
}

int cmd_async_demo(const Overrides& o, const std::string& s_text, bool as_json, bool quiet) {
  const auto cfg = resolve(o, async_demo_config());
  const auto s_values = split_list<double>(s_text, [](const std::string& s) { return std::stod(s); });
  for (double s : s_values) {
    if (s > 0.2) std::cerr << "warning: s = " << s << " exceeds 0.2; sampling fidelity is not guaranteed\n";
  }
  const auto report = run_async_demo(cfg, s_values, stderr_logger(quiet));
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "async_demo.json") << report.to_json().dump(2) << '\n';
  }
  if (as_json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    std::cout << "sync: t_conv " << (report.sync_converged ? fmt(report.sync_sweeps) : "-") << " sweeps ("
              << report.sync_colors << " colors)\n";
    for (const auto& r : report.rows) {
      std::cout << "async s = " << fmt(r.s) << ": t_conv " << (r.converged ? fmt(r.t_conv_tau) : "-")
                << " tau_n, ratio " << fmt(r.ratio_to_sync) << ", collision rate " << fmt(r.collision_rate) << '\n';
    }
  }
  bool ok = report.sync_converged;
  for (const auto& r : report.rows) ok = ok && r.converged;
  return ok ? 0 : 1;
}

int cmd_oracle_check(std::uint64_t seed, std::size_t samples, bool as_json, bool quiet) {
  const auto checks = run_oracle_checks(seed, samples, {});
  bool ok = true;
  json j = json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass;
    j.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
    if (!as_json && !quiet) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << fmt(c.value) << " (bound " << fmt(c.bound)
                << ")\n";
    }
  }
  if (as_json) std::cout << json{{"checks", j}, {"pass", ok}}.dump(2) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-integral Monte Carlo on probabilistic-bit networks"};
  app.set_version_flag("--version", pbit::version());
  app.require_subcommand(1);
  bool as_json = false;
  bool quiet = false;
  app.add_flag("--json", as_json, "machine-readable output on stdout");
  app.add_flag("--quiet,-q", quiet, "no progress messages on stderr");

  Overrides lattice_o, run_o, scaling_o, rng_o, async_o;
  std::string lattice_out;
  bool lattice_network = false;
  auto* build = app.add_subcommand("build-lattice", "construct a lattice and its replicated network");
  add_overrides(build, lattice_o, true);
  build->add_option("--output,-o", lattice_out, "write the edge list to this file");
  build->add_flag("--network", lattice_network, "write the replicated network with couplings and colors");

  auto* run = app.add_subcommand("run", "one ensemble experiment");
  add_overrides(run, run_o);

  std::string sizes = "6,9,12";
  bool ordered = false;
  auto* scaling = app.add_subcommand("scaling", "convergence time versus system size");
  add_overrides(scaling, scaling_o);
  scaling->add_option("--sizes", sizes, "comma-separated L values")->capture_default_str();
  scaling->add_flag("--ordered", ordered, "also run from the ordered state");

  std::string kinds = "xoshiro128plus,lfsr32,lfsr16";
  auto* rng = app.add_subcommand("rng-study", "compare random number generators");
  add_overrides(rng, rng_o);
  rng->add_option("--kinds", kinds, "comma-separated generator names")->capture_default_str();

  std::string s_values = "0,0.01,0.05,0.1";
  auto* async = app.add_subcommand("async-demo", "clockless engine versus graph-colored sweeps");
  add_overrides(async, async_o);
  async->add_option("--s", s_values, "comma-separated tau_s / tau_n values")->capture_default_str();

  std::uint64_t oracle_seed = 1;
  std::size_t oracle_samples = 1000000;
  auto* oracle = app.add_subcommand("oracle-check", "engines against exact distributions on small networks");
  oracle->add_option("--seed", oracle_seed, "seed")->capture_default_str();
  oracle->add_option("--samples", oracle_samples, "samples per check")->capture_default_str();

  for (auto* sub : {build, run, scaling, rng, async, oracle}) {
    sub->add_flag("--json", as_json, "machine-readable output on stdout");
    sub->add_flag("--quiet,-q", quiet, "no progress messages on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_build_lattice(lattice_o, lattice_out, lattice_network, as_json);
    if (*run) return cmd_run(run_o, as_json, quiet);
    if (*scaling) return cmd_scaling(scaling_o, sizes, ordered, as_json, quiet);
    if (*rng) return cmd_rng_study(rng_o, kinds, as_json, quiet);
    if (*async) return cmd_async_demo(async_o, s_values, as_json, quiet);
    if (*oracle) return cmd_oracle_check(oracle_seed, oracle_samples, as_json, quiet);
  } catch (const pbit::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
