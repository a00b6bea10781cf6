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

#include "pbit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "pbit/io.hpp"
#include "pbit/oracle.hpp"

#ifndef PBIT_VERSION
#define PBIT_VERSION "0.0.0"
#endif

namespace pbit {
namespace {

using json = nlohmann::json;

std::string engine_name(EngineKind e) { return e == EngineKind::sync ? "sync" : "async"; }
EngineKind parse_engine(const std::string& s) {
  if (s == "sync") return EngineKind::sync;
  if (s == "async") return EngineKind::async;
  throw std::invalid_argument("expected sync or async");
}
std::string lattice_name(LatticeKind k) { return std::string(to_string(k)); }
LatticeKind parse_lattice(const std::string& s) {
  if (s == "square_octagonal") return LatticeKind::square_octagonal;
  if (s == "triangular") return LatticeKind::triangular;
  throw std::invalid_argument("expected square_octagonal or triangular");
}
std::string phase_name(PhaseOrder p) { return p == PhaseOrder::ascending ? "ascending" : "randomized"; }
PhaseOrder parse_phase(const std::string& s) {
  if (s == "ascending") return PhaseOrder::ascending;
  if (s == "randomized") return PhaseOrder::randomized;
  throw std::invalid_argument("expected ascending or randomized");
}
std::string ci_name(CiMethod c) { return c == CiMethod::normal ? "normal" : "bootstrap"; }
CiMethod parse_ci(const std::string& s) {
  if (s == "normal") return CiMethod::normal;
  if (s == "bootstrap") return CiMethod::bootstrap;
  throw std::invalid_argument("expected normal or bootstrap");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

json nullable(bool ok, double v) { return ok && std::isfinite(v) ? json(v) : json(nullptr); }

json fit_json(const FitResult& f) {
  return {{"model", "a*exp(-b*t) + c*exp(-d*t) + g"},
          {"a", f.a},
          {"b", f.b},
          {"c", f.c},
          {"d", f.d},
          {"g", f.g},
          {"r_squared", f.r_squared},
          {"residual_norm", f.residual_norm},
          {"converged", f.converged},
          {"robust_weights", "bisquare, K = 4.685, scale = MAD / 0.6745"},
          {"message", f.message}};
}

// Sync horizons grow by this factor until the crossing sits in the first half.
constexpr double kGrowth = 1.5;

bool plateau_plausible(const FitResult& fit) { return fit.g >= -0.05 && fit.g <= kMaxPseudospin + 0.1; }

struct Evaluated {
  EnsembleSeries series;
  FitResult fit;
  ConvergenceResult conv;
};

Evaluated evaluate(std::span<const RunTrace> traces, const ExperimentConfig& cfg) {
  Evaluated e;
  e.series = ensemble_average(traces, cfg.ci, cfg.bootstrap_samples, cfg.seed);
  if (e.series.size() >= 10) {
    e.fit = fit_double_exp(e.series);
    e.conv = convergence_time(e.series, e.fit, cfg.threshold);
  } else {
    e.fit.message = "too few points to fit";
  }
  return e;
}

bool settled(const Evaluated& e, double horizon, const ExperimentConfig& cfg, std::optional<double> reference) {
  if (reference && std::abs(e.fit.g - *reference) > cfg.threshold) return false;
  return e.conv.converged && plateau_plausible(e.fit) && e.conv.time <= 0.5 * horizon;
}

Coloring color_plain(const IsingNetwork& network) {
  if (auto two = two_color(network)) return std::move(*two.coloring);
  std::vector<std::size_t> order(network.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return greedy_color(network, order);
}

}  // namespace

std::string version() { return PBIT_VERSION; }

json to_json(const ExperimentConfig& c) {
  return {{"lattice", lattice_name(c.lattice)},
          {"L", c.L},
          {"rows", c.rows},
          {"cols", c.cols},
          {"replicas", c.replicas},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"initial", std::string(to_string(c.initial))},
          {"engine", engine_name(c.engine)},
          {"neuron", std::string(to_string(c.neuron))},
          {"rng", std::string(to_string(c.rng))},
          {"seed", c.seed},
          {"runs", c.runs},
          {"sweeps", c.sweeps},
          {"initial_sweeps", c.initial_sweeps},
          {"max_sweeps", c.max_sweeps},
          {"record_every", c.record_every},
          {"clock_period_ns", c.clock_period_ns},
          {"phase_order", phase_name(c.phase_order)},
          {"tau_n", c.tau_n},
          {"tau_s", c.tau_s},
          {"horizon", c.horizon},
          {"sample_every", c.sample_every},
          {"attempt_process", std::string(to_string(c.attempt_process))},
          {"tau_n_ns", c.tau_n_ns},
          {"threshold", c.threshold},
          {"ci", ci_name(c.ci)},
          {"bootstrap_samples", c.bootstrap_samples},
          {"workers", c.workers},
          {"output_dir", c.output_dir},
          {"write_traces", c.write_traces}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  std::vector<std::string> errors;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "lattice") c.lattice = parse_lattice(value.get<std::string>());
      else if (key == "L") c.L = value.get<int>();
      else if (key == "rows") c.rows = value.get<int>();
      else if (key == "cols") c.cols = value.get<int>();
      else if (key == "replicas") c.replicas = value.get<int>();
      else if (key == "beta") c.beta = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "initial") c.initial = parse_initial_state(value.get<std::string>());
      else if (key == "engine") c.engine = parse_engine(value.get<std::string>());
      else if (key == "neuron") c.neuron = parse_neuron(value.get<std::string>());
      else if (key == "rng") c.rng = parse_rng_kind(value.get<std::string>());
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "runs") c.runs = value.get<std::size_t>();
      else if (key == "sweeps") c.sweeps = value.get<std::size_t>();
      else if (key == "initial_sweeps") c.initial_sweeps = value.get<std::size_t>();
      else if (key == "max_sweeps") c.max_sweeps = value.get<std::size_t>();
      else if (key == "record_every") c.record_every = value.get<std::size_t>();
      else if (key == "clock_period_ns") c.clock_period_ns = value.get<double>();
      else if (key == "phase_order") c.phase_order = parse_phase(value.get<std::string>());
      else if (key == "tau_n") c.tau_n = value.get<double>();
      else if (key == "tau_s") c.tau_s = value.get<double>();
      else if (key == "horizon") c.horizon = value.get<double>();
      else if (key == "sample_every") c.sample_every = value.get<double>();
      else if (key == "attempt_process") c.attempt_process = parse_attempt_process(value.get<std::string>());
      else if (key == "tau_n_ns") c.tau_n_ns = value.get<double>();
      else if (key == "threshold") c.threshold = value.get<double>();
      else if (key == "ci") c.ci = parse_ci(value.get<std::string>());
      else if (key == "bootstrap_samples") c.bootstrap_samples = value.get<std::size_t>();
      else if (key == "workers") c.workers = value.get<unsigned>();
      else if (key == "output_dir") c.output_dir = value.get<std::string>();
      else if (key == "write_traces") c.write_traces = value.get<bool>();
      else errors.push_back(key + ": unknown field");
    } catch (const std::exception& e) {
      errors.push_back(key + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid config";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  const auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  if (c.lattice == LatticeKind::square_octagonal) {
    check(c.L >= 6, "L: must be >= 6");
    check(c.L % 3 == 0, "L: must be a multiple of 3");
  } else {
    check(c.rows >= 2 && c.cols >= 2, "rows/cols: must be >= 2");
    check(c.rows < 3 || c.rows % 3 == 0, "rows: must be a multiple of 3 for a periodic lattice");
    if (c.initial != InitialState::ordered) check(c.rows % 6 == 0, "initial: wound states need rows divisible by 6");
  }
  check(c.replicas == 1 || (c.replicas >= 2 && c.replicas % 2 == 0),
        "replicas: must be 1 (classical) or an even number >= 2");
  check(c.beta > 0.0 && std::isfinite(c.beta), "beta: must be positive");
  if (c.replicas > 1) check(c.gamma > 0.0, "gamma: must be positive when replicas > 1");
  check(c.runs >= 1, "runs: must be >= 1");
  check(c.max_sweeps >= 1, "max_sweeps: must be >= 1");
  check(c.clock_period_ns > 0.0, "clock_period_ns: must be positive");
  check(c.threshold > 0.0, "threshold: must be positive");
  check(c.tau_n > 0.0, "tau_n: must be positive");
  check(c.tau_s >= 0.0, "tau_s: must be nonnegative");
  check(c.horizon >= 0.0, "horizon: must be nonnegative");
  check(c.sample_every >= 0.0, "sample_every: must be nonnegative");
  check(c.tau_n_ns > 0.0, "tau_n_ns: must be positive");
  check(c.ci != CiMethod::bootstrap || c.bootstrap_samples >= 10, "bootstrap_samples: must be >= 10");
  if (!errors.empty()) {
    std::string msg = "invalid config";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

Problem build_problem(const ExperimentConfig& c) {
  validate(c);
  LatticeGraph lattice =
      c.lattice == LatticeKind::square_octagonal ? build_square_octagonal(c.L) : build_triangular(c.rows, c.cols);
  ReplicatedNetwork network =
      c.replicas == 1 ? classical_network(lattice, c.beta) : trotterize(lattice, c.replicas, c.beta, c.gamma);
  Coloring coloring = color_network(network);
  const SpinConfig base = construct_initial_state(lattice, c.initial);
  std::vector<Spin> values;
  values.reserve(network.size());
  for (int k = 0; k < network.replicas; ++k) values.insert(values.end(), base.values().begin(), base.values().end());
  OrderParameter order(lattice, network.replicas);
  return Problem{std::move(lattice), std::move(network), std::move(coloring), SpinConfig(std::move(values)),
                 std::move(order)};
}

std::vector<std::string> output_header(const ExperimentConfig& config) {
  return {"pbit-pimc " + version(), "config " + to_json(config).dump(),
          "estimator |zeta_conf| per run then mean over runs; basis average over member spins and all replicas",
          "rng lfsr16 taps 0xB400, lfsr32 taps 0x80200003, 24-bit uniforms"};
}

json ExperimentResult::summary() const {
  json j;
  j["version"] = version();
  j["config"] = to_json(config);
  j["problem"] = {{"pbits", pbits},           {"colors", colors},        {"plaquettes", plaquettes},
                  {"num_qubits", num_qubits}, {"j_perp", j_perp},        {"replicas", config.replicas}};
  j["estimator"] = "mean over runs of |zeta_conf|; basis average over member spins and all replicas";
  j["series"] = {{"points", series.size()},
                 {"runs", series.runs},
                 {"horizon", horizon},
                 {"time_unit", config.engine == EngineKind::sync ? "sweep" : "tau_n"},
                 {"initial_mean", series.size() ? series.mean.front() : 0.0},
                 {"final_mean", series.size() ? series.mean.back() : 0.0}};
  j["fit"] = fit_json(fit);
  j["g_ci_half_width"] = g_ci;
  j["convergence"] = {{"criterion", "|f(t) - g| <= " + fmt(convergence.threshold) + " (MSE " +
                                        fmt(convergence.threshold * convergence.threshold) + ")"},
                      {"converged", convergence.converged},
                      {"time", nullable(convergence.converged, convergence.time)},
                      {"time_ns", nullable(convergence.converged, convergence.time * ns_per_unit)},
                      {"raw_converged", convergence.raw_converged},
                      {"raw_time", nullable(convergence.raw_converged, convergence.raw_time)},
                      {"flagged", convergence.flagged}};
  j["throughput"] = {{"measured_updates_per_ns", updates_per_ns},
                     {"wall_seconds", wall_seconds},
                     {"ns_per_time_unit", ns_per_unit}};
  if (config.engine == EngineKind::sync) {
    j["throughput"]["modeled_flips_per_ns"] = projection.flips_per_ns;
    j["throughput"]["modeled_time_to_convergence_ns"] = nullable(convergence.converged, projection.time_ns);
  } else {
    j["async"] = {{"s", s},
                  {"fidelity_warning", s > 0.2},
                  {"collision_rate", collision_rate},
                  {"collision_fraction", collision_fraction},
                  {"stale_read_fraction", stale_read_fraction},
                  {"mean_degree", mean_degree},
                  {"d_s_squared", mean_degree * s * s}};
  }
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Logger& log, std::optional<double> reference_plateau) {
  const Problem pb = build_problem(cfg);
  ExperimentResult res;
  res.config = cfg;
  res.pbits = pb.network.size();
  res.colors = pb.coloring.num_colors;
  res.plaquettes = pb.lattice.plaquettes.size();
  res.num_qubits = pb.lattice.num_spins;
  res.j_perp = pb.network.j_perp;
  const OrderParameter& order = pb.order;
  const Observable observable = [&order](std::span<const Spin> s) { return order(s); };
  EnsembleOptions options{cfg.runs, cfg.seed, cfg.rng, cfg.workers};
  const auto t0 = std::chrono::steady_clock::now();
  Evaluated ev;

  if (cfg.engine == EngineKind::sync) {
    res.ns_per_unit = static_cast<double>(res.colors) * cfg.clock_period_ns;
    std::size_t first = cfg.sweeps;
    if (first == 0) {
      first = cfg.initial_sweeps != 0
                  ? cfg.initial_sweeps
                  : std::max<std::size_t>(100, static_cast<std::size_t>(2000.0 * res.pbits / 1440.0));
    }
    first = std::min(first, cfg.max_sweeps);
    SweepConfig sc;
    sc.beta = cfg.beta;
    sc.neuron = cfg.neuron;
    sc.sweeps = first;
    sc.record_every = cfg.record_every != 0 ? cfg.record_every : std::max<std::size_t>(1, first / 250);
    sc.clock_period_ns = cfg.clock_period_ns;
    sc.phase_order = cfg.phase_order;
    SyncEnsemble ensemble(pb.network.graph, pb.coloring, pb.initial, sc, options, observable);
    std::size_t step = first;
    while (true) {
      ensemble.advance(step);
      const auto done = ensemble.sweeps_done();
      ev = evaluate(ensemble.traces(), cfg);
      say(log, "sweeps " + std::to_string(done) + ": g = " + fmt(ev.fit.g, 4) +
                   (ev.conv.converged ? ", t_conv = " + fmt(ev.conv.time, 6) : ", not converged"));
      if (cfg.sweeps != 0 || settled(ev, static_cast<double>(done), cfg, reference_plateau) || done >= cfg.max_sweeps) break;
      const auto target = std::min<std::size_t>(cfg.max_sweeps, static_cast<std::size_t>(std::ceil(done * kGrowth)));
      step = target - done;
    }
    res.horizon = static_cast<double>(ensemble.sweeps_done());
    res.wall_seconds = seconds_since(t0);
    res.updates_per_ns = static_cast<double>(cfg.runs) * res.horizon * static_cast<double>(res.pbits) /
                         (res.wall_seconds * 1e9);
    res.projection = wallclock_projection(ev.conv.converged && ev.conv.time > 0 ? ev.conv.time : res.horizon,
                                          cfg.clock_period_ns, res.colors, res.pbits);
    res.traces = ensemble.traces();
  } else {
    res.ns_per_unit = cfg.tau_n_ns;
    double horizon = cfg.horizon != 0.0 ? cfg.horizon : 100.0;
    const double sample_every = cfg.sample_every != 0.0 ? cfg.sample_every : std::max(horizon / 250.0, 1e-3);
    std::size_t total_attempts = 0;
    while (true) {
      AsyncConfig ac;
      ac.beta = cfg.beta;
      ac.neuron = cfg.neuron;
      ac.tau_n = 1.0;  // simulated time is measured in tau_n
      ac.tau_s = cfg.tau_s / cfg.tau_n;
      ac.horizon = horizon;
      ac.sample_every = sample_every;
      ac.process = cfg.attempt_process;
      auto traces = run_async_ensemble(pb.network.graph, pb.initial, ac, options, observable);
      std::vector<RunTrace> samples;
      samples.reserve(traces.size());
      std::uint64_t collisions = 0, attempts = 0, stale = 0;
      for (auto& t : traces) {
        collisions += t.collisions;
        attempts += t.attempts;
        stale += t.stale_reads;
        samples.push_back(std::move(t.samples));
      }
      total_attempts += attempts;
      ev = evaluate(samples, cfg);
      res.s = ac.s();
      res.collision_rate = static_cast<double>(collisions) * ac.tau_s /
                           (static_cast<double>(res.pbits) * horizon * static_cast<double>(cfg.runs));
      res.collision_fraction = attempts ? static_cast<double>(collisions) / static_cast<double>(attempts) : 0.0;
      res.stale_read_fraction = attempts ? static_cast<double>(stale) / static_cast<double>(attempts) : 0.0;
      res.traces = std::move(samples);
      say(log, "horizon " + fmt(horizon) + " tau_n: g = " + fmt(ev.fit.g, 4) +
                   (ev.conv.converged ? ", t_conv = " + fmt(ev.conv.time, 6) : ", not converged"));
      if (cfg.horizon != 0.0 || settled(ev, horizon, cfg, reference_plateau) || horizon >= static_cast<double>(cfg.max_sweeps)) break;
      horizon *= 2.0;
    }
    res.horizon = horizon;
    res.wall_seconds = seconds_since(t0);
    res.updates_per_ns = static_cast<double>(total_attempts) / (res.wall_seconds * 1e9);
    double degree_sum = 0.0;
    for (std::size_t i = 0; i < pb.network.size(); ++i) degree_sum += static_cast<double>(pb.network.graph.degree(i));
    res.mean_degree = degree_sum / static_cast<double>(pb.network.size());
  }
  res.series = std::move(ev.series);
  res.fit = ev.fit;
  res.convergence = ev.conv;
  res.g_ci = res.series.size() ? plateau_half_width(res.series) : 0.0;
  return res;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto header = output_header(result.config);
  const char* index = result.config.engine == EngineKind::sync ? "sweep_index" : "time_tau_n";
  if (result.config.write_traces) {
    fs::create_directories(dir / "traces");
    for (std::size_t r = 0; r < result.traces.size(); ++r) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%05zu.csv", r);
      std::ofstream out(dir / "traces" / name);
      auto h = header;
      h.push_back("run " + std::to_string(r));
      write_trace_csv(out, result.traces[r], result.ns_per_unit, h, index);
    }
  }
  {
    std::ofstream out(dir / "ensemble.csv");
    write_series_csv(out, result.series, result.ns_per_unit, header, index);
  }
  std::ofstream(dir / "summary.json") << result.summary().dump(2) << '\n';
}

json ScalingReport::to_json() const {
  json j;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"L", r.L},
                         {"num_qubits", r.num_qubits},
                         {"pbits", r.pbits},
                         {"converged", r.converged},
                         {"flagged", r.flagged},
                         {"t_conv_sweeps", nullable(r.converged, r.t_conv_sweeps)},
                         {"t_conv_ns", nullable(r.converged, r.t_conv_ns)},
                         {"g", r.g},
                         {"ordered_converged", r.ordered_converged},
                         {"ordered_t_conv_sweeps", nullable(r.ordered_run && r.ordered_converged,
                                                            r.ordered_t_conv_sweeps)},
                         {"ordered_g", nullable(r.ordered_run, r.ordered_g)}});
  }
  const auto fit = [](const std::optional<ScalingResult>& f) {
    return f ? json{{"slope", f->slope}, {"intercept", f->intercept}, {"slope_stderr", f->slope_stderr},
                    {"residuals", f->residuals}}
             : json(nullptr);
  };
  j["sweeps_vs_qubits"] = fit(sweeps_fit);
  j["modeled_ns_vs_qubits"] = fit(time_fit);
  j["ordered_faster_everywhere"] = ordered_faster_everywhere;
  return j;
}

ScalingReport run_scaling(const ExperimentConfig& base, const std::vector<int>& sizes, bool with_ordered,
                          const Logger& log) {
  if (sizes.size() < 3) throw std::invalid_argument("scaling: at least 3 sizes are required");
  ScalingReport report;
  std::vector<std::pair<double, double>> sweeps_pts, time_pts;
  bool ordered_ok = with_ordered;
  for (int L : sizes) {
    ExperimentConfig cfg = base;
    cfg.lattice = LatticeKind::square_octagonal;
    cfg.L = L;
    ScalingRow row;
    row.L = L;
    // The ordered start relaxes quickly and brackets the plateau from above; the
    // ccw horizon keeps growing until its plateau agrees with it, so an early
    // metastable shoulder is not mistaken for equilibrium.
    std::optional<double> plateau;
    if (with_ordered) {
      cfg.initial = InitialState::ordered;
      say(log, "scaling: L = " + std::to_string(L) + " (ordered)");
      const auto ord = run_experiment(cfg, log);
      row.ordered_run = true;
      row.ordered_converged = ord.convergence.converged;
      row.ordered_t_conv_sweeps = ord.convergence.time;
      row.ordered_g = ord.fit.g;
      if (row.ordered_converged && plateau_plausible(ord.fit)) plateau = ord.fit.g;
    }
    cfg.initial = InitialState::ccw;
    say(log, "scaling: L = " + std::to_string(L) + " (ccw)");
    const auto res = run_experiment(cfg, log, plateau);
    row.num_qubits = res.num_qubits;
    row.pbits = res.pbits;
    row.converged = res.convergence.converged && res.convergence.time > 0.0 &&
                    (!plateau || std::abs(res.fit.g - *plateau) <= cfg.threshold);
    row.flagged = res.convergence.flagged || !row.converged;
    row.t_conv_sweeps = res.convergence.time;
    row.t_conv_ns = res.convergence.time * res.ns_per_unit;
    row.g = res.fit.g;
    if (row.converged) {
      sweeps_pts.emplace_back(static_cast<double>(row.num_qubits), row.t_conv_sweeps);
      time_pts.emplace_back(static_cast<double>(row.num_qubits), row.t_conv_ns);
    } else {
      say(log, "scaling: L = " + std::to_string(L) + " did not converge; excluded from the fit");
    }
    if (with_ordered) {
      ordered_ok = ordered_ok && row.ordered_converged && (!row.converged || row.ordered_t_conv_sweeps < row.t_conv_sweeps);
    }
    report.rows.push_back(row);
  }
  if (sweeps_pts.size() >= 3) {
    report.sweeps_fit = scaling_fit(sweeps_pts);
    report.time_fit = scaling_fit(time_pts);
  }
  report.ordered_faster_everywhere = ordered_ok;
  return report;
}

void write_scaling(const ScalingReport& report, const ExperimentConfig& base, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "scaling.csv");
  write_comment_header(out, output_header(base));
  out << "L,N_Q,pbits,t_conv_sweeps,t_conv_ns,converged,flagged,g,ordered_t_conv_sweeps,ordered_g\n";
  for (const auto& r : report.rows) {
    out << r.L << ',' << r.num_qubits << ',' << r.pbits << ',' << format_double(r.t_conv_sweeps) << ','
        << format_double(r.t_conv_ns) << ',' << r.converged << ',' << r.flagged << ',' << format_double(r.g) << ','
        << (r.ordered_run ? format_double(r.ordered_t_conv_sweeps) : std::string("")) << ','
        << (r.ordered_run ? format_double(r.ordered_g) : std::string("")) << '\n';
  }
  std::ofstream(dir / "scaling.json") << report.to_json().dump(2) << '\n';
}

const RngStudyRow* RngStudyReport::find(RngKind kind) const {
  for (const auto& r : rows)
    if (r.kind == kind) return &r;
  return nullptr;
}

json RngStudyReport::to_json() const {
  json j = json::array();
  for (const auto& r : rows) {
    j.push_back({{"rng", std::string(to_string(r.kind))},
                 {"g", r.g},
                 {"g_ci_half_width", r.g_ci},
                 {"late_mean", r.late_mean},
                 {"converged", r.converged},
                 {"t_conv_sweeps", nullable(r.converged, r.t_conv_sweeps)},
                 {"horizon_sweeps", r.horizon_sweeps}});
  }
  return j;
}

RngStudyReport run_rng_study(const ExperimentConfig& base, const std::vector<RngKind>& kinds, const Logger& log) {
  RngStudyReport report;
  ExperimentConfig cfg = base;
  std::optional<ExperimentResult> ref;
  if (cfg.sweeps == 0) {
    // The reference generator sets the common starting horizon; slower
    // generators keep growing theirs until they converge or hit max_sweeps.
    cfg.rng = RngKind::xoshiro128plus;
    say(log, "rng-study: sizing the horizon with xoshiro128plus");
    ref = run_experiment(cfg, log);
    cfg.initial_sweeps = static_cast<std::size_t>(ref->horizon);
  }
  for (RngKind kind : kinds) {
    cfg.rng = kind;
    say(log, "rng-study: " + std::string(to_string(kind)) + ", " +
                 std::to_string(cfg.sweeps ? cfg.sweeps : cfg.initial_sweeps) + " sweeps");
    const auto res = ref && kind == RngKind::xoshiro128plus ? *ref : run_experiment(cfg, log);
    RngStudyRow row;
    row.kind = kind;
    row.g = res.fit.g;
    row.g_ci = res.g_ci;
    const std::size_t n = res.series.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    row.late_mean = std::accumulate(res.series.mean.end() - static_cast<std::ptrdiff_t>(tail), res.series.mean.end(),
                                    0.0) / static_cast<double>(tail);
    row.converged = res.convergence.converged && plateau_plausible(res.fit);
    row.t_conv_sweeps = res.convergence.time;
    row.horizon_sweeps = res.horizon;
    report.rows.push_back(row);
  }
  return report;
}

void write_rng_study(const RngStudyReport& report, const ExperimentConfig& base, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "rng_study.csv");
  write_comment_header(out, output_header(base));
  out << "rng,g,g_ci_half_width,late_mean,converged,t_conv_sweeps,horizon_sweeps\n";
  for (const auto& r : report.rows) {
    out << to_string(r.kind) << ',' << format_double(r.g) << ',' << format_double(r.g_ci) << ','
        << format_double(r.late_mean) << ',' << r.converged << ',' << format_double(r.t_conv_sweeps) << ','
        << format_double(r.horizon_sweeps) << '\n';
  }
  std::ofstream(dir / "rng_study.json") << report.to_json().dump(2) << '\n';
}

ExperimentConfig async_demo_config() {
  ExperimentConfig c;
  c.lattice = LatticeKind::triangular;
  c.rows = 6;
  c.cols = 6;
  c.replicas = 1;
  c.beta = 2.0;
  c.initial = InitialState::ccw;
  // Compact stochastic-MTJ p-bits follow the tanh form.
  c.neuron = Neuron::tanh_sign;
  c.runs = 1000;
  c.initial_sweeps = 200;
  c.write_traces = false;
  return c;
}

json AsyncDemoReport::to_json() const {
  json j;
  j["sync"] = {{"converged", sync_converged},
               {"t_conv_sweeps", nullable(sync_converged, sync_sweeps)},
               {"colors", sync_colors},
               {"modeled_time_ns", nullable(sync_converged, sync_time_ns)}};
  j["async"] = json::array();
  for (const auto& r : rows) {
    j["async"].push_back({{"s", r.s},
                          {"converged", r.converged},
                          {"t_conv_tau_n", nullable(r.converged, r.t_conv_tau)},
                          {"ratio_to_sync", nullable(r.converged, r.ratio_to_sync)},
                          {"collision_rate", r.collision_rate},
                          {"collision_fraction", r.collision_fraction}});
  }
  return j;
}

AsyncDemoReport run_async_demo(const ExperimentConfig& base, const std::vector<double>& s_values,
                               const Logger& log) {
  AsyncDemoReport report;
  ExperimentConfig cfg = base;
  cfg.engine = EngineKind::sync;
  say(log, "async-demo: graph-colored reference");
  const auto sync = run_experiment(cfg, log);
  report.sync_converged = sync.convergence.converged;
  report.sync_sweeps = sync.convergence.time;
  report.sync_colors = sync.colors;
  report.sync_time_ns = sync.convergence.time * sync.ns_per_unit;
  for (double s : s_values) {
    ExperimentConfig ac = base;
    ac.engine = EngineKind::async;
    ac.tau_s = s * ac.tau_n;
    if (ac.horizon == 0.0) ac.horizon = std::max(20.0, 2.0 * sync.horizon);
    if (ac.sample_every == 0.0) ac.sample_every = ac.horizon / 500.0;
    say(log, "async-demo: s = " + fmt(s));
    const auto res = run_experiment(ac, log);
    AsyncDemoRow row;
    row.s = s;
    row.converged = res.convergence.converged;
    row.t_conv_tau = res.convergence.time;
    row.ratio_to_sync = report.sync_sweeps > 0 ? res.convergence.time / report.sync_sweeps : 0.0;
    row.collision_rate = res.collision_rate;
    row.collision_fraction = res.collision_fraction;
    report.rows.push_back(row);
  }
  return report;
}

namespace fixtures {

IsingNetwork four_spin() { return classical_network(build_triangular(2, 2), 1.0).graph; }

ReplicatedNetwork eight_pbit(double beta, double gamma) { return trotterize(build_triangular(2, 2), 2, beta, gamma); }

ReplicatedNetwork six_pbit(double beta, double gamma) {
  LatticeGraph g;
  g.kind = LatticeKind::triangular;
  g.rows = 1;
  g.cols = 3;
  g.spins_per_basis = 1;
  g.num_spins = 3;
  g.edges = {{0, 1, kAfmCoupling}, {1, 2, kAfmCoupling}, {0, 2, kAfmCoupling}};
  g.sublattice = {Sublattice::red, Sublattice::green, Sublattice::blue};
  g.basis = {0, 1, 2};
  g.plaquettes = {{0, 1, 2}};
  return trotterize(g, 2, beta, gamma);
}

std::vector<double> sample_sync(const IsingNetwork& network, double beta, Neuron neuron, std::size_t sweeps,
                                std::uint64_t seed) {
  const Coloring coloring = color_plain(network);
  const ChromaticSampler sampler(network, coloring, beta, neuron);
  RngBank bank(RngKind::xoshiro128plus, seed, 0, network.size());
  std::vector<Spin> state(network.size(), 1);
  for (int k = 0; k < 1000; ++k) sampler.sweep(state, bank);
  std::vector<std::uint64_t> counts(std::size_t{1} << network.size(), 0);
  for (std::size_t k = 0; k < sweeps; ++k) {
    sampler.sweep(state, bank);
    ++counts[state_index(state)];
  }
  return empirical_distribution(counts);
}

std::vector<double> sample_async(const IsingNetwork& network, double beta, double s, double horizon,
                                 std::uint64_t seed) {
  AsyncConfig cfg;
  cfg.beta = beta;
  cfg.neuron = Neuron::tanh_sign;
  cfg.tau_n = 1.0;
  cfg.tau_s = s;
  cfg.horizon = horizon;
  cfg.sample_every = 1.0;
  RngBank bank(RngKind::xoshiro128plus, seed, 0, network.size());
  const auto trace = run_async(network, SpinConfig(network.size(), 1), cfg, bank,
                               [](std::span<const Spin> st) { return static_cast<double>(state_index(st)); });
  std::vector<std::uint64_t> counts(std::size_t{1} << network.size(), 0);
  // Skip the first 1% as burn-in.
  const std::size_t skip = trace.samples.values.size() / 100;
  for (std::size_t k = skip; k < trace.samples.values.size(); ++k)
    ++counts[static_cast<std::size_t>(trace.samples.values[k])];
  return empirical_distribution(counts);
}

}  // namespace fixtures

std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed, std::size_t samples, const Logger& log) {
  std::vector<OracleCheck> out;
  const auto add = [&](std::string name, double value, double bound) {
    out.push_back({std::move(name), value, bound, value < bound});
    say(log, out.back().name + ": " + fmt(value) + (out.back().pass ? " < " : " >= ") + fmt(bound));
  };
  const double beta = 1.0;
  const IsingNetwork four = fixtures::four_spin();
  const auto exact4 = exact_boltzmann(four, beta);
  const auto eight = fixtures::eight_pbit(beta, 1.0);
  const auto exact8 = exact_boltzmann(eight.graph, beta);

  add("sync_tanh_4spin_tv", tv_distance(fixtures::sample_sync(four, beta, Neuron::tanh_sign, samples, seed),
                                        exact4.probabilities), 0.02);
  add("sync_tanh_8pbit_tv", tv_distance(fixtures::sample_sync(eight.graph, beta, Neuron::tanh_sign, samples, seed + 1),
                                        exact8.probabilities), 0.02);
  add("sync_flip_4spin_tv", tv_distance(fixtures::sample_sync(four, beta, Neuron::flip_exponential, samples, seed + 2),
                                        exact4.probabilities), 0.02);
  add("async_s0_4spin_tv", tv_distance(fixtures::sample_async(four, beta, 0.0, static_cast<double>(samples), seed + 3),
                                       exact4.probabilities), 0.03);
  add("async_s0.01_4spin_tv",
      tv_distance(fixtures::sample_async(four, beta, 0.01, static_cast<double>(samples), seed + 4),
                  exact4.probabilities), 0.03);
  add("async_s0_8pbit_tv",
      tv_distance(fixtures::sample_async(eight.graph, beta, 0.0, static_cast<double>(samples), seed + 5),
                  exact8.probabilities), 0.03);

  // Exact chains: stochasticity, stationarity and the spectral decay series.
  const auto w = transition_matrix(four, beta, UpdateRule::sequential_gibbs);
  const Eigen::Map<const Eigen::RowVectorXd> pi(exact4.probabilities.data(), w.rows());
  add("sequential_gibbs_row_sum_error", (w.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  add("sequential_gibbs_stationarity_error", (pi * w - pi).cwiseAbs().maxCoeff(), 1e-12);

  const auto six = fixtures::six_pbit(beta, 1.0);
  const auto chain = transition_matrix(six.graph, beta, UpdateRule::chromatic_sweep, Neuron::tanh_sign);
  const OrderParameter order(six.base, six.replicas);
  const auto table = observable_table(six.size(), [&](std::span<const Spin> s) { return order(s); });
  const auto series = decay_series(chain, 0, table);
  const auto direct = propagate(chain, 0, table, 100);
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.size(); ++k) worst = std::max(worst, std::abs(series.evaluate(k) - direct[k]));
  add("decay_series_vs_matrix_powers", worst, 1e-8);
  return out;
}

}  // namespace pbit
