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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbit/analysis.hpp"
#include "pbit/coloring.hpp"
#include "pbit/engine_async.hpp"
#include "pbit/engine_sync.hpp"
#include "pbit/lattice.hpp"
#include "pbit/observables.hpp"
#include "pbit/rng.hpp"
#include "pbit/trotter.hpp"

namespace pbit {

std::string version();

enum class EngineKind : std::uint8_t { sync, async };

/// Every knob of one experiment. Config files are JSON objects with these
/// field names; command-line flags override file values.
struct ExperimentConfig {
  LatticeKind lattice = LatticeKind::square_octagonal;
  int L = 6;     // square-octagonal size
  int rows = 6;  // triangular size
  int cols = 6;
  int replicas = 10;  // 1: classical network, no transverse field
  double beta = 1.0 / 0.244;
  double gamma = 0.736;
  InitialState initial = InitialState::ccw;
  EngineKind engine = EngineKind::sync;
  Neuron neuron = Neuron::flip_exponential;
  RngKind rng = RngKind::xoshiro128plus;
  std::uint64_t seed = 1;
  std::size_t runs = 1000;
  std::size_t sweeps = 0;          // 0: adaptive horizon
  std::size_t initial_sweeps = 0;  // first adaptive horizon; 0: scaled with problem size
  std::size_t max_sweeps = 2000000;
  std::size_t record_every = 0;    // 0: automatic
  double clock_period_ns = 8.0;
  PhaseOrder phase_order = PhaseOrder::ascending;
  double tau_n = 1.0;
  double tau_s = 0.0;
  double horizon = 0.0;       // async, in tau_n units; 0: adaptive
  double sample_every = 0.0;  // async grid in tau_n units; 0: automatic
  AttemptProcess attempt_process = AttemptProcess::poisson;
  double tau_n_ns = 0.1;      // physical mapping used in async reports
  double threshold = 0.05;
  CiMethod ci = CiMethod::normal;
  std::size_t bootstrap_samples = 1000;
  unsigned workers = 0;
  std::string output_dir;
  bool write_traces = true;
};

/// Thrown by validate() and config_from_json(); what() lists "field: reason" entries.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Applies the keys present in `j` on top of `base`. Unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
void validate(const ExperimentConfig& config);

/// The network, coloring, initial state and observable described by a config.
struct Problem {
  LatticeGraph lattice;
  ReplicatedNetwork network;
  Coloring coloring;
  SpinConfig initial;  // replicated
  OrderParameter order;
};

Problem build_problem(const ExperimentConfig& config);

using Logger = std::function<void(const std::string&)>;

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t pbits = 0;
  std::size_t colors = 0;
  std::size_t plaquettes = 0;
  std::size_t num_qubits = 0;
  double j_perp = 0.0;
  double horizon = 0.0;      // sweeps (sync) or tau_n (async)
  double ns_per_unit = 0.0;  // modeled time per sweep or per tau_n
  EnsembleSeries series;
  FitResult fit;
  ConvergenceResult convergence;
  double g_ci = 0.0;
  double wall_seconds = 0.0;
  double updates_per_ns = 0.0;  // measured software throughput
  WallclockProjection projection;  // at the convergence time (sync)
  // async only
  double s = 0.0;
  double collision_rate = 0.0;
  double collision_fraction = 0.0;
  double stale_read_fraction = 0.0;
  double mean_degree = 0.0;
  std::vector<RunTrace> traces;

  nlohmann::json summary() const;
};

/// With a reference plateau, the adaptive horizon also waits until the fitted g
/// is within `threshold` of it.
ExperimentResult run_experiment(const ExperimentConfig& config, const Logger& log = {},
                                std::optional<double> reference_plateau = std::nullopt);

/// Header lines embedded in every output file: version and full config.
std::vector<std::string> output_header(const ExperimentConfig& config);

/// traces/run_NNNNN.csv (when enabled), ensemble.csv, summary.json.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

struct ScalingRow {
  int L = 0;
  std::size_t num_qubits = 0;
  std::size_t pbits = 0;
  bool converged = false;
  bool flagged = false;
  double t_conv_sweeps = 0.0;
  double t_conv_ns = 0.0;
  double g = 0.0;
  bool ordered_run = false;
  bool ordered_converged = false;
  double ordered_t_conv_sweeps = 0.0;
  double ordered_g = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::optional<ScalingResult> sweeps_fit;  // log t_conv (sweeps) vs log N_Q over converged sizes
  std::optional<ScalingResult> time_fit;    // modeled wall clock vs N_Q
  bool ordered_faster_everywhere = false;

  nlohmann::json to_json() const;
};

ScalingReport run_scaling(const ExperimentConfig& base, const std::vector<int>& sizes, bool with_ordered,
                          const Logger& log = {});
void write_scaling(const ScalingReport& report, const ExperimentConfig& base, const std::filesystem::path& dir);

struct RngStudyRow {
  RngKind kind = RngKind::xoshiro128plus;
  double g = 0.0;
  double g_ci = 0.0;
  double late_mean = 0.0;  // raw mean over the last 10% of the horizon
  bool converged = false;
  double t_conv_sweeps = 0.0;
  double horizon_sweeps = 0.0;
};

struct RngStudyReport {
  std::vector<RngStudyRow> rows;
  nlohmann::json to_json() const;
  const RngStudyRow* find(RngKind kind) const;
};

/// Runs the same problem with each generator over a common horizon.
RngStudyReport run_rng_study(const ExperimentConfig& base, const std::vector<RngKind>& kinds, const Logger& log = {});
void write_rng_study(const RngStudyReport& report, const ExperimentConfig& base, const std::filesystem::path& dir);

struct AsyncDemoRow {
  double s = 0.0;
  bool converged = false;
  double t_conv_tau = 0.0;
  double ratio_to_sync = 0.0;  // async tau_n / sync sweeps
  double collision_rate = 0.0;
  double collision_fraction = 0.0;
};

struct AsyncDemoReport {
  bool sync_converged = false;
  double sync_sweeps = 0.0;
  std::size_t sync_colors = 0;
  double sync_time_ns = 0.0;
  std::vector<AsyncDemoRow> rows;
  nlohmann::json to_json() const;
};

/// Sync (graph-colored) vs clockless convergence on the same problem, in
/// sweeps and tau_n units respectively.
AsyncDemoReport run_async_demo(const ExperimentConfig& base, const std::vector<double>& s_values,
                               const Logger& log = {});

/// Default configuration of the clockless demo: 6x6 triangular, classical, beta = 2, ccw.
ExperimentConfig async_demo_config();

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Engine-vs-exact checks on small fixtures: sampled distributions against
/// exact Boltzmann weights and the spectral decay series against matrix powers.
std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed, std::size_t samples, const Logger& log = {});

namespace fixtures {
/// 2x2 triangular strip: 4 spins, 5 AFM bonds, two frustrated plaquettes.
IsingNetwork four_spin();
/// The 2x2 strip trotterized with r = 2: 8 p-bits.
ReplicatedNetwork eight_pbit(double beta, double gamma);
/// One frustrated AFM triangle (a single plaquette) trotterized with r = 2: 6 p-bits.
ReplicatedNetwork six_pbit(double beta, double gamma);
/// Empirical state distribution of chromatic sweeps (one sample per sweep).
std::vector<double> sample_sync(const IsingNetwork& network, double beta, Neuron neuron, std::size_t sweeps,
                                std::uint64_t seed);
/// Empirical state distribution of the clockless engine, sampled every tau_n.
std::vector<double> sample_async(const IsingNetwork& network, double beta, double s, double horizon,
                                 std::uint64_t seed);
}  // namespace fixtures

}  // namespace pbit
