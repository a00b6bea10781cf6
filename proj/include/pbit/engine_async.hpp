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
#include <string_view>
#include <vector>

#include "pbit/engine_sync.hpp"

namespace pbit {

enum class AttemptProcess : std::uint8_t {
  poisson,   // exponential gaps with mean tau_n
  periodic,  // fixed gap tau_n after a random phase
};

std::string_view to_string(AttemptProcess process);
AttemptProcess parse_attempt_process(std::string_view name);

struct AsyncConfig {
  double beta = 2.0;
  Neuron neuron = Neuron::flip_exponential;
  double tau_n = 1.0;        // mean attempt interval
  double tau_s = 0.0;        // synapse propagation delay
  double horizon = 100.0;    // simulated time
  double sample_every = 1.0; // observable grid spacing
  AttemptProcess process = AttemptProcess::poisson;
  bool record_events = false;

  double s() const noexcept { return tau_s / tau_n; }
  /// True when s is large enough that stale reads distort the dynamics noticeably.
  bool fidelity_warning() const noexcept { return s() > 0.2; }
  void validate() const;
};

struct AsyncEvent {
  double time;
  std::uint32_t pbit;
  Spin value;
};

struct EventTrace {
  std::vector<AsyncEvent> events;  // filled only with record_events
  std::uint64_t attempts = 0;
  std::uint64_t flips = 0;
  /// Pairs (attempt of i at t, attempt of a neighbor of i in (t - tau_s, t]).
  std::uint64_t collisions = 0;
  /// Attempts whose stale neighbor view differed from the true current state.
  std::uint64_t stale_reads = 0;
  std::vector<std::uint64_t> attempts_per_pbit;
  RunTrace samples;  // time in units of tau_n
  double horizon = 0.0;
  double tau_n = 1.0;
  double tau_s = 0.0;
};

/// Discrete-event run of the clockless network. Every attempt evaluates the
/// neuron with neighbor values as they were tau_s earlier; the p-bit's own
/// value is always current. Colliding updates are counted, never suppressed.
EventTrace run_async(const IsingNetwork& network, const SpinConfig& initial, const AsyncConfig& config, RngBank& rng,
                     const Observable& observable);

std::vector<EventTrace> run_async_ensemble(const IsingNetwork& network, const SpinConfig& initial,
                                           const AsyncConfig& config, const EnsembleOptions& options,
                                           const Observable& observable);

/// Collisions per p-bit per tau_s window; the expectation is d * s^2 for degree d.
double collision_rate(const EventTrace& trace, const IsingNetwork& network);
/// Collisions per attempt (about d * s).
double collision_fraction(const EventTrace& trace);

}  // namespace pbit
