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

#include "pbit/engine_async.hpp"

#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>

#include "pbit/parallel.hpp"

namespace pbit {
namespace {

struct Attempt {
  double time;
  std::uint32_t pbit;
  bool operator>(const Attempt& o) const noexcept { return time != o.time ? time > o.time : pbit > o.pbit; }
};

// Neighbor values as seen through the synapse delay. Reads happen at
// nondecreasing times, so changes older than the read time fold into `base`.
struct DelayedValue {
  Spin base;
  std::deque<std::pair<double, Spin>> changes;

  Spin at(double t) {
    while (!changes.empty() && changes.front().first <= t) {
      base = changes.front().second;
      changes.pop_front();
    }
    return base;
  }
};

// Uniform in [0, 1) with 48 bits from two consecutive 24-bit words.
template <class Streams>
double clock_uniform(Streams& streams, std::size_t pbit) {
  const std::uint64_t hi = RngBank::draw(streams, pbit);
  const std::uint64_t lo = RngBank::draw(streams, pbit);
  return static_cast<double>((hi << 24) | lo) * 0x1.0p-48;
}

}  // namespace

std::string_view to_string(AttemptProcess process) {
  return process == AttemptProcess::poisson ? "poisson" : "periodic";
}

AttemptProcess parse_attempt_process(std::string_view name) {
  if (name == "poisson") return AttemptProcess::poisson;
  if (name == "periodic") return AttemptProcess::periodic;
  throw std::invalid_argument("unknown attempt process '" + std::string(name) + "' (expected poisson or periodic)");
}

void AsyncConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("async: beta must be positive");
  if (!(tau_n > 0.0)) throw std::invalid_argument("async: tau_n must be positive");
  if (!(tau_s >= 0.0)) throw std::invalid_argument("async: tau_s must be nonnegative");
  if (!(horizon > 0.0)) throw std::invalid_argument("async: horizon must be positive");
  if (!(sample_every > 0.0)) throw std::invalid_argument("async: sample_every must be positive");
}

EventTrace run_async(const IsingNetwork& network, const SpinConfig& initial, const AsyncConfig& config, RngBank& rng,
                     const Observable& observable) {
  config.validate();
  const std::size_t n = network.size();
  if (initial.size() != n) throw std::invalid_argument("async: initial state length does not match the network");
  if (!observable) throw std::invalid_argument("async: observable required");

  const PbitUpdater updater(network, config.beta, config.neuron);
  std::vector<Spin> state(initial.values());
  std::vector<DelayedValue> delayed(n);
  for (std::size_t i = 0; i < n; ++i) delayed[i].base = state[i];
  std::vector<std::deque<double>> recent_attempts(config.tau_s > 0.0 ? n : 0);

  EventTrace trace;
  trace.horizon = config.horizon;
  trace.tau_n = config.tau_n;
  trace.tau_s = config.tau_s;
  trace.attempts_per_pbit.assign(n, 0);

  const double tau_n = config.tau_n;
  const double tau_s = config.tau_s;
  const bool stale = tau_s > 0.0;
  const auto grid_points = static_cast<std::size_t>(std::floor(config.horizon / config.sample_every + 1e-9));
  std::size_t next_sample = 0;
  const auto sample_until = [&](double t, bool inclusive) {
    while (next_sample <= grid_points) {
      const double ts = static_cast<double>(next_sample) * config.sample_every;
      if (inclusive ? ts > t : ts >= t) break;
      trace.samples.time.push_back(ts / tau_n);
      trace.samples.values.push_back(observable(std::span<const Spin>(state)));
      ++next_sample;
    }
  };

  rng.visit([&](auto& streams) {
    const auto gap = [&](std::size_t i) {
      const double u = clock_uniform(streams, i);
      return config.process == AttemptProcess::poisson ? -tau_n * std::log1p(-u) : tau_n;
    };
    std::priority_queue<Attempt, std::vector<Attempt>, std::greater<>> queue;
    for (std::size_t i = 0; i < n; ++i) {
      const double first = config.process == AttemptProcess::poisson ? gap(i) : tau_n * clock_uniform(streams, i);
      queue.push({first, static_cast<std::uint32_t>(i)});
    }

    while (!queue.empty() && queue.top().time <= config.horizon) {
      const Attempt a = queue.top();
      queue.pop();
      const double t = a.time;
      const std::uint32_t i = a.pbit;
      sample_until(t, false);

      if (stale) {
        const double window_start = t - tau_s;
        for (const auto& nb : network.neighbors(i)) {
          auto& hist = recent_attempts[nb.index];
          while (!hist.empty() && hist.front() <= window_start) hist.pop_front();
          trace.collisions += hist.size();
        }
        auto& own = recent_attempts[i];
        while (!own.empty() && own.front() <= window_start) own.pop_front();
        own.push_back(t);
      }

      const std::uint32_t k = RngBank::draw(streams, i);
      Spin next;
      if (stale) {
        const double read_time = t - tau_s;
        bool differs = false;
        next = updater.decide(
            i, state[i],
            [&](std::uint32_t j) {
              const Spin v = delayed[j].at(read_time);
              differs |= v != state[j];
              return v;
            },
            k);
        trace.stale_reads += differs;
      } else {
        next = updater.decide(i, state[i], [&](std::uint32_t j) { return state[j]; }, k);
      }

      ++trace.attempts;
      ++trace.attempts_per_pbit[i];
      if (next != state[i]) {
        state[i] = next;
        ++trace.flips;
        if (stale) {
          delayed[i].at(t - tau_s);  // bound the history of rarely read p-bits
          delayed[i].changes.emplace_back(t, next);
        }
        if (config.record_events) trace.events.push_back({t, i, next});
      }
      queue.push({t + gap(i), i});
    }
  });
  sample_until(config.horizon, true);
  return trace;
}

std::vector<EventTrace> run_async_ensemble(const IsingNetwork& network, const SpinConfig& initial,
                                           const AsyncConfig& config, const EnsembleOptions& options,
                                           const Observable& observable) {
  if (options.runs < 1) throw std::invalid_argument("async ensemble needs at least one run");
  std::vector<EventTrace> out(options.runs);
  parallel_for(options.runs, options.workers, [&](std::size_t run) {
    RngBank bank(options.rng, options.seed, run, network.size());
    out[run] = run_async(network, initial, config, bank, observable);
  });
  return out;
}

double collision_rate(const EventTrace& trace, const IsingNetwork& network) {
  if (trace.attempts == 0) throw std::invalid_argument("collision_rate: trace has no attempts");
  if (trace.tau_s == 0.0) return 0.0;
  return static_cast<double>(trace.collisions) * trace.tau_s /
         (static_cast<double>(network.size()) * trace.horizon);
}

double collision_fraction(const EventTrace& trace) {
  if (trace.attempts == 0) throw std::invalid_argument("collision_fraction: trace has no attempts");
  return static_cast<double>(trace.collisions) / static_cast<double>(trace.attempts);
}

}  // namespace pbit
