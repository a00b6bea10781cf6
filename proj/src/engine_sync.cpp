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

#include "pbit/engine_sync.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pbit/parallel.hpp"

namespace pbit {
namespace {

// Shared by the real-valued and the integer forms so both round identically.
double flip_probability(double delta_e, double beta) { return std::exp(-2.0 * beta * delta_e); }
double up_weight(double input, double beta) { return 1.0 + std::tanh(beta * input); }

void check_index(const IsingNetwork& network, std::span<const Spin> state, std::size_t i) {
  if (state.size() != network.size()) throw std::invalid_argument("state length does not match the network");
  if (i >= network.size()) throw std::out_of_range("p-bit index out of range");
}

}  // namespace

std::string_view to_string(Neuron neuron) {
  return neuron == Neuron::flip_exponential ? "flip_exponential" : "tanh_sign";
}

Neuron parse_neuron(std::string_view name) {
  if (name == "flip_exponential" || name == "flip_exp" || name == "metropolis") return Neuron::flip_exponential;
  if (name == "tanh_sign" || name == "tanh" || name == "gibbs") return Neuron::tanh_sign;
  throw std::invalid_argument("unknown neuron '" + std::string(name) + "' (expected flip_exponential or tanh_sign)");
}

void SweepConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive and finite");
  if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
  if (!(clock_period_ns > 0.0)) throw std::invalid_argument("clock_period_ns must be positive");
}

double synapse_input(const IsingNetwork& network, std::span<const Spin> state, std::size_t i) {
  check_index(network, state, i);
  double field = 0.0;
  for (const auto& nb : network.neighbors(i)) field += nb.weight * state[nb.index];
  return field;
}

double synapse_delta_e(const IsingNetwork& network, std::span<const Spin> state, std::size_t i) {
  return state[i] * synapse_input(network, state, i);
}

Spin neuron_flip_exp(Spin m, double delta_e, double beta, double u) {
  return flip_probability(delta_e, beta) > u ? static_cast<Spin>(-m) : m;
}

Spin neuron_tanh(double input, double beta, double u) { return up_weight(input, beta) > 2.0 * u ? 1 : -1; }

std::uint32_t flip_threshold(double delta_e, double beta) {
  const double p = flip_probability(delta_e, beta);
  if (!(p < 1.0)) return kUniformRange;
  // p > k * 2^-24  <=>  k < ceil(p * 2^24); the scaling by 2^24 is exact.
  return static_cast<std::uint32_t>(std::ceil(p * kUniformRange));
}

std::uint32_t up_threshold(double input, double beta) {
  const double t = up_weight(input, beta);
  // t > 2 k 2^-24  <=>  k < ceil(t * 2^23).
  return static_cast<std::uint32_t>(std::ceil(t * (kUniformRange / 2)));
}

PbitUpdater::PbitUpdater(const IsingNetwork& network, double beta, Neuron neuron) : neuron_(neuron), beta_(beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("PbitUpdater: beta must be positive");
  const std::size_t n = network.size();
  nbr_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = network.neighbors(i);
    nbr_offset_[i + 1] = nbr_offset_[i] + nbrs.size();
    for (const auto& nb : nbrs) {
      nbr_flat_.push_back(nb.index);
      nbr_weight_.push_back(nb.weight);
    }
  }
  width_ = network.max_degree();
  tabulated_ = width_ <= kMaxTableDegree;
  if (!tabulated_) return;

  nbr_index_.resize(n * width_);
  table_.resize(n);
  std::map<std::vector<double>, std::uint32_t> tables;
  std::vector<double> weights(width_);
  const std::size_t patterns = std::size_t{1} << width_;
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = network.neighbors(i);
    for (std::size_t b = 0; b < width_; ++b) {
      // Padding slots point back at p-bit i with zero weight.
      nbr_index_[i * width_ + b] = b < nbrs.size() ? nbrs[b].index : static_cast<std::uint32_t>(i);
      weights[b] = b < nbrs.size() ? nbrs[b].weight : 0.0;
    }
    auto [it, inserted] = tables.try_emplace(weights, static_cast<std::uint32_t>(thresholds_.size()));
    table_[i] = it->second;
    if (!inserted) continue;
    for (std::size_t idx = 0; idx < patterns; ++idx) {
      // Same accumulation order as the direct synapse sum; zero-weight
      // padding terms come last and cannot change the result.
      double sum = 0.0;
      for (std::size_t b = 0; b < width_; ++b) sum += weights[b] * ((idx >> b) & 1u ? 1.0 : -1.0);
      thresholds_.push_back(neuron == Neuron::flip_exponential ? flip_threshold(sum, beta) : up_threshold(sum, beta));
    }
  }
}

ChromaticSampler::ChromaticSampler(const IsingNetwork& network, const Coloring& coloring, double beta, Neuron neuron)
    : updater_(network, beta, neuron) {
  if (!verify_coloring(network, coloring)) throw std::invalid_argument("ChromaticSampler: coloring is not proper");
  classes_ = coloring.classes();
}

void ChromaticSampler::sweep(std::span<Spin> state, RngBank& rng, PhaseOrder order) const {
  if (state.size() != updater_.size()) throw std::invalid_argument("sweep: state length does not match the network");
  std::size_t phases[256];
  const std::size_t c = classes_.size();
  std::iota(phases, phases + c, std::size_t{0});
  if (order == PhaseOrder::randomized) {
    auto& aux = rng.auxiliary();
    for (std::size_t i = c; i > 1; --i) {
      const auto j = static_cast<std::size_t>((std::uint64_t{aux.next()} * i) >> 32);
      std::swap(phases[i - 1], phases[j]);
    }
  }
  Spin* s = state.data();
  rng.visit([&](auto& streams) {
    for (std::size_t p = 0; p < c; ++p) {
      updater_.update_sites(classes_[phases[p]], s, streams,
                            [](auto& st, std::uint32_t i) { return RngBank::draw(st, i); });
    }
  });
}

void chromatic_sweep(const IsingNetwork& network, std::span<Spin> state, const Coloring& coloring, RngBank& rng,
                     const SweepConfig& config) {
  config.validate();
  ChromaticSampler(network, coloring, config.beta, config.neuron).sweep(state, rng, config.phase_order);
}

SyncEnsemble::SyncEnsemble(const IsingNetwork& network, const Coloring& coloring, const SpinConfig& initial,
                           SweepConfig config, EnsembleOptions options, Observable observable)
    : sampler_((config.validate(), network), coloring, config.beta, config.neuron),
      config_(config),
      options_(options),
      observable_(std::move(observable)) {
  if (options_.runs < 1) throw std::invalid_argument("ensemble needs at least one run");
  if (initial.size() != network.size()) throw std::invalid_argument("initial state length does not match the network");
  if (!observable_) throw std::invalid_argument("ensemble needs an observable");
  states_.assign(options_.runs, initial);
  banks_.reserve(options_.runs);
  for (std::size_t r = 0; r < options_.runs; ++r) banks_.emplace_back(options_.rng, options_.seed, r, network.size());
  traces_.resize(options_.runs);
  const double v0 = observable_(initial.view());
  for (auto& t : traces_) {
    t.time.push_back(0.0);
    t.values.push_back(v0);
  }
}

void SyncEnsemble::advance(std::size_t sweeps) {
  const std::size_t start = done_;
  parallel_for(options_.runs, options_.workers, [&](std::size_t run) {
    auto state = states_[run].mutable_view();
    auto& trace = traces_[run];
    for (std::size_t s = 1; s <= sweeps; ++s) {
      sampler_.sweep(state, banks_[run], config_.phase_order);
      const std::size_t global = start + s;
      if (global % config_.record_every == 0) {
        trace.time.push_back(static_cast<double>(global));
        trace.values.push_back(observable_(state));
      }
    }
  });
  done_ += sweeps;
}

std::vector<RunTrace> run_ensemble(const IsingNetwork& network, const Coloring& coloring, const SpinConfig& initial,
                                   const SweepConfig& config, const EnsembleOptions& options,
                                   const Observable& observable) {
  SyncEnsemble ensemble(network, coloring, initial, config, options, observable);
  ensemble.advance(config.sweeps);
  return ensemble.traces();
}

}  // namespace pbit
