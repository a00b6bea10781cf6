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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pbit/coloring.hpp"
#include "pbit/rng.hpp"
#include "pbit/spin.hpp"
#include "pbit/trotter.hpp"

namespace pbit {

enum class Neuron : std::uint8_t {
  flip_exponential,  // flip with probability min(1, exp(-2 beta dE)), Metropolis
  tanh_sign,         // m = sgn(tanh(beta I) - 2u + 1), Gibbs
};

enum class PhaseOrder : std::uint8_t { ascending, randomized };

std::string_view to_string(Neuron neuron);
Neuron parse_neuron(std::string_view name);

struct SweepConfig {
  double beta = 1.0 / 0.244;
  Neuron neuron = Neuron::flip_exponential;
  std::size_t sweeps = 1000;
  std::size_t record_every = 1;
  double clock_period_ns = 8.0;  // timing model only
  PhaseOrder phase_order = PhaseOrder::ascending;

  void validate() const;
};

/// I_i = sum_j W_ij m_j.
double synapse_input(const IsingNetwork& network, std::span<const Spin> state, std::size_t i);
/// dE_i = m_i sum_j W_ij m_j; flipping p-bit i changes H by 2 dE_i.
double synapse_delta_e(const IsingNetwork& network, std::span<const Spin> state, std::size_t i);

/// Returns -m when exp(-2 beta dE) > u, m otherwise.
Spin neuron_flip_exp(Spin m, double delta_e, double beta, double u);
/// Returns +1 when 1 + tanh(beta I) > 2u, -1 otherwise.
Spin neuron_tanh(double input, double beta, double u);

// Integer forms of the two neurons for u = k * 2^-24, k in [0, 2^24):
// the decision is `k < threshold`, bit-identical to the real-valued forms.
std::uint32_t flip_threshold(double delta_e, double beta);
std::uint32_t up_threshold(double input, double beta);

/// Table-driven p-bit update rule. Every p-bit's neighbor list is padded to
/// the network's maximum degree with zero-weight self references, and for
/// each neighbor pattern the integer decision threshold of the neuron is
/// tabulated. P-bits with identical weight lists share one table.
class PbitUpdater {
 public:
  static constexpr std::size_t kMaxTableDegree = 10;

  PbitUpdater(const IsingNetwork& network, double beta, Neuron neuron);

  std::size_t size() const noexcept { return nbr_offset_.empty() ? 0 : nbr_offset_.size() - 1; }
  std::size_t width() const noexcept { return width_; }
  Neuron neuron() const noexcept { return neuron_; }
  double beta() const noexcept { return beta_; }

  /// New value of p-bit i given its current value, a neighbor reader and a
  /// 24-bit random word.
  template <class Read>
  Spin decide(std::size_t i, Spin current, Read&& read, std::uint32_t k) const {
    if (!tabulated_) return decide_direct(i, current, read, k);
    const Spin ref = neuron_ == Neuron::flip_exponential ? current : Spin{1};
    const std::uint32_t* nb = nbr_index_.data() + i * width_;
    std::uint32_t idx = 0;
    for (std::size_t b = 0; b < width_; ++b) idx |= static_cast<std::uint32_t>(read(nb[b]) == ref) << b;
    const std::uint32_t threshold = thresholds_[table_[i] + idx];
    if (neuron_ == Neuron::flip_exponential) return k < threshold ? static_cast<Spin>(-current) : current;
    return k < threshold ? Spin{1} : Spin{-1};
  }

  /// In-place update of every p-bit in `sites` from the live state array.
  /// Specialized on the neuron and padded degree; equivalent to calling
  /// decide() for each site in order.
  template <class Streams, class Draw>
  void update_sites(std::span<const std::uint32_t> sites, Spin* state, Streams& streams, Draw&& draw) const;

 private:
  template <bool kFlip, std::size_t kWidth, class Streams, class Draw>
  void update_fixed(std::span<const std::uint32_t> sites, Spin* state, Streams& streams, Draw& draw) const {
    const std::uint32_t* nbr = nbr_index_.data();
    const std::uint32_t* thr = thresholds_.data();
    const std::uint32_t* tbl = table_.data();
    for (const std::uint32_t i : sites) {
      const std::uint32_t k = draw(streams, i);
      const Spin current = state[i];
      const Spin ref = kFlip ? current : Spin{1};
      const std::uint32_t* nb = nbr + std::size_t{i} * kWidth;
      std::uint32_t idx = 0;
      for (std::size_t b = 0; b < kWidth; ++b) idx |= static_cast<std::uint32_t>(state[nb[b]] == ref) << b;
      const bool hit = k < thr[tbl[i] + idx];
      if constexpr (kFlip) {
        state[i] = hit ? static_cast<Spin>(-current) : current;
      } else {
        state[i] = hit ? Spin{1} : Spin{-1};
      }
    }
  }

  template <bool kFlip, class Streams, class Draw>
  void update_dispatch(std::span<const std::uint32_t> sites, Spin* state, Streams& streams, Draw& draw) const {
    switch (width_) {
      case 0: return update_fixed<kFlip, 0>(sites, state, streams, draw);
      case 1: return update_fixed<kFlip, 1>(sites, state, streams, draw);
      case 2: return update_fixed<kFlip, 2>(sites, state, streams, draw);
      case 3: return update_fixed<kFlip, 3>(sites, state, streams, draw);
      case 4: return update_fixed<kFlip, 4>(sites, state, streams, draw);
      case 5: return update_fixed<kFlip, 5>(sites, state, streams, draw);
      case 6: return update_fixed<kFlip, 6>(sites, state, streams, draw);
      case 7: return update_fixed<kFlip, 7>(sites, state, streams, draw);
      case 8: return update_fixed<kFlip, 8>(sites, state, streams, draw);
      default:
        for (const std::uint32_t i : sites) {
          state[i] = decide(i, state[i], [state](std::uint32_t j) { return state[j]; }, draw(streams, i));
        }
    }
  }

  template <class Read>
  Spin decide_direct(std::size_t i, Spin current, Read& read, std::uint32_t k) const {
    double field = 0.0;
    for (std::size_t b = nbr_offset_[i]; b < nbr_offset_[i + 1]; ++b) field += nbr_weight_[b] * read(nbr_flat_[b]);
    if (neuron_ == Neuron::flip_exponential) {
      return k < flip_threshold(current * field, beta_) ? static_cast<Spin>(-current) : current;
    }
    return k < up_threshold(field, beta_) ? Spin{1} : Spin{-1};
  }

  Neuron neuron_;
  double beta_;
  bool tabulated_ = false;
  std::size_t width_ = 0;
  // Unpadded adjacency (direct path for large degrees).
  std::vector<std::size_t> nbr_offset_;
  std::vector<std::uint32_t> nbr_flat_;
  std::vector<double> nbr_weight_;
  // Padded adjacency, width_ entries per p-bit, and per-p-bit table offsets.
  std::vector<std::uint32_t> nbr_index_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> thresholds_;
};

template <class Streams, class Draw>
void PbitUpdater::update_sites(std::span<const std::uint32_t> sites, Spin* state, Streams& streams,
                               Draw&& draw) const {
  if (!tabulated_) {
    for (const std::uint32_t i : sites) {
      state[i] = decide(i, state[i], [state](std::uint32_t j) { return state[j]; }, draw(streams, i));
    }
    return;
  }
  if (neuron_ == Neuron::flip_exponential) {
    update_dispatch<true>(sites, state, streams, draw);
  } else {
    update_dispatch<false>(sites, state, streams, draw);
  }
}

/// Chromatic (graph-colored) sweeps over a fixed network.
class ChromaticSampler {
 public:
  /// Throws std::invalid_argument when the coloring is not proper.
  ChromaticSampler(const IsingNetwork& network, const Coloring& coloring, double beta, Neuron neuron);

  /// One sweep: for each color phase, every p-bit of that color is updated
  /// in place from the current neighbor values.
  void sweep(std::span<Spin> state, RngBank& rng, PhaseOrder order = PhaseOrder::ascending) const;

  std::size_t num_colors() const noexcept { return classes_.size(); }
  std::size_t updates_per_sweep() const noexcept { return updater_.size(); }
  const std::vector<std::vector<std::uint32_t>>& classes() const noexcept { return classes_; }

 private:
  PbitUpdater updater_;
  std::vector<std::vector<std::uint32_t>> classes_;
};

/// Convenience single sweep; builds the lookup tables on every call.
void chromatic_sweep(const IsingNetwork& network, std::span<Spin> state, const Coloring& coloring, RngBank& rng,
                     const SweepConfig& config);

using Observable = std::function<double(std::span<const Spin>)>;

/// Observable time series of one run. Time is in sweeps (sync) or tau_n units (async).
struct RunTrace {
  std::vector<double> time;
  std::vector<double> values;
};

struct EnsembleOptions {
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  RngKind rng = RngKind::xoshiro128plus;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// R independent runs from a common initial state that can be extended in
/// steps. Run k draws only from the streams of run k, so results do not
/// depend on worker scheduling.
class SyncEnsemble {
 public:
  SyncEnsemble(const IsingNetwork& network, const Coloring& coloring, const SpinConfig& initial, SweepConfig config,
               EnsembleOptions options, Observable observable);

  /// Runs `sweeps` further sweeps on every run, recording every record_every sweeps.
  void advance(std::size_t sweeps);

  std::size_t sweeps_done() const noexcept { return done_; }
  const std::vector<RunTrace>& traces() const noexcept { return traces_; }
  const SpinConfig& state(std::size_t run) const { return states_.at(run); }
  const ChromaticSampler& sampler() const noexcept { return sampler_; }
  const SweepConfig& config() const noexcept { return config_; }

 private:
  ChromaticSampler sampler_;
  SweepConfig config_;
  EnsembleOptions options_;
  Observable observable_;
  std::vector<SpinConfig> states_;
  std::vector<RngBank> banks_;
  std::vector<RunTrace> traces_;
  std::size_t done_ = 0;
};

std::vector<RunTrace> run_ensemble(const IsingNetwork& network, const Coloring& coloring, const SpinConfig& initial,
                                   const SweepConfig& config, const EnsembleOptions& options,
                                   const Observable& observable);

}  // namespace pbit
