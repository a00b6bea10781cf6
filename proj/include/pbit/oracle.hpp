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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pbit/coloring.hpp"
#include "pbit/engine_sync.hpp"
#include "pbit/trotter.hpp"

namespace pbit {

inline constexpr std::size_t kMaxExactSpins = 20;
inline constexpr std::size_t kMaxTransitionSpins = 12;

/// Bit i of the index is spin i; a set bit means +1.
std::uint64_t state_index(std::span<const Spin> state);
std::vector<Spin> state_from_index(std::uint64_t index, std::size_t n);

struct ExactDistribution {
  std::size_t num_spins = 0;
  double beta = 0.0;
  std::vector<double> probabilities;  // indexed by state_index
  std::vector<double> energies;       // H = -sum w m m
};

/// p(s) proportional to exp(-beta H(s)) by full enumeration (n <= 20).
ExactDistribution exact_boltzmann(const IsingNetwork& network, double beta);

enum class UpdateRule : std::uint8_t {
  sequential_gibbs,  // pick one p-bit uniformly at random and update it
  chromatic_sweep,   // one full sweep, color phases in ascending order
};

/// Row-stochastic one-step matrix, W(s, s') = P(s -> s'), n <= 12. The neuron
/// selects Gibbs (tanh_sign) or Metropolis (flip_exponential) site kernels.
/// Chromatic sweeps use `coloring`, or color_network-style coloring when null.
Eigen::MatrixXd transition_matrix(const IsingNetwork& network, double beta, UpdateRule rule,
                                  Neuron neuron = Neuron::tanh_sign, const Coloring* coloring = nullptr);

struct DecayMode {
  std::complex<double> amplitude;
  std::complex<double> eigenvalue;

  /// -ln|lambda| per step; infinite for lambda = 0.
  double rate() const;
};

/// <f>(k) = sum_j amplitude_j * eigenvalue_j^k.
struct DecaySeries {
  std::vector<DecayMode> modes;  // sorted by decreasing |eigenvalue|
  double condition = 0.0;        // of the eigenvector matrix
  bool defective = false;

  double evaluate(std::size_t step) const;
};

/// Spectral decomposition of the expectation of `observable` (one value per
/// state) after k steps of `matrix` started from basis state `initial`.
DecaySeries decay_series(const Eigen::MatrixXd& matrix, std::uint64_t initial, std::span<const double> observable);

/// Exact trajectory by repeated application of the matrix, steps 0..steps.
std::vector<double> propagate(const Eigen::MatrixXd& matrix, std::uint64_t initial, std::span<const double> observable,
                              std::size_t steps);

/// Observable table over all 2^n states.
std::vector<double> observable_table(std::size_t n, const std::function<double(std::span<const Spin>)>& f);

double tv_distance(std::span<const double> p, std::span<const double> q);

/// Normalized histogram of state indices over 2^n states.
std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts);

}  // namespace pbit
