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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pbit/engine_sync.hpp"
#include "pbit/lattice.hpp"

namespace pbit {

/// Largest plaquette pseudospin magnitude, reached by any +-1 triple that is not all equal.
inline const double kMaxPseudospin = 2.0 / std::sqrt(3.0);

/// Mean of the member spins of `basis` over all replicas. The state uses the
/// replica-major layout (replica k, spin i) -> k * num_spins + i.
double basis_average(const LatticeGraph& lattice, std::span<const Spin> state, std::size_t basis, int replicas);

/// (m_red + w m_green + w^2 m_blue) / sqrt(3), w = exp(2 pi i / 3).
std::complex<double> plaquette_pseudospin(double m_red, double m_green, double m_blue);

/// Plaquette-averaged pseudospin of a (replicated) state. Throws when the
/// lattice has no plaquettes.
std::complex<double> config_pseudospin(const LatticeGraph& lattice, std::span<const Spin> state, int replicas);

/// Precomputed pseudospin evaluator for use as an engine observable. Calls are
/// thread-safe.
class OrderParameter {
 public:
  OrderParameter(const LatticeGraph& lattice, int replicas);

  std::complex<double> pseudospin(std::span<const Spin> state) const;
  /// |zeta_conf|.
  double operator()(std::span<const Spin> state) const { return std::abs(pseudospin(state)); }
  std::size_t state_size() const noexcept { return state_size_; }

 private:
  std::size_t state_size_;
  std::size_t num_bases_;
  std::vector<std::uint32_t> members_;  // per basis, all replicas, contiguous
  std::size_t per_basis_;
  std::vector<Plaquette> plaquettes_;
};

/// Pseudospin winding along the periodic axis: plaquettes are grouped by the
/// lower of their two rows, and the phase of each row's mean pseudospin is
/// accumulated around the cycle.
int winding_number(const LatticeGraph& lattice, std::span<const Spin> state, int replicas);

enum class CiMethod : std::uint8_t { normal, bootstrap };

/// Run-averaged |observable| with 95% confidence half-widths.
struct EnsembleSeries {
  std::vector<double> time;
  std::vector<double> mean;
  std::vector<double> ci_half_width;
  std::size_t runs = 0;

  std::size_t size() const noexcept { return time.size(); }
};

/// Takes |value| per run, then averages across runs at each time point.
/// Normal intervals use 1.96 * sd / sqrt(R); bootstrap intervals resample runs.
EnsembleSeries ensemble_average(std::span<const RunTrace> traces, CiMethod method = CiMethod::normal,
                                std::size_t bootstrap_samples = 1000, std::uint64_t seed = 1);

}  // namespace pbit
