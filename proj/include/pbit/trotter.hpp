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
#include <span>
#include <vector>

#include "pbit/lattice.hpp"
#include "pbit/spin.hpp"

namespace pbit {

/// Coupling between two p-bits. Weights are alignment-favoring:
/// H = -sum_edges weight * m_i * m_j.
struct WeightedEdge {
  std::uint32_t i;
  std::uint32_t j;
  double weight;
};

struct Neighbor {
  std::uint32_t index;
  double weight;
};

/// Sparse symmetric p-bit coupling graph stored as compressed adjacency lists.
class IsingNetwork {
 public:
  IsingNetwork() = default;
  /// Parallel edges between the same pair are merged by summing their weights.
  IsingNetwork(std::size_t size, std::vector<WeightedEdge> edges);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  /// H = -sum_edges w m_i m_j, every edge counted once.
  double energy(std::span<const Spin> state) const;
  /// I_i = sum_j w_ij m_j.
  double local_field(std::span<const Spin> state, std::size_t i) const;

 private:
  std::vector<WeightedEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> neighbors_;
  std::size_t max_degree_ = 0;
};

/// Inter-replica coupling -(0.5/beta) ln tanh(beta*gamma/r), evaluated in
/// extended precision. Throws std::overflow_error when tanh underflows.
double replica_coupling(double beta, double gamma, int replicas);

/// Replicated (trotterized) p-bit network. P-bit (spin i, replica k) lives at
/// flat index k * base.num_spins + i.
struct ReplicatedNetwork {
  LatticeGraph base;
  int replicas = 1;
  double beta = 1.0;
  double gamma = 0.0;
  double j_perp = 0.0;
  IsingNetwork graph;

  std::size_t num_spins() const noexcept { return base.num_spins; }
  std::size_t size() const noexcept { return graph.size(); }
  std::size_t index(std::size_t spin, std::size_t replica) const noexcept {
    return replica * base.num_spins + spin;
  }
  /// Raw signed intra-replica coupling J_ij / r for base edge e.
  double j_parallel(std::size_t edge) const { return base.edges.at(edge).coupling / replicas; }
};

/// Copies the lattice into r replicas (intra-replica couplings J_ij / r) and
/// closes each spin's replica ring with j_perp. r must be even.
ReplicatedNetwork trotterize(const LatticeGraph& lattice, int replicas, double beta, double gamma);

/// A single classical replica of the lattice (no transverse field).
ReplicatedNetwork classical_network(const LatticeGraph& lattice, double beta);

/// H_Cl of a replicated state.
double classical_energy(const ReplicatedNetwork& network, const SpinConfig& state);

/// Converts a raw lattice coupling to the alignment-favoring network weight.
inline double network_weight(double coupling) { return -kEnergySign * coupling; }

}  // namespace pbit
