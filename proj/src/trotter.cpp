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

#include "pbit/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace pbit {

IsingNetwork::IsingNetwork(std::size_t size, std::vector<WeightedEdge> edges) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  for (const auto& e : edges) {
    if (e.i >= size || e.j >= size) throw std::invalid_argument("IsingNetwork: edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("IsingNetwork: self-coupling is not allowed");
    auto key = std::minmax(e.i, e.j);
    auto [it, inserted] = merged.try_emplace({key.first, key.second}, 0.0);
    if (inserted) order.push_back(it->first);
    it->second += e.weight;
  }
  edges_.reserve(order.size());
  for (const auto& key : order) edges_.push_back({key.first, key.second, merged[key]});

  std::vector<std::size_t> degree(size, 0);
  for (const auto& e : edges_) {
    ++degree[e.i];
    ++degree[e.j];
  }
  offsets_.assign(size + 1, 0);
  for (std::size_t i = 0; i < size; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  neighbors_.resize(offsets_[size]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    neighbors_[fill[e.i]++] = {e.j, e.weight};
    neighbors_[fill[e.j]++] = {e.i, e.weight};
  }
  for (std::size_t i = 0; i < size; ++i) {
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    max_degree_ = std::max(max_degree_, degree[i]);
  }
}

double IsingNetwork::energy(std::span<const Spin> state) const {
  if (state.size() != size()) throw std::invalid_argument("IsingNetwork::energy: state length mismatch");
  double e = 0.0;
  for (const auto& edge : edges_) e -= edge.weight * state[edge.i] * state[edge.j];
  return e;
}

double IsingNetwork::local_field(std::span<const Spin> state, std::size_t i) const {
  double field = 0.0;
  for (const auto& nb : neighbors(i)) field += nb.weight * state[nb.index];
  return field;
}

double replica_coupling(double beta, double gamma, int replicas) {
  if (!(beta > 0.0)) throw std::invalid_argument("replica_coupling: beta must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("replica_coupling: gamma must be > 0");
  if (replicas < 1) throw std::invalid_argument("replica_coupling: replica count must be >= 1");
  const long double x = static_cast<long double>(beta) * static_cast<long double>(gamma) / replicas;
  long double log_tanh;
  if (x > 1.0L) {
    // ln tanh x = log1p(-q) - log1p(q), q = exp(-2x); stays accurate as tanh x -> 1.
    const long double q = std::exp(-2.0L * x);
    log_tanh = std::log1p(-q) - std::log1p(q);
  } else {
    const long double t = std::tanh(x);
    if (t == 0.0L) throw std::overflow_error("replica_coupling: tanh(beta*gamma/r) underflows to zero");
    log_tanh = std::log(t);
  }
  const long double j = -(0.5L / static_cast<long double>(beta)) * log_tanh;
  if (!std::isfinite(static_cast<double>(j))) throw std::overflow_error("replica_coupling: coupling overflows");
  return static_cast<double>(j);
}

ReplicatedNetwork trotterize(const LatticeGraph& lattice, int replicas, double beta, double gamma) {
  if (replicas < 2 || replicas % 2 != 0) {
    throw std::invalid_argument("trotterize: replica count must be even and >= 2 (got " + std::to_string(replicas) +
                                "); an odd replica ring breaks the two-coloring of the p-bit network");
  }
  ReplicatedNetwork net;
  net.base = lattice;
  net.replicas = replicas;
  net.beta = beta;
  net.gamma = gamma;
  net.j_perp = replica_coupling(beta, gamma, replicas);

  const std::size_t n = lattice.num_spins;
  const auto r = static_cast<std::size_t>(replicas);
  std::vector<WeightedEdge> edges;
  edges.reserve(r * (lattice.edges.size() + n));
  for (std::size_t k = 0; k < r; ++k) {
    for (const auto& e : lattice.edges) {
      edges.push_back({static_cast<std::uint32_t>(k * n + e.i), static_cast<std::uint32_t>(k * n + e.j),
                       network_weight(e.coupling) / replicas});
    }
  }
  // Replica ring m_{i,k} m_{i,k+1}, closed periodically. For r = 2 both ring
  // terms join the same pair and are merged into one edge of weight 2 j_perp.
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t next = (k + 1) % r;
    for (std::size_t i = 0; i < n; ++i) {
      edges.push_back({static_cast<std::uint32_t>(k * n + i), static_cast<std::uint32_t>(next * n + i), net.j_perp});
    }
  }
  net.graph = IsingNetwork(n * r, std::move(edges));
  return net;
}

ReplicatedNetwork classical_network(const LatticeGraph& lattice, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("classical_network: beta must be > 0");
  ReplicatedNetwork net;
  net.base = lattice;
  net.replicas = 1;
  net.beta = beta;
  std::vector<WeightedEdge> edges;
  edges.reserve(lattice.edges.size());
  for (const auto& e : lattice.edges) {
    edges.push_back({static_cast<std::uint32_t>(e.i), static_cast<std::uint32_t>(e.j), network_weight(e.coupling)});
  }
  net.graph = IsingNetwork(lattice.num_spins, std::move(edges));
  return net;
}

double classical_energy(const ReplicatedNetwork& network, const SpinConfig& state) {
  if (state.size() != network.size()) {
    throw std::invalid_argument("classical_energy: state has " + std::to_string(state.size()) +
                                " entries, network has " + std::to_string(network.size()) + " p-bits");
  }
  return network.graph.energy(state.view());
}

}  // namespace pbit
