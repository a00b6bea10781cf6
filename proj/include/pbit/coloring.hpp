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
#include <optional>
#include <span>
#include <vector>

#include "pbit/trotter.hpp"

namespace pbit {

/// Proper vertex coloring: no edge joins equal colors; colors 0..num_colors-1 all used.
struct Coloring {
  std::vector<std::uint8_t> color;
  std::size_t num_colors = 0;

  /// Vertices of each color in ascending index order.
  std::vector<std::vector<std::uint32_t>> classes() const;
};

/// Outcome of a two-coloring attempt; on failure `odd_cycle` is a closed walk
/// of odd length (listed without repeating the first vertex).
struct TwoColorResult {
  std::optional<Coloring> coloring;
  std::vector<std::size_t> odd_cycle;

  explicit operator bool() const noexcept { return coloring.has_value(); }
};

TwoColorResult two_color(const IsingNetwork& graph);

/// First-fit coloring in the given vertex order (every vertex must appear once).
Coloring greedy_color(const IsingNetwork& graph, std::span<const std::size_t> order);

/// Sublattice-then-index ordering of the p-bits of a replicated network.
std::vector<std::size_t> sublattice_order(const ReplicatedNetwork& network);

bool verify_coloring(const IsingNetwork& graph, const Coloring& coloring);

/// Two colors when the network is bipartite, sublattice-ordered greedy otherwise.
Coloring color_network(const ReplicatedNetwork& network);

}  // namespace pbit
