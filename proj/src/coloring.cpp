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

#include "pbit/coloring.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace pbit {

std::vector<std::vector<std::uint32_t>> Coloring::classes() const {
  std::vector<std::vector<std::uint32_t>> out(num_colors);
  for (std::size_t v = 0; v < color.size(); ++v) out[color[v]].push_back(static_cast<std::uint32_t>(v));
  return out;
}

TwoColorResult two_color(const IsingNetwork& graph) {
  const std::size_t n = graph.size();
  constexpr std::uint8_t kUnset = 0xff;
  std::vector<std::uint8_t> color(n, kUnset);
  std::vector<std::size_t> parent(n, 0);
  std::vector<std::size_t> depth(n, 0);
  TwoColorResult result;

  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != kUnset) continue;
    color[root] = 0;
    parent[root] = root;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (const auto& nb : graph.neighbors(u)) {
        const std::size_t v = nb.index;
        if (color[v] == kUnset) {
          color[v] = static_cast<std::uint8_t>(1 - color[u]);
          parent[v] = u;
          depth[v] = depth[u] + 1;
          q.push(v);
        } else if (color[v] == color[u]) {
          // Walk both endpoints up to their common ancestor.
          std::vector<std::size_t> left{u};
          std::vector<std::size_t> right{v};
          std::size_t a = u;
          std::size_t b = v;
          while (depth[a] > depth[b]) left.push_back(a = parent[a]);
          while (depth[b] > depth[a]) right.push_back(b = parent[b]);
          while (a != b) {
            left.push_back(a = parent[a]);
            right.push_back(b = parent[b]);
          }
          right.pop_back();
          std::reverse(right.begin(), right.end());
          left.insert(left.end(), right.begin(), right.end());
          // left: u ... lca ... v, closed by the edge (v, u).
          result.odd_cycle = std::move(left);
          return result;
        }
      }
    }
  }
  Coloring c;
  c.color = std::move(color);
  c.num_colors = n == 0 ? 0 : (std::any_of(c.color.begin(), c.color.end(), [](auto x) { return x == 1; }) ? 2 : 1);
  result.coloring = std::move(c);
  return result;
}

Coloring greedy_color(const IsingNetwork& graph, std::span<const std::size_t> order) {
  const std::size_t n = graph.size();
  if (order.size() != n) throw std::invalid_argument("greedy_color: ordering must list every vertex once");
  constexpr std::uint8_t kUnset = 0xff;
  Coloring c;
  c.color.assign(n, kUnset);
  std::vector<bool> used;
  for (std::size_t v : order) {
    if (v >= n || c.color[v] != kUnset) throw std::invalid_argument("greedy_color: ordering is not a permutation");
    used.assign(graph.degree(v) + 2, false);
    for (const auto& nb : graph.neighbors(v)) {
      const auto k = c.color[nb.index];
      if (k != kUnset && k < used.size()) used[k] = true;
    }
    std::size_t k = 0;
    while (used[k]) ++k;
    if (k >= kUnset) throw std::runtime_error("greedy_color: more than 254 colors required");
    c.color[v] = static_cast<std::uint8_t>(k);
    c.num_colors = std::max(c.num_colors, k + 1);
  }
  return c;
}

std::vector<std::size_t> sublattice_order(const ReplicatedNetwork& network) {
  std::vector<std::size_t> order(network.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t n = network.num_spins();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return network.base.sublattice[a % n] < network.base.sublattice[b % n];
  });
  return order;
}

bool verify_coloring(const IsingNetwork& graph, const Coloring& coloring) {
  if (coloring.color.size() != graph.size()) return false;
  std::vector<bool> seen(coloring.num_colors, false);
  for (auto k : coloring.color) {
    if (k >= coloring.num_colors) return false;
    seen[k] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  for (const auto& e : graph.edges()) {
    if (coloring.color[e.i] == coloring.color[e.j]) return false;
  }
  return true;
}

Coloring color_network(const ReplicatedNetwork& network) {
  if (auto two = two_color(network.graph)) return std::move(*two.coloring);
  const auto order = sublattice_order(network);
  return greedy_color(network.graph, order);
}

}  // namespace pbit
