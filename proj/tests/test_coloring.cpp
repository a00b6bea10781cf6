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

#include <doctest.h>

#include <numeric>

#include "pbit/coloring.hpp"
#include "pbit/trotter.hpp"

using namespace pbit;

namespace {

// Independent replication with an arbitrary ring length (trotterize insists on even r).
IsingNetwork ring_replicate(const LatticeGraph& lat, int r) {
  const auto n = static_cast<std::uint32_t>(lat.num_spins);
  std::vector<WeightedEdge> edges;
  for (int k = 0; k < r; ++k) {
    const std::uint32_t off = static_cast<std::uint32_t>(k) * n;
    for (const auto& e : lat.edges)
      edges.push_back({off + static_cast<std::uint32_t>(e.i), off + static_cast<std::uint32_t>(e.j), 1.0});
    const std::uint32_t next = static_cast<std::uint32_t>((k + 1) % r) * n;
    for (std::uint32_t i = 0; i < n; ++i) edges.push_back({off + i, next + i, 1.0});
  }
  return IsingNetwork(n * r, std::move(edges));
}

IsingNetwork complete(std::uint32_t n) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  return IsingNetwork(n, std::move(edges));
}

std::vector<std::size_t> natural(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), std::size_t{0});
  return o;
}

}  // namespace

TEST_SUITE("coloring") {
  TEST_CASE("even replica counts stay bipartite") {
    for (int L : {6, 9, 12, 15}) {
      for (int r : {2, 4, 10}) {
        CAPTURE(L);
        CAPTURE(r);
        const auto net = trotterize(build_square_octagonal(L), r, 2.0, 0.5);
        const auto res = two_color(net.graph);
        REQUIRE(res);
        CHECK(res.coloring->num_colors == 2);
        CHECK(verify_coloring(net.graph, *res.coloring));
      }
    }
  }

  TEST_CASE("odd replica rings are not bipartite") {
    for (int r : {3, 5, 9}) {
      const auto g = ring_replicate(build_square_octagonal(6), r);
      const auto res = two_color(g);
      CHECK_FALSE(res);
      CHECK(res.odd_cycle.size() % 2 == 1);
    }
  }

  TEST_CASE("small graphs") {
    const auto tri = complete(3);
    const auto res = two_color(tri);
    CHECK_FALSE(res);
    CHECK(res.odd_cycle.size() == 3);

    const IsingNetwork path(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    const auto p = two_color(path);
    REQUIRE(p);
    CHECK(p.coloring->color == std::vector<std::uint8_t>{0, 1, 0, 1});

    CHECK(greedy_color(IsingNetwork(5, {}), natural(5)).num_colors == 1);
    CHECK(greedy_color(complete(4), natural(4)).num_colors == 4);
  }

  TEST_CASE("triangular lattice takes three colors") {
    const auto net = classical_network(build_triangular(6, 6), 2.0);
    const auto c = color_network(net);
    CHECK(c.num_colors == 3);
    CHECK(verify_coloring(net.graph, c));
  }

  TEST_CASE("verification catches bad colorings") {
    const auto net = trotterize(build_square_octagonal(6), 10, 2.0, 0.5);
    auto c = color_network(net);
    CHECK(verify_coloring(net.graph, c));
    auto corrupt = c;
    const auto& e = net.graph.edges().front();
    corrupt.color[e.j] = corrupt.color[e.i];
    CHECK_FALSE(verify_coloring(net.graph, corrupt));
    auto unused = c;
    unused.num_colors = 3;
    CHECK_FALSE(verify_coloring(net.graph, unused));
    auto short_list = c;
    short_list.color.pop_back();
    CHECK_FALSE(verify_coloring(net.graph, short_list));
  }
}
