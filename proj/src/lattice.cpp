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

#include "pbit/lattice.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace pbit {
namespace {

// Inter-basis bond orientations on the triangular grid: (d_row, d_col) and the
// chain members joined by the bond (from the source basis to the target basis).
struct Orientation {
  int d_row;
  int d_col;
  std::size_t from_member;
  std::size_t to_member;
};

constexpr std::array<Orientation, 3> kChainOrientations{{
    {0, 1, 2, 0},
    {1, 0, 3, 1},
    {1, 1, 3, 0},
}};

// Six ordered (red, green, blue) patterns; consecutive entries rotate the
// plaquette pseudospin by +60 degrees and differ in exactly one sublattice.
constexpr std::array<std::array<Spin, 3>, 6> kOrientationPatterns{{
    {1, 1, -1},
    {-1, 1, -1},
    {-1, 1, 1},
    {-1, -1, 1},
    {1, -1, 1},
    {1, -1, -1},
}};

Sublattice grid_sublattice(std::size_t row, std::size_t col) {
  return static_cast<Sublattice>((row + col) % 3);
}

void add_inter_basis_bonds(LatticeGraph& g, bool chain_members) {
  for (std::size_t row = 0; row < g.rows; ++row) {
    for (std::size_t col = 0; col < g.cols; ++col) {
      for (const auto& o : kChainOrientations) {
        std::size_t row1 = row + static_cast<std::size_t>(o.d_row);
        std::size_t col1 = col + static_cast<std::size_t>(o.d_col);
        if (col1 >= g.cols) continue;
        if (row1 >= g.rows) {
          if (!g.periodic) continue;
          row1 %= g.rows;
        }
        const std::size_t b0 = row * g.cols + col;
        const std::size_t b1 = row1 * g.cols + col1;
        const std::size_t from = chain_members ? o.from_member : 0;
        const std::size_t to = chain_members ? o.to_member : 0;
        // Bonds running along an open edge sit in a single triangle and are halved.
        const bool open_edge = o.d_col == 0 && (col == 0 || col + 1 == g.cols);
        g.edges.push_back({b0 * g.spins_per_basis + from, b1 * g.spins_per_basis + to,
                           open_edge ? kBoundaryAfmCoupling : kAfmCoupling});
      }
    }
  }
}

void assign_labels(LatticeGraph& g) {
  g.num_spins = g.num_bases() * g.spins_per_basis;
  g.sublattice.resize(g.num_spins);
  g.basis.resize(g.num_spins);
  for (std::size_t b = 0; b < g.num_bases(); ++b) {
    const Sublattice s = grid_sublattice(g.basis_row(b), g.basis_col(b));
    for (std::size_t k = 0; k < g.spins_per_basis; ++k) {
      g.sublattice[b * g.spins_per_basis + k] = s;
      g.basis[b * g.spins_per_basis + k] = b;
    }
  }
}

}  // namespace

double LatticeGraph::energy(std::span<const Spin> state) const {
  if (state.size() != num_spins) throw std::invalid_argument("LatticeGraph::energy: state length mismatch");
  double e = 0.0;
  for (const auto& edge : edges) e += edge.coupling * state[edge.i] * state[edge.j];
  return kEnergySign * e;
}

std::vector<std::size_t> LatticeGraph::degrees() const {
  std::vector<std::size_t> deg(num_spins, 0);
  for (const auto& edge : edges) {
    ++deg[edge.i];
    ++deg[edge.j];
  }
  return deg;
}

LatticeGraph build_square_octagonal(int L) {
  if (L < 6) throw std::invalid_argument("build_square_octagonal: L must be >= 6 (got " + std::to_string(L) + ")");
  if (L % 3 != 0) {
    throw std::invalid_argument("build_square_octagonal: L must be a multiple of 3 so the sublattices close "
                                "around the periodic axis (got " + std::to_string(L) + ")");
  }
  LatticeGraph g;
  g.kind = LatticeKind::square_octagonal;
  g.rows = static_cast<std::size_t>(2 * L - 6);
  g.cols = static_cast<std::size_t>(L);
  g.spins_per_basis = 4;
  g.periodic = true;
  assign_labels(g);
  for (std::size_t b = 0; b < g.num_bases(); ++b) {
    for (std::size_t k = 0; k + 1 < g.spins_per_basis; ++k) {
      g.edges.push_back({b * 4 + k, b * 4 + k + 1, kFerroCoupling});
    }
  }
  add_inter_basis_bonds(g, true);
  g.plaquettes = enumerate_plaquettes(g);
  return g;
}

LatticeGraph build_triangular(int rows, int cols) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("build_triangular: rows and cols must be >= 2 (got " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ")");
  }
  if (rows >= 3 && rows % 3 != 0) {
    throw std::invalid_argument("build_triangular: periodic row count must be a multiple of 3 (got " +
                                std::to_string(rows) + ")");
  }
  LatticeGraph g;
  g.kind = LatticeKind::triangular;
  g.rows = static_cast<std::size_t>(rows);
  g.cols = static_cast<std::size_t>(cols);
  g.spins_per_basis = 1;
  g.periodic = rows >= 3;
  assign_labels(g);
  add_inter_basis_bonds(g, false);
  g.plaquettes = enumerate_plaquettes(g);
  return g;
}

LatticeGraph contract_bases(const LatticeGraph& lattice) {
  LatticeGraph base;
  base.kind = LatticeKind::triangular;
  base.rows = lattice.rows;
  base.cols = lattice.cols;
  base.spins_per_basis = 1;
  base.periodic = lattice.periodic;
  base.num_spins = lattice.num_bases();
  base.sublattice.resize(base.num_spins);
  base.basis.resize(base.num_spins);
  for (std::size_t b = 0; b < base.num_spins; ++b) {
    base.sublattice[b] = lattice.basis_sublattice(b);
    base.basis[b] = b;
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : lattice.edges) {
    std::size_t a = lattice.basis[e.i];
    std::size_t b = lattice.basis[e.j];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) base.edges.push_back({a, b, e.coupling});
  }
  base.plaquettes = lattice.plaquettes;
  return base;
}

std::vector<Plaquette> enumerate_plaquettes(const LatticeGraph& lattice) {
  const std::size_t nb = lattice.num_bases();
  std::vector<std::vector<std::size_t>> adj(nb);
  for (const auto& e : lattice.edges) {
    const std::size_t a = lattice.basis[e.i];
    const std::size_t b = lattice.basis[e.j];
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  std::vector<Plaquette> out;
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b : adj[a]) {
      if (b <= a) continue;
      for (std::size_t c : adj[b]) {
        if (c <= b || !std::binary_search(adj[a].begin(), adj[a].end(), c)) continue;
        std::array<std::size_t, 3> slot{nb, nb, nb};
        for (std::size_t x : {a, b, c}) slot[static_cast<std::size_t>(lattice.basis_sublattice(x))] = x;
        if (slot[0] == nb || slot[1] == nb || slot[2] == nb) continue;
        out.push_back({slot[0], slot[1], slot[2]});
      }
    }
  }
  return out;
}

SpinConfig construct_initial_state(const LatticeGraph& lattice, InitialState kind) {
  if (kind != InitialState::ordered && (!lattice.periodic || lattice.rows % 6 != 0)) {
    throw std::invalid_argument("construct_initial_state: wound states need a periodic axis whose length is a "
                                "multiple of 6 (rows = " + std::to_string(lattice.rows) + ")");
  }
  std::vector<Spin> values(lattice.num_spins);
  for (std::size_t s = 0; s < lattice.num_spins; ++s) {
    const std::size_t row = lattice.basis_row(lattice.basis[s]);
    const std::size_t block = row * 6 / lattice.rows;
    std::size_t orientation = 0;
    if (kind == InitialState::ccw) orientation = block % 6;
    if (kind == InitialState::cw) orientation = (6 - block % 6) % 6;
    values[s] = kOrientationPatterns[orientation][static_cast<std::size_t>(lattice.sublattice[s])];
  }
  return SpinConfig(std::move(values));
}

bool is_connected(const LatticeGraph& lattice) {
  if (lattice.num_spins == 0) return true;
  std::vector<std::vector<std::size_t>> adj(lattice.num_spins);
  for (const auto& e : lattice.edges) {
    if (e.i >= lattice.num_spins || e.j >= lattice.num_spins) return false;
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<bool> seen(lattice.num_spins, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t visited = 1;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        q.push(v);
      }
    }
  }
  return visited == lattice.num_spins;
}

std::string_view to_string(InitialState kind) {
  switch (kind) {
    case InitialState::ordered: return "ordered";
    case InitialState::ccw: return "ccw";
    case InitialState::cw: return "cw";
  }
  return "?";
}

InitialState parse_initial_state(std::string_view name) {
  if (name == "ordered") return InitialState::ordered;
  if (name == "ccw") return InitialState::ccw;
  if (name == "cw") return InitialState::cw;
  throw std::invalid_argument("unknown initial state '" + std::string(name) + "' (expected ordered, ccw or cw)");
}

std::string_view to_string(LatticeKind kind) {
  return kind == LatticeKind::square_octagonal ? "square_octagonal" : "triangular";
}

char sublattice_letter(Sublattice s) {
  switch (s) {
    case Sublattice::red: return 'r';
    case Sublattice::green: return 'g';
    case Sublattice::blue: return 'b';
  }
  return '?';
}

}  // namespace pbit
