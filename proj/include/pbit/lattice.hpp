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
#include <string_view>
#include <vector>

#include "pbit/spin.hpp"

namespace pbit {

/// Energy convention for lattice couplings: E = kEnergySign * sum_edges J m_i m_j.
/// With kEnergySign = +1 a negative J (the -1.8 intra-basis bonds) favors alignment
/// and a positive J (the AFM bonds) favors anti-alignment. This is the only sign
/// under which the ordered and wound states are degenerate ground states.
inline constexpr double kEnergySign = +1.0;

inline constexpr double kFerroCoupling = -1.8;
inline constexpr double kAfmCoupling = 1.0;
inline constexpr double kBoundaryAfmCoupling = 0.5;

enum class Sublattice : std::uint8_t { red = 0, green = 1, blue = 2 };

enum class LatticeKind : std::uint8_t { square_octagonal, triangular };

enum class InitialState : std::uint8_t { ordered, ccw, cw };

struct Edge {
  std::size_t i;
  std::size_t j;
  double coupling;  // raw signed J
};

/// One triangle of the base (contracted) lattice, one basis per sublattice.
struct Plaquette {
  std::size_t red_basis;
  std::size_t green_basis;
  std::size_t blue_basis;

  friend bool operator==(const Plaquette&, const Plaquette&) = default;
};

/// Qubit-level coupling graph.
///
/// Spins are grouped into basis cells laid out on a rows x cols grid. The row
/// index is the periodic axis (when `periodic` is set); the column index is
/// open. Basis (row, col) has index row * cols + col and owns spins
/// [basis * spins_per_basis, (basis + 1) * spins_per_basis).
struct LatticeGraph {
  LatticeKind kind = LatticeKind::triangular;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t spins_per_basis = 1;
  std::size_t num_spins = 0;
  bool periodic = false;
  std::vector<Edge> edges;
  std::vector<Sublattice> sublattice;  // per spin
  std::vector<std::size_t> basis;      // per spin
  std::vector<Plaquette> plaquettes;

  std::size_t num_bases() const noexcept { return rows * cols; }
  std::size_t basis_row(std::size_t b) const noexcept { return b / cols; }
  std::size_t basis_col(std::size_t b) const noexcept { return b % cols; }
  Sublattice basis_sublattice(std::size_t b) const noexcept {
    return sublattice[b * spins_per_basis];
  }

  /// E = kEnergySign * sum J m_i m_j over edges.
  double energy(std::span<const Spin> state) const;
  std::vector<std::size_t> degrees() const;
};

/// Square-octagonal cylinder: a (2L-6) x L triangular grid of 4-spin FM chains.
/// Requires L >= 6 and L divisible by 3 (so the three sublattices close around
/// the periodic axis).
LatticeGraph build_square_octagonal(int L);

/// Single-spin-per-site AFM triangular lattice, periodic along rows when
/// rows >= 3 (rows must then be a multiple of 3), open along columns. A
/// 2-row lattice is built as an open strip.
LatticeGraph build_triangular(int rows, int cols);

/// Graph on basis cells: one edge per pair of bases joined by inter-basis bonds.
/// The coupling is that of (one of) the joining bonds.
LatticeGraph contract_bases(const LatticeGraph& lattice);

/// All mutually adjacent red/green/blue basis triples, including triangles
/// closed through the periodic boundary.
std::vector<Plaquette> enumerate_plaquettes(const LatticeGraph& lattice);

/// Classical ground states: ordered (every plaquette pseudospin aligned) or
/// wound counter-clockwise / clockwise along the periodic axis.
SpinConfig construct_initial_state(const LatticeGraph& lattice, InitialState kind);

/// True when every edge endpoint is in range and no spin is isolated from the rest.
bool is_connected(const LatticeGraph& lattice);

std::string_view to_string(InitialState kind);
InitialState parse_initial_state(std::string_view name);
std::string_view to_string(LatticeKind kind);
char sublattice_letter(Sublattice s);

}  // namespace pbit
