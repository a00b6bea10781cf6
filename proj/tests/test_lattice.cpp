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

#include <algorithm>
#include <complex>
#include <sstream>

#include "helpers.hpp"
#include "pbit/io.hpp"
#include "pbit/lattice.hpp"
#include "pbit/observables.hpp"

using namespace pbit;

TEST_SUITE("lattice") {
  TEST_CASE("square-octagonal counts follow the grid") {
    for (int L : {6, 9, 12, 15}) {
      CAPTURE(L);
      const auto g = build_square_octagonal(L);
      const std::size_t rows = 2 * L - 6, cols = L;
      CHECK(g.rows == rows);
      CHECK(g.cols == cols);
      CHECK(g.num_spins == static_cast<std::size_t>(4 * L * (2 * L - 6)));
      // 3 FM bonds per basis; AFM: right and diagonal (open in cols), down (periodic in rows).
      CHECK(g.edges.size() == 3 * rows * cols + 2 * rows * (cols - 1) + rows * cols);
      CHECK(g.plaquettes.size() == 2 * rows * (cols - 1));
      const auto deg = g.degrees();
      CHECK(*std::max_element(deg.begin(), deg.end()) <= 3);
      CHECK(is_connected(g));
    }
    CHECK(build_square_octagonal(6).num_spins == 144);
  }

  TEST_CASE("invalid sizes are rejected") {
    CHECK_THROWS_AS(build_square_octagonal(3), std::invalid_argument);
    CHECK_THROWS_AS(build_square_octagonal(7), std::invalid_argument);
    CHECK_THROWS_AS(build_triangular(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_triangular(4, 4), std::invalid_argument);
  }

  TEST_CASE("couplings and labels") {
    const auto g = build_square_octagonal(6);
    std::size_t fm = 0, afm = 0, half = 0;
    for (const auto& e : g.edges) {
      if (e.coupling == kFerroCoupling) {
        ++fm;
        CHECK(g.basis[e.i] == g.basis[e.j]);
      } else {
        CHECK(g.sublattice[e.i] != g.sublattice[e.j]);
        if (e.coupling == kBoundaryAfmCoupling) ++half;
        else ++afm;
      }
    }
    CHECK(fm == 3 * 36);
    // Vertical bonds along the two open edges.
    CHECK(half == 2 * g.rows);
    CHECK(afm + half == 96);
    for (const auto& p : g.plaquettes) {
      CHECK(g.sublattice[p.red_basis * 4] == Sublattice::red);
      CHECK(g.sublattice[p.green_basis * 4] == Sublattice::green);
      CHECK(g.sublattice[p.blue_basis * 4] == Sublattice::blue);
    }
  }

  TEST_CASE("small triangular strip") {
    const auto g = build_triangular(2, 2);
    CHECK(g.num_spins == 4);
    CHECK(g.edges.size() == 5);
    CHECK(g.plaquettes.size() == 2);
    CHECK_FALSE(g.periodic);
  }

  TEST_CASE("ordered state reaches the brute-force ground energy") {
    // 6x2 triangular: periodic rows, open columns with halved edge bonds.
    const auto g = build_triangular(6, 2);
    double best = 1e300;
    for (std::uint64_t idx = 0; idx < (1u << g.num_spins); ++idx) {
      const auto s = testing::spins_of(idx, g.num_spins);
      best = std::min(best, g.energy(s));
    }
    const auto ordered = construct_initial_state(g, InitialState::ordered);
    CHECK(g.energy(ordered.view()) == doctest::Approx(best).epsilon(1e-12));
  }

  TEST_CASE("initial states") {
    const auto g = build_square_octagonal(6);
    const auto ordered = construct_initial_state(g, InitialState::ordered);
    const auto ccw = construct_initial_state(g, InitialState::ccw);
    const auto cw = construct_initial_state(g, InitialState::cw);
    CHECK(std::abs(std::abs(config_pseudospin(g, ordered.view(), 1)) - 2.0 / std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(config_pseudospin(g, ccw.view(), 1)) < 1e-12);
    CHECK(std::abs(config_pseudospin(g, cw.view(), 1)) < 1e-12);
    CHECK(winding_number(g, ccw.view(), 1) == 1);
    CHECK(winding_number(g, cw.view(), 1) == -1);
    CHECK(winding_number(g, ordered.view(), 1) == 0);
    // Each basis is internally aligned.
    for (std::size_t b = 0; b < g.num_bases(); ++b)
      for (std::size_t k = 1; k < 4; ++k) CHECK(ccw[b * 4 + k] == ccw[b * 4]);
    CHECK(parse_initial_state("ccw") == InitialState::ccw);
    CHECK_THROWS(parse_initial_state("sideways"));
  }

  TEST_CASE("edge-list round trip") {
    const auto g = build_square_octagonal(9);
    std::stringstream ss;
    write_lattice(ss, g);
    const auto back = read_lattice(ss);
    CHECK(back.num_spins == g.num_spins);
    CHECK(back.edges.size() == g.edges.size());
    CHECK(back.plaquettes == g.plaquettes);
    CHECK(back.sublattice == g.sublattice);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      CHECK(back.edges[k].i == g.edges[k].i);
      CHECK(back.edges[k].j == g.edges[k].j);
      CHECK(back.edges[k].coupling == g.edges[k].coupling);
    }
    std::stringstream bad("kind hexagonal rows 1");
    CHECK_THROWS(read_lattice(bad));
  }
}
