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

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "pbit/engine_sync.hpp"
#include "pbit/trotter.hpp"

using namespace pbit;

namespace {

long double jperp_reference(long double beta, long double gamma, int r) {
  return -0.5L / beta * std::log(std::tanh(beta * gamma / r));
}

// Transverse-field qubit with a longitudinal test field h: <sz> = h/w tanh(beta w).
double exact_sz(double beta, double gamma, double h) {
  const double w = std::hypot(h, gamma);
  return h / w * std::tanh(beta * w);
}

double trotter_sz(double beta, double gamma, double h, int r) {
  const auto net = trotterize(testing::single_spin(), r, beta, gamma);
  double num = 0.0, z = 0.0;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << r); ++idx) {
    const auto s = testing::spins_of(idx, r);
    double m = 0.0;
    for (auto v : s) m += v;
    const double w = std::exp(-beta * (net.graph.energy(s) - h / r * m));
    num += w * m / r;
    z += w;
  }
  return num / z;
}

}  // namespace

TEST_SUITE("trotter") {
  TEST_CASE("replica coupling against extended precision") {
    const double j = replica_coupling(1.0 / 0.244, 0.736, 10);
    const long double ref = jperp_reference(1.0L / 0.244L, 0.736L, 10);
    CHECK(std::abs(j - static_cast<double>(ref)) / static_cast<double>(ref) < 1e-12);
    CHECK(j == doctest::Approx(0.149843).epsilon(1e-5));
  }

  TEST_CASE("replica coupling identities and errors") {
    const double beta = 1.3;
    const int r = 8;
    const double gamma = r * std::atanh(std::exp(-2.0 * beta)) / beta;
    CHECK(replica_coupling(beta, gamma, r) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (int rr = 1; rr <= 64; rr *= 2) {
      const double v = replica_coupling(2.0, 0.5, rr);
      CHECK(v > prev);
      prev = v;
    }
    CHECK(replica_coupling(2.0, 1e-8, 10) > replica_coupling(2.0, 1e-4, 10));
    CHECK_THROWS_AS(replica_coupling(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(replica_coupling(1.0, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(replica_coupling(1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(replica_coupling(5e-324, 5e-324, 10), std::overflow_error);
  }

  TEST_CASE("trotterized square-octagonal network") {
    const auto lat = build_square_octagonal(6);
    const auto net = trotterize(lat, 10, 1.0 / 0.244, 0.736);
    CHECK(net.size() == 1440);
    CHECK(net.graph.max_degree() == 5);
    CHECK(net.j_parallel(0) == doctest::Approx(kFerroCoupling / 10));
    CHECK(net.graph.edges().size() == 10 * lat.edges.size() + 10 * lat.num_spins);
    CHECK_THROWS_AS(trotterize(lat, 3, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(trotterize(lat, 0, 1.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("classical energy: two-spin toy with r = 2 over all states") {
    LatticeGraph g = testing::single_spin();
    g.cols = 2;
    g.num_spins = 2;
    g.sublattice = {Sublattice::red, Sublattice::green};
    g.basis = {0, 1};
    g.edges = {{0, 1, 1.0}};
    const double beta = 1.5, gamma = 0.7;
    const auto net = trotterize(g, 2, beta, gamma);
    const double jp = replica_coupling(beta, gamma, 2);
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
      const auto s = testing::spins_of(idx, 4);  // a0 b0 a1 b1
      // E = +sum (J/r) m m within replicas; the two ring bonds of each spin coincide.
      const double hand = 0.5 * (s[0] * s[1] + s[2] * s[3]) - 2.0 * jp * (s[0] * s[2] + s[1] * s[3]);
      CHECK(classical_energy(net, SpinConfig(s)) == doctest::Approx(hand).epsilon(1e-14));
    }
    CHECK_THROWS(classical_energy(net, SpinConfig(3, 1)));
  }

  TEST_CASE("flipping one p-bit changes the energy by twice its synapse value") {
    const auto net = trotterize(build_square_octagonal(6), 10, 1.0 / 0.244, 0.736);
    std::mt19937 gen(5);
    std::vector<Spin> s(net.size());
    for (auto& v : s) v = gen() & 1u ? 1 : -1;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t i = gen() % s.size();
      const double before = classical_energy(net, SpinConfig(s));
      const double de = synapse_delta_e(net.graph, s, i);
      s[i] = static_cast<Spin>(-s[i]);
      CHECK(classical_energy(net, SpinConfig(s)) - before == doctest::Approx(2.0 * de).epsilon(1e-9));
    }
  }

  TEST_CASE("single-qubit Trotter error shrinks with r") {
    const double beta = 2.0, gamma = 1.0, h = 0.5;
    const double exact = exact_sz(beta, gamma, h);
    double prev = 1e300;
    for (int r : {2, 4, 8, 16}) {
      const double err = std::abs(trotter_sz(beta, gamma, h, r) - exact);
      CAPTURE(r);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-2);
    // No field: the ring average vanishes by symmetry.
    CHECK(std::abs(trotter_sz(beta, gamma, 0.0, 8)) < 1e-14);
  }
}
