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
#include "pbit/coloring.hpp"
#include "pbit/engine_sync.hpp"
#include "pbit/experiment.hpp"
#include "pbit/oracle.hpp"
#include "pbit/trotter.hpp"

using namespace pbit;

namespace {

// Plain chromatic sweep written against the public neuron functions.
void reference_sweep(const IsingNetwork& net, const Coloring& coloring, std::vector<Spin>& s, RngBank& bank,
                     double beta, Neuron neuron) {
  for (const auto& cls : coloring.classes()) {
    for (auto i : cls) {
      const double u = bank.uniform(i);
      if (neuron == Neuron::flip_exponential) {
        s[i] = neuron_flip_exp(s[i], synapse_delta_e(net, s, i), beta, u);
      } else {
        s[i] = neuron_tanh(synapse_input(net, s, i), beta, u);
      }
    }
  }
}

IsingNetwork random_network(std::size_t n, std::size_t degree, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> w(-1.5, 1.5);
  std::vector<WeightedEdge> edges;
  // Ring plus chords: bipartite when n is even and chords join opposite parity.
  for (std::uint32_t i = 0; i < n; ++i) edges.push_back({i, static_cast<std::uint32_t>((i + 1) % n), w(gen)});
  for (std::size_t k = 2; k < degree; ++k) {
    for (std::uint32_t i = 0; i < n; i += 2) {
      const auto j = static_cast<std::uint32_t>((i + 2 * k + 1) % n);
      if (j != i + 1 && (j + 1) % n != i) edges.push_back({i, j, w(gen)});
    }
  }
  return IsingNetwork(n, std::move(edges));
}

}  // namespace

TEST_SUITE("engine_sync") {
  TEST_CASE("synapse") {
    const IsingNetwork isolated(3, {{0, 1, 1.0}});
    std::vector<Spin> s{1, 1, -1};
    CHECK(synapse_delta_e(isolated, s, 2) == 0.0);
    CHECK(synapse_delta_e(isolated, s, 0) == 1.0);
    CHECK(synapse_delta_e(isolated, s, 1) == 1.0);
    CHECK_THROWS_AS(synapse_delta_e(isolated, s, 3), std::out_of_range);
    std::vector<Spin> wrong{1, 1};
    CHECK_THROWS(synapse_input(isolated, wrong, 0));
  }

  TEST_CASE("synapse matches the energy difference on a 5-neighbor network") {
    const auto net = trotterize(build_square_octagonal(6), 10, 1.0 / 0.244, 0.736).graph;
    std::mt19937 gen(3);
    std::vector<Spin> s(net.size());
    for (auto& v : s) v = gen() & 1u ? 1 : -1;
    for (std::size_t i = 0; i < net.size(); i += 37) {
      if (net.degree(i) != 5) continue;
      const double e0 = net.energy(s);
      s[i] = static_cast<Spin>(-s[i]);
      const double e1 = net.energy(s);
      s[i] = static_cast<Spin>(-s[i]);
      CHECK((e1 - e0) / 2.0 == doctest::Approx(synapse_delta_e(net, s, i)).epsilon(1e-12));
    }
  }

  TEST_CASE("neurons") {
    const double u_max = 1.0 - kUniformScale;
    CHECK(neuron_flip_exp(1, 0.0, 2.0, u_max) == -1);
    CHECK(neuron_flip_exp(-1, -3.0, 2.0, u_max) == 1);
    CHECK(neuron_flip_exp(1, 50.0, 2.0, 0.0) == -1);  // e^-200 > 0
    CHECK(neuron_flip_exp(1, 50.0, 2.0, kUniformScale) == 1);
    CHECK(neuron_tanh(1e3, 1.0, u_max) == 1);
    CHECK(neuron_tanh(-1e3, 1.0, 0.0) == -1);

    auto st = split(RngKind::xoshiro128plus, 11, 0);
    const int n = 1000000;
    int up = 0;
    for (int k = 0; k < n; ++k) up += neuron_tanh(0.5, 1.0, st.next_uniform()) == 1;
    const double p = (1.0 + std::tanh(0.5)) / 2.0;
    CHECK(std::abs(static_cast<double>(up) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
  }

  TEST_CASE("integer thresholds agree with the real-valued neurons") {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> field(-4.0, 4.0);
    for (int t = 0; t < 2000; ++t) {
      const double x = field(gen), beta = 0.3 + (t % 7) * 0.4;
      const auto ft = flip_threshold(x, beta);
      const auto clamp = [](std::uint32_t k) { return std::min(k, kUniformRange - 1); };
      for (std::uint32_t k : {clamp(ft > 0 ? ft - 1 : 0u), clamp(ft), clamp(ft + 1)}) {
        CHECK((k < ft) == (neuron_flip_exp(1, x, beta, k * kUniformScale) == -1));
      }
      const auto ut = up_threshold(x, beta);
      for (std::uint32_t k : {clamp(ut > 0 ? ut - 1 : 0u), clamp(ut)}) {
        CHECK((k < ut) == (neuron_tanh(x, beta, k * kUniformScale) == 1));
      }
    }
  }

  TEST_CASE("tabulated sweeps are bit-identical to the direct neuron evaluation") {
    for (Neuron neuron : {Neuron::flip_exponential, Neuron::tanh_sign}) {
      for (std::size_t degree : {2u, 3u, 5u}) {
        const auto net = random_network(64, degree, 7 + static_cast<std::uint32_t>(degree));
        auto two = two_color(net);
        REQUIRE(two);
        const Coloring coloring = *two.coloring;
        const double beta = 0.8;
        const ChromaticSampler sampler(net, coloring, beta, neuron);
        RngBank a(RngKind::xoshiro128plus, 5, 0, net.size()), b(RngKind::xoshiro128plus, 5, 0, net.size());
        std::vector<Spin> s1(net.size(), 1), s2(net.size(), 1);
        for (int sweep = 0; sweep < 100; ++sweep) {
          sampler.sweep(s1, a);
          reference_sweep(net, coloring, s2, b, beta, neuron);
        }
        CHECK(s1 == s2);
      }
    }
  }

  TEST_CASE("chromatic Gibbs sampling reproduces the Boltzmann distribution") {
    const auto eight = fixtures::eight_pbit(1.0, 1.0);
    const auto& net = eight.graph;
    const auto exact = exact_boltzmann(net, 1.0);
    const auto coloring = color_network(eight);
    std::vector<std::vector<double>> dists;
    for (Neuron neuron : {Neuron::tanh_sign, Neuron::flip_exponential}) {
      const ChromaticSampler sampler(net, coloring, 1.0, neuron);
      RngBank bank(RngKind::xoshiro128plus, 17, 0, net.size());
      std::vector<Spin> s(net.size(), 1);
      std::vector<std::uint64_t> counts(exact.probabilities.size());
      for (int k = 0; k < 300000; ++k) {
        sampler.sweep(s, bank);
        ++counts[state_index(s)];
      }
      dists.push_back(empirical_distribution(counts));
      CHECK(tv_distance(dists.back(), exact.probabilities) < 0.02);
    }
    CHECK(tv_distance(dists[0], dists[1]) < 0.02);
  }

  TEST_CASE("improper colorings and bad configs are rejected") {
    const IsingNetwork net(2, {{0, 1, 1.0}});
    Coloring one;
    one.color = {0, 0};
    one.num_colors = 1;
    CHECK_THROWS_AS(ChromaticSampler(net, one, 1.0, Neuron::tanh_sign), std::invalid_argument);
    SweepConfig c;
    c.beta = 0.0;
    CHECK_THROWS(c.validate());
    c.beta = 1.0;
    c.record_every = 0;
    CHECK_THROWS(c.validate());
    CHECK(parse_neuron("metropolis") == Neuron::flip_exponential);
    CHECK_THROWS(parse_neuron("sigmoid"));
  }

  TEST_CASE("ensembles do not depend on the worker count") {
    const auto net = trotterize(build_square_octagonal(6), 4, 2.0, 0.5);
    const auto coloring = color_network(net);
    const SpinConfig init(net.size(), 1);
    SweepConfig cfg;
    cfg.sweeps = 20;
    cfg.record_every = 5;
    const Observable mag = [](std::span<const Spin> s) {
      double m = 0;
      for (auto v : s) m += v;
      return m / static_cast<double>(s.size());
    };
    const auto one = run_ensemble(net.graph, coloring, init, cfg, {6, 3, RngKind::lfsr32, 1}, mag);
    const auto many = run_ensemble(net.graph, coloring, init, cfg, {6, 3, RngKind::lfsr32, 4}, mag);
    REQUIRE(one.size() == 6);
    for (std::size_t r = 0; r < one.size(); ++r) {
      CHECK(one[r].time == many[r].time);
      CHECK(one[r].values == many[r].values);
    }
    CHECK(one[0].time == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(one[0].values != one[1].values);
  }
}
