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

#include <cmath>
#include <cstdint>
#include <vector>

#include "pbit/lattice.hpp"
#include "pbit/spin.hpp"
#include "pbit/trotter.hpp"

namespace testing {

// Brute-force Boltzmann weights exp(-beta * E) over all 2^n states, bit i = spin i.
template <class Energy>
std::vector<double> brute_force_distribution(std::size_t n, double beta, Energy energy) {
  std::vector<double> p(std::size_t{1} << n);
  std::vector<pbit::Spin> s(n);
  double z = 0.0;
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    for (std::size_t i = 0; i < n; ++i) s[i] = (idx >> i) & 1u ? 1 : -1;
    p[idx] = std::exp(-beta * energy(s));
    z += p[idx];
  }
  for (auto& v : p) v /= z;
  return p;
}

inline std::vector<pbit::Spin> spins_of(std::uint64_t idx, std::size_t n) {
  std::vector<pbit::Spin> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (idx >> i) & 1u ? 1 : -1;
  return s;
}

// A lattice with a single spin and no bonds; trotterizing it gives a bare replica ring.
inline pbit::LatticeGraph single_spin() {
  pbit::LatticeGraph g;
  g.rows = 1;
  g.cols = 1;
  g.num_spins = 1;
  g.sublattice = {pbit::Sublattice::red};
  g.basis = {0};
  return g;
}

}  // namespace testing
