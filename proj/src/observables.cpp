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

#include "pbit/observables.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace pbit {
namespace {

const std::complex<double> kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
const std::complex<double> kOmega2 = std::polar(1.0, 4.0 * std::numbers::pi / 3.0);

void check_state(const LatticeGraph& lattice, std::span<const Spin> state, int replicas) {
  if (replicas < 1) throw std::invalid_argument("replica count must be >= 1");
  if (state.size() != lattice.num_spins * static_cast<std::size_t>(replicas)) {
    throw std::invalid_argument("state length " + std::to_string(state.size()) + " does not match " +
                                std::to_string(lattice.num_spins) + " spins x " + std::to_string(replicas) +
                                " replicas");
  }
}

}  // namespace

double basis_average(const LatticeGraph& lattice, std::span<const Spin> state, std::size_t basis, int replicas) {
  check_state(lattice, state, replicas);
  if (basis >= lattice.num_bases()) throw std::out_of_range("basis index out of range");
  const std::size_t per = lattice.spins_per_basis;
  const std::size_t first = basis * per;
  for (std::size_t k = 0; k < per; ++k) {
    if (lattice.basis[first + k] != basis) throw std::invalid_argument("malformed basis: members are not contiguous");
  }
  long sum = 0;
  for (int rep = 0; rep < replicas; ++rep) {
    const std::size_t offset = static_cast<std::size_t>(rep) * lattice.num_spins + first;
    for (std::size_t k = 0; k < per; ++k) sum += state[offset + k];
  }
  return static_cast<double>(sum) / static_cast<double>(per * static_cast<std::size_t>(replicas));
}

std::complex<double> plaquette_pseudospin(double m_red, double m_green, double m_blue) {
  return (m_red + kOmega * m_green + kOmega2 * m_blue) / std::sqrt(3.0);
}

std::complex<double> config_pseudospin(const LatticeGraph& lattice, std::span<const Spin> state, int replicas) {
  check_state(lattice, state, replicas);
  return OrderParameter(lattice, replicas).pseudospin(state);
}

OrderParameter::OrderParameter(const LatticeGraph& lattice, int replicas)
    : state_size_(lattice.num_spins * static_cast<std::size_t>(std::max(replicas, 1))),
      num_bases_(lattice.num_bases()),
      per_basis_(lattice.spins_per_basis * static_cast<std::size_t>(std::max(replicas, 1))),
      plaquettes_(lattice.plaquettes) {
  if (replicas < 1) throw std::invalid_argument("OrderParameter: replica count must be >= 1");
  if (plaquettes_.empty()) throw std::invalid_argument("OrderParameter: lattice has no plaquettes");
  members_.reserve(state_size_);
  for (std::size_t b = 0; b < num_bases_; ++b) {
    for (int rep = 0; rep < replicas; ++rep) {
      for (std::size_t k = 0; k < lattice.spins_per_basis; ++k) {
        members_.push_back(static_cast<std::uint32_t>(static_cast<std::size_t>(rep) * lattice.num_spins +
                                                      b * lattice.spins_per_basis + k));
      }
    }
  }
}

std::complex<double> OrderParameter::pseudospin(std::span<const Spin> state) const {
  if (state.size() != state_size_) throw std::invalid_argument("OrderParameter: state length mismatch");
  std::vector<double> m(num_bases_);
  const double scale = 1.0 / static_cast<double>(per_basis_);
  for (std::size_t b = 0; b < num_bases_; ++b) {
    int sum = 0;
    const std::uint32_t* idx = members_.data() + b * per_basis_;
    for (std::size_t k = 0; k < per_basis_; ++k) sum += state[idx[k]];
    m[b] = sum * scale;
  }
  // Accumulate the three sublattice components separately, then combine once.
  double red = 0.0;
  double green = 0.0;
  double blue = 0.0;
  for (const auto& p : plaquettes_) {
    red += m[p.red_basis];
    green += m[p.green_basis];
    blue += m[p.blue_basis];
  }
  const double inv = 1.0 / static_cast<double>(plaquettes_.size());
  return plaquette_pseudospin(red * inv, green * inv, blue * inv);
}

int winding_number(const LatticeGraph& lattice, std::span<const Spin> state, int replicas) {
  check_state(lattice, state, replicas);
  if (!lattice.periodic) throw std::invalid_argument("winding_number: lattice has no periodic axis");
  const std::size_t rows = lattice.rows;
  std::vector<double> m(lattice.num_bases());
  for (std::size_t b = 0; b < m.size(); ++b) m[b] = basis_average(lattice, state, b, replicas);

  std::vector<std::complex<double>> row_sum(rows);
  for (const auto& p : lattice.plaquettes) {
    const std::size_t r0 = lattice.basis_row(p.red_basis);
    const std::size_t r1 = lattice.basis_row(p.green_basis);
    const std::size_t r2 = lattice.basis_row(p.blue_basis);
    // Anchor: the plaquette row whose successor row is also present.
    std::size_t anchor = r0;
    for (std::size_t r : {r0, r1, r2}) {
      const std::size_t next = (r + 1) % rows;
      if (next == r0 || next == r1 || next == r2) anchor = r;
    }
    row_sum[anchor] += plaquette_pseudospin(m[p.red_basis], m[p.green_basis], m[p.blue_basis]);
  }
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto a = row_sum[r];
    const auto b = row_sum[(r + 1) % rows];
    if (std::abs(a) < 1e-12 || std::abs(b) < 1e-12) return 0;  // phase undefined
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

EnsembleSeries ensemble_average(std::span<const RunTrace> traces, CiMethod method, std::size_t bootstrap_samples,
                                std::uint64_t seed) {
  if (traces.empty()) throw std::invalid_argument("ensemble_average: no traces");
  const auto& grid = traces.front().time;
  for (const auto& t : traces) {
    if (t.time != grid || t.values.size() != grid.size()) {
      throw std::invalid_argument("ensemble_average: traces do not share a time grid");
    }
  }
  const std::size_t runs = traces.size();
  const std::size_t points = grid.size();
  EnsembleSeries out;
  out.time = grid;
  out.runs = runs;
  out.mean.assign(points, 0.0);
  out.ci_half_width.assign(points, 0.0);

  std::vector<double> column(runs);
  std::mt19937_64 engine(seed);
  std::uniform_int_distribution<std::size_t> pick(0, runs - 1);
  for (std::size_t p = 0; p < points; ++p) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += column[r] = std::abs(traces[r].values[p]);
    const double mean = sum / static_cast<double>(runs);
    out.mean[p] = mean;
    if (runs < 2) continue;
    if (method == CiMethod::normal) {
      double ss = 0.0;
      for (double v : column) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(runs - 1));
      out.ci_half_width[p] = 1.96 * sd / std::sqrt(static_cast<double>(runs));
    } else {
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t b = 0; b < bootstrap_samples; ++b) {
        double acc = 0.0;
        for (std::size_t r = 0; r < runs; ++r) acc += column[pick(engine)];
        acc /= static_cast<double>(runs);
        s1 += acc;
        s2 += acc * acc;
      }
      const double bm = s1 / static_cast<double>(bootstrap_samples);
      const double var = std::max(0.0, s2 / static_cast<double>(bootstrap_samples) - bm * bm);
      out.ci_half_width[p] = 1.96 * std::sqrt(var);
    }
  }
  return out;
}

}  // namespace pbit
