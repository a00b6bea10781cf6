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

#include "pbit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace pbit {
namespace {

using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Probability that site i ends in `target` given state s (bits), one site kernel.
double site_probability(const IsingNetwork& network, double beta, Neuron neuron, std::uint64_t s, std::size_t i,
                        bool target_up) {
  double field = 0.0;
  for (const auto& nb : network.neighbors(i)) field += nb.weight * ((s >> nb.index) & 1u ? 1.0 : -1.0);
  const bool up = (s >> i) & 1u;
  if (neuron == Neuron::tanh_sign) {
    const double p_up = 0.5 * (1.0 + std::tanh(beta * field));
    return target_up ? p_up : 1.0 - p_up;
  }
  const double delta_e = (up ? 1.0 : -1.0) * field;
  const double p_flip = std::min(1.0, std::exp(-2.0 * beta * delta_e));
  return target_up == up ? 1.0 - p_flip : p_flip;
}

Sparse phase_kernel(const IsingNetwork& network, double beta, Neuron neuron, const std::vector<std::uint32_t>& sites) {
  const std::size_t n = network.size();
  const std::uint64_t states = std::uint64_t{1} << n;
  std::uint64_t mask = 0;
  for (auto i : sites) mask |= std::uint64_t{1} << i;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(states << sites.size());
  std::vector<double> p_up(sites.size());
  std::vector<double> p_down(sites.size());
  for (std::uint64_t s = 0; s < states; ++s) {
    for (std::size_t k = 0; k < sites.size(); ++k) {
      p_up[k] = site_probability(network, beta, neuron, s, sites[k], true);
      p_down[k] = site_probability(network, beta, neuron, s, sites[k], false);
    }
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << sites.size()); ++sub) {
      std::uint64_t target = s & ~mask;
      double prob = 1.0;
      for (std::size_t k = 0; k < sites.size(); ++k) {
        if ((sub >> k) & 1u) {
          target |= std::uint64_t{1} << sites[k];
          prob *= p_up[k];
        } else {
          prob *= p_down[k];
        }
      }
      if (prob != 0.0) trips.emplace_back(static_cast<int>(s), static_cast<int>(target), prob);
    }
  }
  Sparse m(static_cast<Eigen::Index>(states), static_cast<Eigen::Index>(states));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

std::uint64_t state_index(std::span<const Spin> state) {
  if (state.size() > 64) throw std::invalid_argument("state_index: more than 64 spins");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] > 0) idx |= std::uint64_t{1} << i;
  }
  return idx;
}

std::vector<Spin> state_from_index(std::uint64_t index, std::size_t n) {
  std::vector<Spin> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (index >> i) & 1u ? Spin{1} : Spin{-1};
  return out;
}

ExactDistribution exact_boltzmann(const IsingNetwork& network, double beta) {
  const std::size_t n = network.size();
  if (n > kMaxExactSpins) {
    throw std::invalid_argument("exact_boltzmann: " + std::to_string(n) + " p-bits exceed the cap of " +
                                std::to_string(kMaxExactSpins));
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("exact_boltzmann: beta must be nonnegative");
  ExactDistribution out;
  out.num_spins = n;
  out.beta = beta;
  const std::uint64_t states = std::uint64_t{1} << n;
  out.energies.resize(states);
  out.probabilities.resize(states);
  std::vector<Spin> s(n);
  double min_energy = std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    for (std::size_t i = 0; i < n; ++i) s[i] = (idx >> i) & 1u ? Spin{1} : Spin{-1};
    out.energies[idx] = network.energy(s);
    min_energy = std::min(min_energy, out.energies[idx]);
  }
  double z = 0.0;
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    out.probabilities[idx] = std::exp(-beta * (out.energies[idx] - min_energy));
    z += out.probabilities[idx];
  }
  for (auto& p : out.probabilities) p /= z;
  return out;
}

Eigen::MatrixXd transition_matrix(const IsingNetwork& network, double beta, UpdateRule rule, Neuron neuron,
                                  const Coloring* coloring) {
  const std::size_t n = network.size();
  if (n > kMaxTransitionSpins) {
    throw std::invalid_argument("transition_matrix: " + std::to_string(n) + " p-bits exceed the cap of " +
                                std::to_string(kMaxTransitionSpins));
  }
  const auto states = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  if (rule == UpdateRule::sequential_gibbs) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(states, states);
    if (n == 0) return Eigen::MatrixXd::Ones(1, 1);
    const double pick = 1.0 / static_cast<double>(n);
    for (Eigen::Index s = 0; s < states; ++s) {
      const auto su = static_cast<std::uint64_t>(s);
      for (std::size_t i = 0; i < n; ++i) {
        const bool up = (su >> i) & 1u;
        const auto flipped = static_cast<Eigen::Index>(su ^ (std::uint64_t{1} << i));
        w(s, s) += pick * site_probability(network, beta, neuron, su, i, up);
        w(s, flipped) += pick * site_probability(network, beta, neuron, su, i, !up);
      }
    }
    return w;
  }

  Coloring local;
  if (coloring == nullptr) {
    if (auto two = two_color(network)) {
      local = std::move(*two.coloring);
    } else {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      local = greedy_color(network, order);
    }
    coloring = &local;
  }
  if (!verify_coloring(network, *coloring)) throw std::invalid_argument("transition_matrix: coloring is not proper");
  Sparse product;
  bool first = true;
  for (const auto& cls : coloring->classes()) {
    Sparse phase = phase_kernel(network, beta, neuron, cls);
    if (first) {
      product = std::move(phase);
      first = false;
    } else {
      product = Sparse(product * phase);
    }
  }
  if (first) return Eigen::MatrixXd::Identity(states, states);
  return Eigen::MatrixXd(product);
}

double DecayMode::rate() const {
  const double mag = std::abs(eigenvalue);
  return mag > 0.0 ? -std::log(mag) : std::numeric_limits<double>::infinity();
}

double DecaySeries::evaluate(std::size_t step) const {
  std::complex<double> sum = 0.0;
  for (const auto& m : modes) {
    if (step == 0) {
      sum += m.amplitude;
    } else if (m.eigenvalue != 0.0) {
      sum += m.amplitude * std::pow(m.eigenvalue, static_cast<double>(step));
    }
  }
  return sum.real();
}

DecaySeries decay_series(const Eigen::MatrixXd& matrix, std::uint64_t initial, std::span<const double> observable) {
  const Eigen::Index size = matrix.rows();
  if (matrix.cols() != size) throw std::invalid_argument("decay_series: matrix must be square");
  if (static_cast<Eigen::Index>(observable.size()) != size)
    throw std::invalid_argument("decay_series: observable length must equal the state count");
  if (static_cast<Eigen::Index>(initial) >= size) throw std::invalid_argument("decay_series: initial state out of range");

  // <f>(k) = e_s^T W^k f with W = V diag(lambda) V^{-1}.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) throw std::runtime_error("decay_series: eigen-decomposition failed");
  const Eigen::MatrixXcd v = solver.eigenvectors();
  const Eigen::VectorXcd lambda = solver.eigenvalues();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const auto& sv = svd.singularValues();
  DecaySeries out;
  out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
  out.defective = !(out.condition < 1e12);

  Eigen::VectorXcd f(size);
  for (Eigen::Index i = 0; i < size; ++i) f[i] = observable[static_cast<std::size_t>(i)];
  const Eigen::VectorXcd right = v.partialPivLu().solve(f);
  const Eigen::RowVectorXcd left = v.row(static_cast<Eigen::Index>(initial));
  for (Eigen::Index j = 0; j < size; ++j) out.modes.push_back({left[j] * right[j], lambda[j]});
  std::stable_sort(out.modes.begin(), out.modes.end(),
                   [](const DecayMode& a, const DecayMode& b) { return std::abs(a.eigenvalue) > std::abs(b.eigenvalue); });
  return out;
}

std::vector<double> propagate(const Eigen::MatrixXd& matrix, std::uint64_t initial, std::span<const double> observable,
                              std::size_t steps) {
  const Eigen::Index size = matrix.rows();
  if (static_cast<Eigen::Index>(observable.size()) != size || static_cast<Eigen::Index>(initial) >= size)
    throw std::invalid_argument("propagate: size mismatch");
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(size);
  dist[static_cast<Eigen::Index>(initial)] = 1.0;
  const Eigen::Map<const Eigen::VectorXd> f(observable.data(), size);
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    out.push_back(dist.dot(f));
    dist = dist * matrix;
  }
  return out;
}

std::vector<double> observable_table(std::size_t n, const std::function<double(std::span<const Spin>)>& f) {
  if (n > kMaxExactSpins) throw std::invalid_argument("observable_table: too many spins");
  std::vector<double> out(std::size_t{1} << n);
  for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
    const auto s = state_from_index(idx, n);
    out[idx] = f(s);
  }
  return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: distributions differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (total <= 0.0) throw std::invalid_argument("empirical_distribution: no samples");
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

}  // namespace pbit
