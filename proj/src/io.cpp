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

#include "pbit/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pbit {
namespace {

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw std::runtime_error("lattice file: expected '" + word + "', got '" + got + "'");
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw std::runtime_error(std::string("lattice file: could not read ") + what);
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_lattice(std::ostream& out, const LatticeGraph& lattice) {
  out << "# pbit-lattice v1\n";
  out << "kind " << to_string(lattice.kind) << " rows " << lattice.rows << " cols " << lattice.cols
      << " spins_per_basis " << lattice.spins_per_basis << " periodic " << (lattice.periodic ? 1 : 0) << '\n';
  out << "num_spins " << lattice.num_spins << '\n';
  out << "sublattices ";
  for (auto s : lattice.sublattice) out << sublattice_letter(s);
  out << '\n';
  out << "plaquettes " << lattice.plaquettes.size() << '\n';
  for (const auto& p : lattice.plaquettes) out << p.red_basis << ' ' << p.green_basis << ' ' << p.blue_basis << '\n';
  out << "edges " << lattice.edges.size() << '\n';
  for (const auto& e : lattice.edges) out << e.i << ' ' << e.j << ' ' << format_double(e.coupling) << '\n';
}

LatticeGraph read_lattice(std::istream& in) {
  std::string line;
  while (in.peek() == '#') std::getline(in, line);
  LatticeGraph g;
  expect(in, "kind");
  const auto kind = read_value<std::string>(in, "kind");
  if (kind == "square_octagonal") {
    g.kind = LatticeKind::square_octagonal;
  } else if (kind == "triangular") {
    g.kind = LatticeKind::triangular;
  } else {
    throw std::runtime_error("lattice file: unknown kind '" + kind + "'");
  }
  expect(in, "rows");
  g.rows = read_value<std::size_t>(in, "rows");
  expect(in, "cols");
  g.cols = read_value<std::size_t>(in, "cols");
  expect(in, "spins_per_basis");
  g.spins_per_basis = read_value<std::size_t>(in, "spins_per_basis");
  expect(in, "periodic");
  g.periodic = read_value<int>(in, "periodic") != 0;
  expect(in, "num_spins");
  g.num_spins = read_value<std::size_t>(in, "num_spins");
  if (g.spins_per_basis == 0 || g.num_spins != g.rows * g.cols * g.spins_per_basis)
    throw std::runtime_error("lattice file: num_spins inconsistent with the grid");
  expect(in, "sublattices");
  const auto labels = read_value<std::string>(in, "sublattices");
  if (labels.size() != g.num_spins) throw std::runtime_error("lattice file: sublattice label count mismatch");
  for (std::size_t s = 0; s < g.num_spins; ++s) {
    switch (labels[s]) {
      case 'r': g.sublattice.push_back(Sublattice::red); break;
      case 'g': g.sublattice.push_back(Sublattice::green); break;
      case 'b': g.sublattice.push_back(Sublattice::blue); break;
      default: throw std::runtime_error("lattice file: bad sublattice label");
    }
    g.basis.push_back(s / g.spins_per_basis);
  }
  expect(in, "plaquettes");
  const auto np = read_value<std::size_t>(in, "plaquette count");
  for (std::size_t k = 0; k < np; ++k) {
    Plaquette p{};
    p.red_basis = read_value<std::size_t>(in, "plaquette");
    p.green_basis = read_value<std::size_t>(in, "plaquette");
    p.blue_basis = read_value<std::size_t>(in, "plaquette");
    g.plaquettes.push_back(p);
  }
  expect(in, "edges");
  const auto ne = read_value<std::size_t>(in, "edge count");
  for (std::size_t k = 0; k < ne; ++k) {
    Edge e{};
    e.i = read_value<std::size_t>(in, "edge");
    e.j = read_value<std::size_t>(in, "edge");
    e.coupling = read_value<double>(in, "edge");
    if (e.i >= g.num_spins || e.j >= g.num_spins) throw std::runtime_error("lattice file: edge endpoint out of range");
    g.edges.push_back(e);
  }
  return g;
}

void write_network(std::ostream& out, const ReplicatedNetwork& network, const Coloring& coloring) {
  if (coloring.color.size() != network.size()) throw std::invalid_argument("write_network: coloring size mismatch");
  write_lattice(out, network.base);
  out << "network r " << network.replicas << " beta " << format_double(network.beta) << " gamma "
      << format_double(network.gamma) << " j_perp " << format_double(network.j_perp) << " size " << network.size()
      << '\n';
  out << "colors " << coloring.num_colors << '\n';
  for (auto c : coloring.color) out << static_cast<int>(c) << '\n';
  const auto& edges = network.graph.edges();
  out << "couplings " << edges.size() << '\n';
  for (const auto& e : edges) out << e.i << ' ' << e.j << ' ' << format_double(e.weight) << '\n';
}

void write_comment_header(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, double ns_per_unit,
                     const std::vector<std::string>& header, const char* index_name) {
  write_comment_header(out, header);
  out << index_name << ",time_ns,observable\n";
  for (std::size_t i = 0; i < trace.time.size(); ++i) {
    out << format_double(trace.time[i]) << ',' << format_double(trace.time[i] * ns_per_unit) << ','
        << format_double(trace.values[i]) << '\n';
  }
}

void write_series_csv(std::ostream& out, const EnsembleSeries& series, double ns_per_unit,
                      const std::vector<std::string>& header, const char* index_name) {
  write_comment_header(out, header);
  out << index_name << ",time_ns,mean,ci_half_width,runs\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(series.time[i]) << ',' << format_double(series.time[i] * ns_per_unit) << ','
        << format_double(series.mean[i]) << ',' << format_double(series.ci_half_width[i]) << ',' << series.runs
        << '\n';
  }
}

}  // namespace pbit
