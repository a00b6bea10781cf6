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

#include <iosfwd>
#include <string>
#include <vector>

#include "pbit/coloring.hpp"
#include "pbit/engine_sync.hpp"
#include "pbit/lattice.hpp"
#include "pbit/observables.hpp"
#include "pbit/trotter.hpp"

namespace pbit {

/// Edge-list text format:
///   # pbit-lattice v1
///   kind <kind> rows <rows> cols <cols> spins_per_basis <k> periodic <0|1>
///   num_spins <n>
///   sublattices <n letters r/g/b>
///   plaquettes <count>
///   <red> <green> <blue>      (one line per plaquette)
///   edges <count>
///   <i> <j> <J>               (one line per edge)
void write_lattice(std::ostream& out, const LatticeGraph& lattice);
LatticeGraph read_lattice(std::istream& in);

/// Network format: the lattice block followed by
///   network r <r> beta <beta> gamma <gamma> j_perp <j_perp> size <n*r>
///   colors <C>
///   <color>                   (one line per p-bit)
///   couplings <count>
///   <i> <j> <w>               (alignment-favoring weights, H = -sum w m m)
void write_network(std::ostream& out, const ReplicatedNetwork& network, const Coloring& coloring);

/// Lines "# <text>" for each header entry.
void write_comment_header(std::ostream& out, const std::vector<std::string>& lines);

/// sweep_index,time_ns,observable with time_ns = index * colors * clock_period_ns.
void write_trace_csv(std::ostream& out, const RunTrace& trace, double ns_per_unit,
                     const std::vector<std::string>& header, const char* index_name = "sweep_index");

/// sweep_index,time_ns,mean,ci_half_width,runs.
void write_series_csv(std::ostream& out, const EnsembleSeries& series, double ns_per_unit,
                      const std::vector<std::string>& header, const char* index_name = "sweep_index");

/// Shortest text that round-trips the double.
std::string format_double(double value);

}  // namespace pbit
