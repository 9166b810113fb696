// Copyright 2026 The ciex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIEX_EXPORTERS_HPP
#define CIEX_EXPORTERS_HPP

#include <string>
#include <vector>

#include "ciex/analysis.hpp"
#include "ciex/isomatch.hpp"
#include "ciex/select.hpp"

namespace ciex {

// All exporters are deterministic: identical inputs give byte-identical
// output. Graph exports label nodes "id: opcode" and draw one edge per
// dependence edge (memory-order edges dashed).

std::string to_dot(const BasicBlock& bb, const std::string& graph_name);
std::string to_dot(const Program& prog);
std::string to_dot(const PatternGraph& g, const std::string& graph_name);

/// GDL (VCG) form; a pattern becomes a folded subgraph.
std::string to_gdl(const BasicBlock& bb, const std::string& graph_name);
std::string to_gdl(const Program& prog);
std::string to_gdl(const PatternGraph& g, const std::string& graph_name);

/// A C function computing the pattern: one assignment per node in
/// topological order, external inputs as parameters, outputs through
/// pointers (or the return value for a single output). Throws Error for
/// operators without an emission rule (loads, stores, control transfers).
std::string to_c(const PatternGraph& g, const MachineDesc& md,
                 const std::string& func_name);

std::string stats_text(const ProgramStats& st);
std::string stats_csv(const ProgramStats& st);

std::string classes_csv(const std::vector<CandidateClass>& classes);

/// Columns: step, class id, priority, P*f sum, class area, cumulative
/// speedup, cumulative area.
std::string selection_csv(const Selection& sel);

/// Fixed-precision decimal used by every CSV writer.
std::string format_real(double v);

}  // namespace ciex

#endif  // CIEX_EXPORTERS_HPP
