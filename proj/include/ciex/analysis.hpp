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

#ifndef CIEX_ANALYSIS_HPP
#define CIEX_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ciex/ir.hpp"
#include "ciex/machine.hpp"

namespace ciex {

/// Input/output/constant operand lists of a node set. Ordered, possibly
/// with duplicates; the uniqueness flag records that duplicates were
/// collapsed (single reference per direction, as in SSA form).
struct OperandList {
  std::vector<Operand> inputs;
  std::vector<Operand> outputs;
  std::vector<Operand> consts;
  bool unique = false;

  std::size_t unique_inputs() const;
  std::size_t unique_outputs() const;
  std::size_t unique_consts() const;
};

/// Registers of one block that are also named in sibling blocks of the
/// procedure; such registers are conservatively treated as live across
/// blocks when deciding pattern outputs.
struct LivenessContext {
  std::set<std::string> cross_block;

  static LivenessContext for_block(const Procedure& proc,
                                   const BasicBlock& bb,
                                   const MachineDesc& md);
  static LivenessContext none() { return {}; }
};

/// Collects the operand lists of `nodes` (sorted instruction ids within
/// `bb`). A produced register is an output when a consumer lies outside
/// the node set, when it has no consumer at all, or when its last in-block
/// definition is conservatively live across blocks. Values consumed only
/// inside the set are internal. Constants never appear in `inputs`.
OperandList collect_operands(const BasicBlock& bb, const MachineDesc& md,
                             std::span<const int> nodes, bool unique,
                             const LivenessContext& live = {});

/// True iff some instruction in [mi_lpos..mi_hpos] has a destination
/// operand that is a memory-writing reference (a store's memory/address
/// symbol or base register) equal to `opnd`. An empty range yields false.
bool is_false_dependency(const BasicBlock& bb, const MachineDesc& md,
                         int mi_lpos, int mi_hpos, const Operand& opnd);

/// Deletes every memory-order edge whose via operand is never written as a
/// memory reference within the edge's instruction range; register-flow
/// edges are never touched. Returns the number of edges annulled.
/// Idempotent.
int remove_false_deps(BasicBlock& bb, const MachineDesc& md);
int remove_false_deps(Program& prog, const MachineDesc& md);

/// True iff no dependence path leaves `nodes` and re-enters it.
bool is_convex(const BasicBlock& bb, std::span<const int> nodes);

struct BlockStats {
  std::string proc;
  std::string label;
  int size = 0;
  std::uint64_t freq = 0;
  long long sw_cycles = 0;  // one execution of the block
};

struct ProgramStats {
  std::map<std::string, long long> static_ops;    // opcode -> occurrences
  std::map<std::string, long long> dynamic_ops;   // opcode -> occurrences * f
  std::vector<BlockStats> blocks;
  long long static_instructions = 0;
  long long base_cycles = 0;  // sum over blocks of f(b) * sw cycles of b
};

/// Static and dynamic application metrics. Throws UnknownOpcode when an
/// instruction does not resolve in `md`.
ProgramStats program_stats(const Program& prog, const Profile& profile,
                           const MachineDesc& md);

}  // namespace ciex

#endif  // CIEX_ANALYSIS_HPP
