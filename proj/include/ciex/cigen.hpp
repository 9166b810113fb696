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

#ifndef CIEX_CIGEN_HPP
#define CIEX_CIGEN_HPP

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "ciex/analysis.hpp"
#include "ciex/ir.hpp"
#include "ciex/machine.hpp"

namespace ciex {

inline constexpr unsigned kUnlimited = std::numeric_limits<unsigned>::max();

enum class MemMode { NoMem, Cdm, IdealCam };
enum class GenMethod { MaxMiso, Miso, Mimo };

const char* to_string(MemMode m);
const char* to_string(GenMethod m);

/// Candidate-generation constraints. The forbidden set is seeded from the
/// machine description's forbidden-default flags; noMEM additionally
/// forbids every load/store opcode.
struct Constraints {
  unsigned max_inputs = kUnlimited;   // distinct input registers
  unsigned max_outputs = kUnlimited;  // distinct output registers
  std::set<std::string> forbidden;    // opcodes barred from patterns
  MemMode mem_mode = MemMode::NoMem;
  unsigned max_nodes = kUnlimited;
  unsigned max_consts = kUnlimited;
  bool unique_operands = false;       // SSA facet for stored operand lists
  GenMethod method = GenMethod::Mimo;
  bool exhaustive = false;            // disable the MIMO dominance pruning
  std::uint64_t enum_cap = 1u << 20;  // visited subsets per block

  /// Returns a copy with the forbidden set resolved against `md`
  /// (forbidden-default flags, group expansion, noMEM memory opcodes).
  Constraints resolved(const MachineDesc& md) const;
};

/// A candidate pattern: a convex, non-forbidden node set within one block,
/// with derived operand lists.
struct Pattern {
  std::string proc;
  std::string block;
  std::vector<int> nodes;  // sorted instruction ids
  OperandList operands;
  int mem_ops = 0;
  std::uint64_t freq = 0;  // owning block execution frequency
};

struct GenResult {
  std::vector<Pattern> patterns;  // canonical order: lexicographic node sets
  bool cap_exceeded = false;
};

/// Maximal single-output subgraphs over the non-forbidden nodes. The
/// returned patterns partition the non-forbidden nodes; runtime is linear
/// in nodes plus edges. Finite input/output bounds only filter the result.
GenResult gen_maxmiso(const BasicBlock& bb, const MachineDesc& md,
                      const Constraints& c, const LivenessContext& live = {});

/// All single-output patterns rooted at each non-forbidden node, grown
/// over producers, subject to the operand and node constraints.
GenResult gen_miso(const BasicBlock& bb, const MachineDesc& md,
                   const Constraints& c, const LivenessContext& live = {});

/// Multiple-input multiple-output patterns. Exhaustive mode enumerates
/// every feasible convex node set; the default mode keeps only patterns
/// maximal under subset inclusion, which preserves the best pattern under
/// any additive gain model.
GenResult gen_mimo(const BasicBlock& bb, const MachineDesc& md,
                   const Constraints& c, const LivenessContext& live = {});

struct Candidates {
  std::vector<Pattern> patterns;
  bool cap_exceeded = false;
  std::vector<std::string> warnings;
};

/// Runs per-block generation over a whole program with the method selected
/// by `c`, annotating each pattern with its block frequency. Deterministic:
/// blocks in program order, node sets in lexicographic order.
Candidates gen_program(const Program& prog, const Profile& profile,
                       const MachineDesc& md, const Constraints& c);

}  // namespace ciex

#endif  // CIEX_CIGEN_HPP
