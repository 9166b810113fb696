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

#ifndef CIEX_ISOMATCH_HPP
#define CIEX_ISOMATCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciex/cigen.hpp"
#include "ciex/ir.hpp"
#include "ciex/machine.hpp"

namespace ciex {

/// Whether constant operands must match by value or only by being constant.
enum class ConstMatch { Value, Shape };

struct MatchOptions {
  ConstMatch const_match = ConstMatch::Value;
};

/// Self-contained matchable (and schedulable) form of a pattern: nodes in
/// original program order with opcode labels and per-source slots, plus
/// intra-pattern memory-order edges. Register names are erased; structure
/// and constants remain.
class PatternGraph {
 public:
  struct Slot {
    // Extern: register input (sym = canonical input index, shared slots
    // share it); Internal: produced by another pattern node; Const:
    // immediate; MemRef: memory/address symbol (sym = canonical symbol
    // index within the pattern).
    enum Kind { Extern, Internal, Const, MemRef } kind = Extern;
    int producer = -1;        // Internal only
    std::int64_t cvalue = 0;  // Const only
    int sym = -1;             // Extern / MemRef
    bool is_addr = false;     // MemRef: address vs memory symbol
    bool from_dest = false;   // store-side reference (written location)
    int width = 32;
  };
  struct Node {
    std::string opcode;
    unsigned flags = 0;  // OpFlags of the operator
    int sw_cycles = 1;
    double hw_delay = 1.0;
    double hw_area = 0.0;
    std::vector<Slot> slots;  // one per source operand, in order
    std::vector<int> dest_widths;
    int orig_id = 0;

    bool is_load() const { return flags & kFlagLoad; }
    bool is_store() const { return flags & kFlagStore; }
    bool is_mem() const { return flags & (kFlagLoad | kFlagStore); }
    bool commutative() const { return flags & kFlagCommutative; }
  };

  static PatternGraph build(const BasicBlock& bb, const MachineDesc& md,
                            std::span<const int> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& mem_edges() const {
    return mem_edges_;
  }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Dependence predecessors of node i (internal slots plus memory-order
  /// edges), deduplicated and sorted.
  std::vector<int> preds(int i) const;

  /// Invariant under isomorphism; unequal hashes imply non-isomorphic.
  std::uint64_t shape_hash(const MatchOptions& opts = {}) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::pair<int, int>> mem_edges_;  // local indices, sorted
};

/// Labeled-DAG isomorphism: a node bijection preserving opcodes, source
/// slot structure (commutative operators match under input permutation)
/// and memory-order edges. Operand names never affect the result.
bool iso_equal(const PatternGraph& p, const PatternGraph& q,
               const MatchOptions& opts = {});

/// True iff p embeds into q as an induced labeled subgraph.
bool is_subpattern(const PatternGraph& p, const PatternGraph& q,
                   const MatchOptions& opts = {});

/// A pattern with its matchable form attached.
struct Candidate {
  Pattern pattern;
  PatternGraph graph;
};

/// Builds candidates from generated patterns against their program.
std::vector<Candidate> materialize(const std::vector<Pattern>& patterns,
                                   const Program& prog,
                                   const MachineDesc& md);

struct Instance {
  std::string proc;
  std::string block;
  std::vector<int> nodes;
  std::uint64_t freq = 0;
  long long gain = 0;  // cycle gain P, filled by estimation
};

/// Isomorphism class of candidates. Estimation fills the cost fields.
struct CandidateClass {
  int id = 0;
  Candidate rep;
  std::vector<Instance> instances;

  bool estimated = false;
  int seq_cycles = 0;
  int ci_cycles = 0;
  double area = 0.0;

  std::uint64_t instance_count() const { return instances.size(); }
};

/// Groups candidates into isomorphism classes. Representatives are the
/// first member in input order; classes keep that order. Instance counts
/// are conserved: the sum over classes equals the input size.
std::vector<CandidateClass> dedup(const std::vector<Candidate>& candidates,
                                  const MatchOptions& opts = {});

/// Pattern-library file: an ISeq program whose procedures each hold one
/// single-block pattern with canonically renamed operands.
std::string export_library(const std::vector<CandidateClass>& classes,
                           const MachineDesc& md);

/// Imports a pattern library; every single-block procedure becomes one
/// candidate (frequency 0 until estimated against a profile).
std::vector<Candidate> import_library(std::string_view text,
                                      const MachineDesc& md);

}  // namespace ciex

#endif  // CIEX_ISOMATCH_HPP
