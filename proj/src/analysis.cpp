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

#include "ciex/analysis.hpp"

#include <algorithm>

#include "ciex/error.hpp"

namespace ciex {

namespace {

std::size_t count_unique(const std::vector<Operand>& ops) {
  std::vector<Operand> copy = ops;
  std::sort(copy.begin(), copy.end());
  copy.erase(std::unique(copy.begin(), copy.end()), copy.end());
  return copy.size();
}

// Keeps first occurrences, preserving order.
void collapse_to_unique(std::vector<Operand>& ops) {
  std::vector<Operand> out;
  for (const auto& op : ops)
    if (std::find(out.begin(), out.end(), op) == out.end()) out.push_back(op);
  ops = std::move(out);
}

}  // namespace

std::size_t OperandList::unique_inputs() const { return count_unique(inputs); }
std::size_t OperandList::unique_outputs() const {
  return count_unique(outputs);
}
std::size_t OperandList::unique_consts() const { return count_unique(consts); }

LivenessContext LivenessContext::for_block(const Procedure& proc,
                                           const BasicBlock& bb,
                                           const MachineDesc& md) {
  LivenessContext ctx;
  std::set<std::string> here;
  for (const auto& in : bb.instructions) {
    for (const auto& d : in.dests)
      if (d.is_reg()) here.insert(d.name);
    for (const auto& s : in.srcs)
      if (s.is_reg()) here.insert(s.name);
  }
  (void)md;
  for (const auto& other : proc.blocks) {
    if (&other == &bb) continue;
    for (const auto& in : other.instructions) {
      for (const auto& d : in.dests)
        if (d.is_reg() && here.count(d.name)) ctx.cross_block.insert(d.name);
      for (const auto& s : in.srcs)
        if (s.is_reg() && here.count(s.name)) ctx.cross_block.insert(s.name);
    }
  }
  return ctx;
}

OperandList collect_operands(const BasicBlock& bb, const MachineDesc& md,
                             std::span<const int> nodes, bool unique,
                             const LivenessContext& live) {
  OperandList out;
  std::vector<char> in_set(bb.instructions.size(), 0);
  for (int id : nodes) in_set[id] = 1;

  // producer[(consumer, name)] comes from the register-flow edges;
  // consumers[(producer, name)] is the reverse view.
  std::map<std::pair<int, std::string>, int> producer;
  std::map<std::pair<int, std::string>, std::vector<int>> consumers;
  for (const DepEdge& e : bb.edges) {
    if (e.kind != DepKind::RegisterFlow) continue;
    producer[{e.consumer, e.via.name}] = e.producer;
    consumers[{e.producer, e.via.name}].push_back(e.consumer);
  }

  // Last in-block definition of each register.
  std::map<std::string, int> last_def;
  for (const auto& in : bb.instructions)
    for (const Operand* d : reg_defs(in, md)) last_def[d->name] = in.id;

  for (int id : nodes) {
    const Instruction& in = bb.instructions[id];
    for (const Operand* use : reg_uses(in, md)) {
      auto it = producer.find({id, use->name});
      bool internal = it != producer.end() && in_set[it->second];
      if (!internal) out.inputs.push_back(*use);
    }
    for (const auto& s : in.srcs)
      if (s.is_const()) out.consts.push_back(s);

    for (const Operand* def : reg_defs(in, md)) {
      auto it = consumers.find({id, def->name});
      bool escapes;
      if (it == consumers.end()) {
        escapes = true;  // no consumer anywhere: possibly live-out
      } else {
        escapes = std::any_of(it->second.begin(), it->second.end(),
                              [&](int c) { return !in_set[c]; });
      }
      // Conservative cross-block liveness: the last in-block definition of
      // a register named in sibling blocks is an output.
      if (!escapes && live.cross_block.count(def->name) &&
          last_def[def->name] == id)
        escapes = true;
      if (escapes) out.outputs.push_back(*def);
    }
  }

  if (unique) {
    collapse_to_unique(out.inputs);
    collapse_to_unique(out.outputs);
    collapse_to_unique(out.consts);
    out.unique = true;
  }
  return out;
}

bool is_false_dependency(const BasicBlock& bb, const MachineDesc& md,
                         int mi_lpos, int mi_hpos, const Operand& opnd) {
  int lo = std::max(mi_lpos, 0);
  int hi = std::min(mi_hpos, bb.size() - 1);
  for (int id = lo; id <= hi; ++id) {
    const Instruction& in = bb.instructions[id];
    if (!md.lookup_op(in.opcode).is_store()) continue;
    // Destination operands of a store are the written memory references:
    // a memory/address symbol or the base register of an indirect store.
    for (const auto& d : in.dests)
      if (d == opnd) return true;
  }
  return false;
}

int remove_false_deps(BasicBlock& bb, const MachineDesc& md) {
  int annulled = 0;
  std::vector<DepEdge> kept;
  kept.reserve(bb.edges.size());
  for (const DepEdge& e : bb.edges) {
    if (e.kind == DepKind::MemoryOrder) {
      // Store-store pairs keep their edge: the producer itself writes the
      // via location inside the scanned range.
      bool real = is_false_dependency(bb, md, e.producer, e.consumer, e.via);
      if (!real) {
        ++annulled;
        continue;
      }
    }
    kept.push_back(e);
  }
  bb.edges = std::move(kept);
  return annulled;
}

int remove_false_deps(Program& prog, const MachineDesc& md) {
  int annulled = 0;
  for (auto& proc : prog.procedures)
    for (auto& bb : proc.blocks) annulled += remove_false_deps(bb, md);
  return annulled;
}

bool is_convex(const BasicBlock& bb, std::span<const int> nodes) {
  std::vector<char> in_set(bb.instructions.size(), 0);
  for (int id : nodes) in_set[id] = 1;

  // tainted[k]: k is outside the set and reachable from it. Edges only go
  // forward, so one ascending pass suffices.
  std::vector<std::vector<int>> preds(bb.instructions.size());
  for (const DepEdge& e : bb.edges) preds[e.consumer].push_back(e.producer);

  std::vector<char> tainted(bb.instructions.size(), 0);
  for (std::size_t k = 0; k < bb.instructions.size(); ++k) {
    for (int p : preds[k]) {
      if (in_set[k]) {
        if (tainted[p]) return false;  // path left the set and came back
      } else if (tainted[p] || in_set[p]) {
        tainted[k] = 1;
      }
    }
  }
  return true;
}

ProgramStats program_stats(const Program& prog, const Profile& profile,
                           const MachineDesc& md) {
  ProgramStats st;
  for (const auto& proc : prog.procedures) {
    for (const auto& bb : proc.blocks) {
      BlockStats bs;
      bs.proc = proc.name;
      bs.label = bb.label;
      bs.size = bb.size();
      bs.freq = profile.get(proc.name, bb.label);
      for (const auto& in : bb.instructions) {
        const OperatorSpec& spec = md.lookup_op(in.opcode);
        st.static_ops[in.opcode] += 1;
        st.dynamic_ops[in.opcode] += (long long)bs.freq;
        bs.sw_cycles += spec.sw_cycles;
        st.static_instructions += 1;
      }
      st.base_cycles += (long long)bs.freq * bs.sw_cycles;
      st.blocks.push_back(std::move(bs));
    }
  }
  return st;
}

}  // namespace ciex
