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

#include "ciex/ir.hpp"

#include <algorithm>
#include <map>

#include "ciex/error.hpp"
#include "ciex/machine.hpp"

namespace ciex {

std::string to_token(const Operand& op) {
  switch (op.kind) {
    case OperandKind::Register:
      return "r:" + op.name + ":" + std::to_string(op.width);
    case OperandKind::Constant:
      return "c:" + std::to_string(op.value) + ":" + std::to_string(op.width);
    case OperandKind::MemSymbol:
      return "m:" + op.name;
    case OperandKind::AddrSymbol:
      return "a:" + op.name;
  }
  return {};
}

const BasicBlock* Procedure::find_block(const std::string& label) const {
  for (const auto& bb : blocks)
    if (bb.label == label) return &bb;
  return nullptr;
}

BasicBlock* Procedure::find_block(const std::string& label) {
  for (auto& bb : blocks)
    if (bb.label == label) return &bb;
  return nullptr;
}

const Procedure* Program::find_proc(const std::string& n) const {
  for (const auto& p : procedures)
    if (p.name == n) return &p;
  return nullptr;
}

Procedure* Program::find_proc(const std::string& n) {
  for (auto& p : procedures)
    if (p.name == n) return &p;
  return nullptr;
}

std::vector<const Operand*> reg_defs(const Instruction& in,
                                     const MachineDesc& md) {
  std::vector<const Operand*> out;
  const OperatorSpec& spec = md.lookup_op(in.opcode);
  if (spec.is_store()) return out;  // store dests are memory references
  for (const auto& d : in.dests)
    if (d.is_reg()) out.push_back(&d);
  return out;
}

std::vector<const Operand*> reg_uses(const Instruction& in,
                                     const MachineDesc& md) {
  std::vector<const Operand*> out;
  for (const auto& s : in.srcs)
    if (s.is_reg()) out.push_back(&s);
  const OperatorSpec& spec = md.lookup_op(in.opcode);
  if (spec.is_store()) {
    // The base register of an indirect store is an address use.
    for (const auto& d : in.dests)
      if (d.is_reg()) out.push_back(&d);
  }
  return out;
}

bool is_mem_op(const Instruction& in, const MachineDesc& md) {
  return md.lookup_op(in.opcode).is_mem();
}

const Operand* mem_ref(const Instruction& in, const MachineDesc& md) {
  const OperatorSpec& spec = md.lookup_op(in.opcode);
  if (!spec.is_mem()) return nullptr;
  const std::vector<Operand>& side = spec.is_store() ? in.dests : in.srcs;
  for (const auto& op : side)
    if (op.is_mem() || op.is_addr()) return &op;
  for (const auto& op : side)
    if (op.is_reg()) return &op;  // register-indirect access
  return nullptr;
}

std::vector<DepEdge> build_ddg(const BasicBlock& bb, const MachineDesc& md) {
  std::vector<DepEdge> edges;
  std::map<std::string, int> last_def;  // register name -> instruction id

  struct MemRecord {
    int id;
    bool is_store;
    const Operand* ref;
  };
  std::vector<MemRecord> mem_ops;

  for (const Instruction& in : bb.instructions) {
    const OperatorSpec& spec = md.lookup_op(in.opcode);

    for (const Operand* use : reg_uses(in, md)) {
      auto it = last_def.find(use->name);
      if (it != last_def.end())
        edges.push_back({it->second, in.id, *use, DepKind::RegisterFlow});
      // Reads of never-defined registers become block inputs, not edges.
    }

    if (spec.is_mem()) {
      const Operand* ref = mem_ref(in, md);
      for (const MemRecord& prior : mem_ops) {
        // Ordered pairs: store-load, store-store, load-store. Load pairs
        // never conflict.
        if (!prior.is_store && !spec.is_store()) continue;
        // The via operand names the location the dependence is about: the
        // load side's reference when one endpoint is a load, else the
        // producer's.
        const Operand* via = ref;
        if (prior.is_store && spec.is_store())
          via = prior.ref;
        else if (!prior.is_store)
          via = prior.ref;
        if (via == nullptr) via = ref != nullptr ? ref : prior.ref;
        if (via != nullptr)
          edges.push_back({prior.id, in.id, *via, DepKind::MemoryOrder});
      }
      mem_ops.push_back({in.id, spec.is_store(), ref});
    }

    for (const Operand* def : reg_defs(in, md)) last_def[def->name] = in.id;
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void attach_ddg(BasicBlock& bb, const MachineDesc& md) {
  if (bb.explicit_deps) return;
  bb.edges = build_ddg(bb, md);
}

void attach_ddg(Program& prog, const MachineDesc& md) {
  for (auto& proc : prog.procedures)
    for (auto& bb : proc.blocks) attach_ddg(bb, md);
}

}  // namespace ciex
