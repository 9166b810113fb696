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

#ifndef CIEX_IR_HPP
#define CIEX_IR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ciex {

class MachineDesc;

enum class OperandKind { Register, Constant, MemSymbol, AddrSymbol };

/// A single instruction operand. Constants carry a value and no name;
/// every other kind carries a name and no value. Width is in bits and
/// is at least 1.
struct Operand {
  OperandKind kind = OperandKind::Register;
  std::string name;        // empty for constants
  std::int64_t value = 0;  // meaningful for constants only
  int width = 32;

  bool is_reg() const { return kind == OperandKind::Register; }
  bool is_const() const { return kind == OperandKind::Constant; }
  bool is_mem() const { return kind == OperandKind::MemSymbol; }
  bool is_addr() const { return kind == OperandKind::AddrSymbol; }

  static Operand reg(std::string name, int width = 32) {
    return {OperandKind::Register, std::move(name), 0, width};
  }
  static Operand cst(std::int64_t value, int width = 32) {
    return {OperandKind::Constant, {}, value, width};
  }
  static Operand mem(std::string sym, int width = 32) {
    return {OperandKind::MemSymbol, std::move(sym), 0, width};
  }
  static Operand addr(std::string sym, int width = 32) {
    return {OperandKind::AddrSymbol, std::move(sym), 0, width};
  }

  friend bool operator==(const Operand& a, const Operand& b) {
    return a.kind == b.kind && a.name == b.name && a.value == b.value &&
           a.width == b.width;
  }
  friend auto operator<=>(const Operand& a, const Operand& b) {
    return std::tie(a.kind, a.name, a.value, a.width) <=>
           std::tie(b.kind, b.name, b.value, b.width);
  }
};

/// Text token for an operand: r:<name>:<w>, c:<int>:<w>, m:<sym>, a:<sym>.
std::string to_token(const Operand& op);

struct Instruction {
  int id = 0;  // position within the owning block, 0-based
  std::string opcode;
  std::vector<Operand> dests;
  std::vector<Operand> srcs;
};

enum class DepKind { RegisterFlow, MemoryOrder };

/// Forward dependence edge within one block (producer id < consumer id).
struct DepEdge {
  int producer = 0;
  int consumer = 0;
  Operand via;
  DepKind kind = DepKind::RegisterFlow;

  friend bool operator==(const DepEdge& a, const DepEdge& b) {
    return a.producer == b.producer && a.consumer == b.consumer &&
           a.via == b.via && a.kind == b.kind;
  }
  friend auto operator<=>(const DepEdge& a, const DepEdge& b) {
    return std::tie(a.producer, a.consumer, a.kind, a.via) <=>
           std::tie(b.producer, b.consumer, b.kind, b.via);
  }
};

struct BasicBlock {
  std::string label;
  std::vector<Instruction> instructions;
  std::vector<DepEdge> edges;  // sorted and duplicate-free
  // Edges came from explicit "dep" lines; derivation leaves them alone.
  bool explicit_deps = false;

  const Instruction& instr(int id) const { return instructions[id]; }
  int size() const { return static_cast<int>(instructions.size()); }
};

struct SymbolDecl {
  std::string name;
  OperandKind kind = OperandKind::Register;
  int width = 32;
};

struct Procedure {
  std::string name;
  std::vector<SymbolDecl> locals;
  std::vector<BasicBlock> blocks;

  const BasicBlock* find_block(const std::string& label) const;
  BasicBlock* find_block(const std::string& label);
};

struct Program {
  std::string name;
  std::vector<SymbolDecl> globals;
  std::vector<Procedure> procedures;

  const Procedure* find_proc(const std::string& name) const;
  Procedure* find_proc(const std::string& name);
};

enum class CfgEdgeType { Fallthrough, Branch, Call };

struct CfgEdge {
  std::string src;
  std::string dst;
  CfgEdgeType type = CfgEdgeType::Fallthrough;
  bool external = false;  // call edge naming a procedure, not a block
};

/// Typed control-flow edges, keyed by procedure name.
struct Cfg {
  std::map<std::string, std::vector<CfgEdge>> edges;
};

/// Execution frequencies per (procedure, block label); unlisted blocks are 0.
struct Profile {
  std::map<std::pair<std::string, std::string>, std::uint64_t> freq;

  std::uint64_t get(const std::string& proc, const std::string& label) const {
    auto it = freq.find({proc, label});
    return it == freq.end() ? 0 : it->second;
  }
  void add(const std::string& proc, const std::string& label,
           std::uint64_t n) {
    freq[{proc, label}] += n;
  }
};

// Operand roles depend on the machine description: destinations of a
// store-flagged instruction are memory references (the base register of an
// indirect store is read for address computation, never defined).

/// Register operands defined by the instruction.
std::vector<const Operand*> reg_defs(const Instruction& in,
                                     const MachineDesc& md);
/// Register operands read by the instruction, including store base registers.
std::vector<const Operand*> reg_uses(const Instruction& in,
                                     const MachineDesc& md);
bool is_mem_op(const Instruction& in, const MachineDesc& md);
/// The operand naming the accessed location of a load/store: the first
/// memory/address symbol, else the base register. Null for non-memory ops.
const Operand* mem_ref(const Instruction& in, const MachineDesc& md);

/// Derive the dependence-edge set of a block: register-flow edges from the
/// last prior definition of each read register, and memory-order edges for
/// every store-load, store-store and load-store pair in program order.
/// Deterministic; the result is sorted and duplicate-free.
std::vector<DepEdge> build_ddg(const BasicBlock& bb, const MachineDesc& md);

/// Store derived edges on the block (skipped when explicit "dep" lines
/// supplied the edge set).
void attach_ddg(BasicBlock& bb, const MachineDesc& md);
void attach_ddg(Program& prog, const MachineDesc& md);

}  // namespace ciex

#endif  // CIEX_IR_HPP
