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

#ifndef CIEX_MACHINE_HPP
#define CIEX_MACHINE_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ciex {

enum OpFlags : unsigned {
  kFlagLoad = 1u << 0,
  kFlagStore = 1u << 1,
  kFlagCti = 1u << 2,
  kFlagForbiddenDefault = 1u << 3,
  kFlagCommutative = 1u << 4,
};

/// Per-operator software cycle count, hardware delay (normalized units) and
/// hardware area (MAU), plus behavioral flags. An operator cannot be both
/// load and store.
struct OperatorSpec {
  std::string mnemonic;
  int arity = 0;
  bool variadic = false;
  int sw_cycles = 1;
  double hw_delay = 1.0;
  double hw_area = 0.0;
  unsigned flags = 0;

  bool is_load() const { return flags & kFlagLoad; }
  bool is_store() const { return flags & kFlagStore; }
  bool is_mem() const { return flags & (kFlagLoad | kFlagStore); }
  bool is_cti() const { return flags & kFlagCti; }
  bool forbidden_default() const { return flags & kFlagForbiddenDefault; }
  bool commutative() const { return flags & kFlagCommutative; }
};

struct MemPorts {
  int read_ports = 1;
  int write_ports = 1;
  int mem_cycles = 1;          // data-memory access latency, cycles
  int local_access_cycles = 1; // local (AFU) storage access latency, cycles
};

/// A target IR architecture: operator table, clock period in delay units,
/// and the data-memory port model.
class MachineDesc {
 public:
  std::string name;
  double clock = 1.0;  // delay units per cycle, > 0
  MemPorts memports;
  // Named operator groups, shorthand for constraint flags.
  std::map<std::string, std::vector<std::string>> groups;

  /// Throws Error on duplicate mnemonic or negative cost.
  void add_op(OperatorSpec spec);

  const OperatorSpec* find_op(const std::string& mnemonic) const;
  /// Throws UnknownOpcode when the mnemonic does not resolve.
  const OperatorSpec& lookup_op(const std::string& mnemonic) const;

  const std::vector<OperatorSpec>& ops() const { return ops_; }

  /// Expands a group name to its members, or returns {name} otherwise.
  std::set<std::string> expand(const std::string& name) const;

  /// Mnemonics carrying the forbidden-default flag.
  std::set<std::string> forbidden_defaults() const;
  /// Mnemonics carrying a load or store flag.
  std::set<std::string> memory_ops() const;

 private:
  std::vector<OperatorSpec> ops_;
  std::map<std::string, int> index_;
};

MachineDesc parse_bxir(std::string_view text);
std::string serialize_bxir(const MachineDesc& md);

std::vector<std::string> builtin_machine_names();
/// Built-in descriptions: "suifvmenh" (RISC-like virtual machine IR with
/// bit-level operators) and "idlx" (integer DLX-style assembly IR).
/// Throws Error for unknown names.
const MachineDesc& builtin_machine(const std::string& name);

}  // namespace ciex

#endif  // CIEX_MACHINE_HPP
