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

#include <map>

#include "ciex/error.hpp"
#include "ciex/machine.hpp"

namespace ciex {
namespace {

// Hardware delays are in fractions of the 1.0 clock; areas are in MAU,
// anchored so a 32-bit single-cycle multiplier costs exactly 1.0.

// RISC-like virtual-machine IR with bit-level operators. Branches are
// permitted in patterns.
const char kSuifVmEnh[] = R"(machine suifvmenh
clock 1.0
memports read=1 write=1 cycles=1 local=1
op nop arity=0 sw=1 delay=0.01 area=0
op cpy arity=1 sw=1 delay=0.02 area=0.001
op ldc arity=1 sw=1 delay=0.05 area=0.001
op add arity=2 sw=1 delay=0.5 area=0.031 flags=comm
op sub arity=2 sw=1 delay=0.5 area=0.031
op neg arity=1 sw=1 delay=0.3 area=0.016
op abs arity=1 sw=1 delay=0.5 area=0.04
op min arity=2 sw=1 delay=0.55 area=0.045 flags=comm
op max arity=2 sw=1 delay=0.55 area=0.045 flags=comm
op mul arity=2 sw=1 delay=1 area=1 flags=comm
op div arity=2 sw=8 delay=8 area=1.9
op rem arity=2 sw=8 delay=8 area=1.9
op mod arity=2 sw=8 delay=8 area=1.9
op not arity=1 sw=1 delay=0.2 area=0.003
op and arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op ior arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op xor arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op asr arity=2 sw=1 delay=0.8 area=0.14
op lsl arity=2 sw=1 delay=0.8 area=0.14
op lsr arity=2 sw=1 delay=0.8 area=0.14
op rot arity=2 sw=1 delay=0.85 area=0.16
op seq arity=2 sw=1 delay=0.4 area=0.02 flags=comm
op sne arity=2 sw=1 delay=0.4 area=0.02 flags=comm
op sl arity=2 sw=1 delay=0.5 area=0.025
op sle arity=2 sw=1 delay=0.5 area=0.025
op cvt arity=1 sw=1 delay=0.05 area=0.002
op lod arity=1 sw=1 delay=1 area=0.01 flags=load
op str arity=1 sw=1 delay=1 area=0.01 flags=store
op btrue arity=2 sw=1 delay=0.3 area=0.02 flags=cti
op bfalse arity=2 sw=1 delay=0.3 area=0.02 flags=cti
op beq arity=3 sw=1 delay=0.35 area=0.025 flags=cti
op bne arity=3 sw=1 delay=0.35 area=0.025 flags=cti
op jmp arity=1 sw=1 delay=0.1 area=0.005 flags=cti
op cal arity=1 sw=1 delay=0.1 area=0.005 flags=cti
op ret arity=0 sw=1 delay=0.1 area=0.005 flags=cti
op sxt arity=1 sw=1 delay=0.05 area=0.002
op zxt arity=1 sw=1 delay=0.03 area=0.001
op select arity=3 sw=1 delay=0.25 area=0.012
op bitinsert arity=4 sw=1 delay=0.1 area=0.004
op bitextract arity=3 sw=1 delay=0.08 area=0.003
op concat arity=var sw=1 delay=0.04 area=0.002
group cti btrue bfalse beq bne jmp cal ret
group mem lod str
)";

// Integer DLX-style assembly IR. The six control-transfer instructions are
// forbidden from pattern formation by default.
const char kIdlx[] = R"(machine idlx
clock 1.0
memports read=1 write=1 cycles=1 local=1
op nop arity=0 sw=1 delay=0.01 area=0
op add arity=2 sw=1 delay=0.5 area=0.031 flags=comm
op addi arity=2 sw=1 delay=0.5 area=0.026
op sub arity=2 sw=1 delay=0.5 area=0.031
op subi arity=2 sw=1 delay=0.5 area=0.026
op and arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op andi arity=2 sw=1 delay=0.2 area=0.005
op or arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op ori arity=2 sw=1 delay=0.2 area=0.005
op xor arity=2 sw=1 delay=0.2 area=0.008 flags=comm
op xori arity=2 sw=1 delay=0.2 area=0.005
op sll arity=2 sw=1 delay=0.8 area=0.14
op srl arity=2 sw=1 delay=0.8 area=0.14
op sra arity=2 sw=1 delay=0.8 area=0.14
op slli arity=2 sw=1 delay=0.3 area=0.012
op srli arity=2 sw=1 delay=0.3 area=0.012
op srai arity=2 sw=1 delay=0.3 area=0.012
op mult arity=2 sw=1 delay=1 area=1 flags=comm
op slt arity=2 sw=1 delay=0.5 area=0.025
op slti arity=2 sw=1 delay=0.5 area=0.02
op seq arity=2 sw=1 delay=0.4 area=0.02 flags=comm
op sne arity=2 sw=1 delay=0.4 area=0.02 flags=comm
op sle arity=2 sw=1 delay=0.5 area=0.025
op sgt arity=2 sw=1 delay=0.5 area=0.025
op lhi arity=1 sw=1 delay=0.05 area=0.001
op lw arity=2 sw=1 delay=1 area=0.01 flags=load
op lh arity=2 sw=1 delay=1 area=0.01 flags=load
op lb arity=2 sw=1 delay=1 area=0.01 flags=load
op sw arity=2 sw=1 delay=1 area=0.01 flags=store
op sh arity=2 sw=1 delay=1 area=0.01 flags=store
op sb arity=2 sw=1 delay=1 area=0.01 flags=store
op beqz arity=2 sw=1 delay=0.3 area=0.02 flags=cti,forbidden-default
op bnez arity=2 sw=1 delay=0.3 area=0.02 flags=cti,forbidden-default
op j arity=1 sw=1 delay=0.1 area=0.005 flags=cti,forbidden-default
op jr arity=1 sw=1 delay=0.1 area=0.005 flags=cti,forbidden-default
op jal arity=1 sw=1 delay=0.1 area=0.005 flags=cti,forbidden-default
op jalr arity=1 sw=1 delay=0.1 area=0.005 flags=cti,forbidden-default
group cti beqz bnez j jr jal jalr
group mem lw lh lb sw sh sb
)";

}  // namespace

std::vector<std::string> builtin_machine_names() {
  return {"suifvmenh", "idlx"};
}

const MachineDesc& builtin_machine(const std::string& name) {
  static const std::map<std::string, MachineDesc> machines = [] {
    std::map<std::string, MachineDesc> m;
    m.emplace("suifvmenh", parse_bxir(kSuifVmEnh));
    m.emplace("idlx", parse_bxir(kIdlx));
    return m;
  }();
  auto it = machines.find(name);
  if (it == machines.end())
    throw Error("unknown built-in machine '" + name + "'");
  return it->second;
}

}  // namespace ciex
