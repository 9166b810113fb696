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

#include "ciex/corpus.hpp"

#include <algorithm>

#include "ciex/error.hpp"
#include "ciex/iseq.hpp"

namespace ciex {

std::uint64_t Rng::next() {
  // xorshift64*
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545f4914f6cdd1dULL;
}

std::uint64_t Rng::below(std::uint64_t n) { return n ? next() % n : 0; }

double Rng::real() { return (double)(next() >> 11) / 9007199254740992.0; }

std::pair<Program, Profile> random_corpus(const CorpusSpec& spec,
                                          const MachineDesc& md) {
  Rng rng(spec.seed);

  // Plain computational operators: no memory, control or special flags.
  std::vector<const OperatorSpec*> pool;
  for (const auto& op : md.ops())
    if (!op.is_mem() && !op.is_cti() && !op.forbidden_default() &&
        !op.variadic && op.arity >= 1 && op.arity <= 3)
      pool.push_back(&op);
  if (pool.empty()) throw Error("machine has no plain operators");
  const OperatorSpec* load = nullptr;
  const OperatorSpec* store = nullptr;
  for (const auto& op : md.ops()) {
    if (op.is_load() && load == nullptr) load = &op;
    if (op.is_store() && store == nullptr) store = &op;
  }

  Program prog;
  prog.name = "rand" + std::to_string(spec.seed);
  prog.procedures.push_back({});
  Procedure& proc = prog.procedures.back();
  proc.name = "f";
  Profile profile;

  for (int b = 0; b < spec.blocks; ++b) {
    BasicBlock bb;
    bb.label = "L" + std::to_string(b);
    int n = spec.min_nodes +
            (int)rng.below((std::uint64_t)(spec.max_nodes - spec.min_nodes + 1));
    std::vector<std::string> temps;  // defined register values, in order

    auto pick_src = [&](int width) -> Operand {
      if (!temps.empty() && rng.real() < spec.reuse_fraction)
        return Operand::reg(temps[rng.below(temps.size())], width);
      if (rng.real() < spec.const_fraction)
        return Operand::cst((std::int64_t)rng.below(256), width);
      return Operand::reg("b" + std::to_string(b) + "v" +
                              std::to_string(rng.below(6)),
                          width);
    };

    for (int i = 0; i < n; ++i) {
      Instruction in;
      in.id = i;
      bool mem = (load != nullptr) && rng.real() < spec.mem_fraction;
      if (mem && store != nullptr && rng.below(3) == 0) {
        in.opcode = store->mnemonic;
        in.dests.push_back(
            Operand::mem("g" + std::to_string(rng.below(4)), 32));
        in.srcs.push_back(pick_src(32));
      } else if (mem) {
        in.opcode = load->mnemonic;
        std::string t = "b" + std::to_string(b) + "t" + std::to_string(i);
        in.dests.push_back(Operand::reg(t, 32));
        in.srcs.push_back(
            Operand::mem("g" + std::to_string(rng.below(4)), 32));
        temps.push_back(t);
      } else {
        const OperatorSpec* op = pool[rng.below(pool.size())];
        in.opcode = op->mnemonic;
        std::string t = "b" + std::to_string(b) + "t" + std::to_string(i);
        in.dests.push_back(Operand::reg(t, 32));
        for (int k = 0; k < op->arity; ++k) in.srcs.push_back(pick_src(32));
        temps.push_back(t);
      }
      bb.instructions.push_back(std::move(in));
    }
    proc.blocks.push_back(std::move(bb));
    profile.add(proc.name, "L" + std::to_string(b),
                rng.below(spec.max_freq + 1));
  }

  declare_symbols(prog);
  attach_ddg(prog, md);
  return {std::move(prog), std::move(profile)};
}

}  // namespace ciex
