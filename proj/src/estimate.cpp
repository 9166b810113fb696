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

#include "ciex/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ciex/error.hpp"

namespace ciex {

namespace {
constexpr double kEps = 1e-9;

int ceil_div_units(double units, double clock) {
  return (int)std::ceil(units / clock - kEps);
}
}  // namespace

MemModel MemModel::from(const MachineDesc& md, MemMode mode) {
  MemModel m;
  m.mode = mode;
  m.mem_cycles = md.memports.mem_cycles;
  m.local_access_cycles = md.memports.local_access_cycles;
  m.read_ports = md.memports.read_ports;
  m.write_ports = md.memports.write_ports;
  return m;
}

int seq_cycles(const PatternGraph& g, const MachineDesc& md,
               const MemModel& mem) {
  (void)md;
  int total = 0;
  for (const auto& n : g.nodes())
    total += n.is_mem() ? mem.access_cycles() : n.sw_cycles;
  return total;
}

int seq_cycles(const BasicBlock& bb, const MachineDesc& md,
               const MemModel& mem, std::span<const int> nodes) {
  int total = 0;
  for (int id : nodes) {
    const OperatorSpec& spec = md.lookup_op(bb.instructions[id].opcode);
    total += spec.is_mem() ? mem.access_cycles() : spec.sw_cycles;
  }
  return total;
}

int seq_cycles(const BasicBlock& bb, const MachineDesc& md,
               const MemModel& mem) {
  std::vector<int> all(bb.instructions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  return seq_cycles(bb, md, mem, all);
}

int asap_cycles(const PatternGraph& g, const MachineDesc& md,
                const MemModel& mem) {
  const double clock = md.clock;
  const int n = g.size();
  if (n == 0) return 0;

  std::vector<double> finish(n, 0.0);
  int mem_chain_free = 0;  // next free cycle of the serialized memory chain
  // ports_only: per-cycle port occupancy instead of total serialization.
  std::map<int, int> reads_at, writes_at;

  double makespan = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& node = g.nodes()[i];
    double avail = 0.0;
    for (int p : g.preds(i)) avail = std::max(avail, finish[p]);

    double f;
    if (node.is_mem()) {
      int acc = mem.access_cycles();
      if (acc == 0) {
        f = avail;  // free local access degenerates to a wire
      } else {
        int start = ceil_div_units(avail, clock);
        if (mem.mode == MemMode::Cdm) {
          if (mem.ports_only) {
            auto& used = node.is_load() ? reads_at : writes_at;
            int cap = node.is_load() ? mem.read_ports : mem.write_ports;
            for (;;) {
              bool fits = true;
              for (int c = start; c < start + acc; ++c)
                if (used[c] >= cap) {
                  fits = false;
                  break;
                }
              if (fits) break;
              ++start;
            }
            for (int c = start; c < start + acc; ++c) ++used[c];
          } else {
            // Loads and stores always serialize, in program order.
            start = std::max(start, mem_chain_free);
            mem_chain_free = start + acc;
          }
        }
        f = (start + acc) * clock;
      }
    } else {
      double d = node.hw_delay;
      if (d > clock + kEps) {
        // Multi-cycle unit: whole cycles, boundary aligned.
        double s = ceil_div_units(avail, clock) * clock;
        f = s + ceil_div_units(d, clock) * clock;
      } else {
        // Chain into the current cycle when the remaining slack allows.
        double boundary = (std::floor(avail / clock + kEps) + 1.0) * clock;
        f = (avail + d <= boundary + kEps) ? avail + d : boundary + d;
      }
    }
    finish[i] = f;
    makespan = std::max(makespan, f);
  }
  int cycles = ceil_div_units(makespan, clock);
  return std::max(cycles, 1);
}

double ci_area(const PatternGraph& g, const MachineDesc& md) {
  (void)md;
  double a = 0.0;
  for (const auto& n : g.nodes()) a += n.hw_area;
  return a;
}

void estimate_class(CandidateClass& cls, const MachineDesc& md,
                    const MemModel& mem, const Profile* profile) {
  if (mem.mode == MemMode::NoMem) {
    for (const auto& n : cls.rep.graph.nodes())
      if (n.is_mem())
        throw Error("memory operation '" + n.opcode +
                    "' in a pattern under the noMEM model");
  }
  cls.ci_cycles = asap_cycles(cls.rep.graph, md, mem);
  cls.seq_cycles = seq_cycles(cls.rep.graph, md, mem);
  cls.area = ci_area(cls.rep.graph, md);
  for (Instance& inst : cls.instances) {
    if (profile != nullptr) inst.freq = profile->get(inst.proc, inst.block);
    // Instances are isomorphic to the representative, so their sequential
    // schedules coincide.
    inst.gain = cls.seq_cycles - cls.ci_cycles;
  }
  cls.estimated = true;
}

void estimate_classes(std::vector<CandidateClass>& classes,
                      const MachineDesc& md, const MemModel& mem,
                      const Profile* profile) {
  for (auto& cls : classes) estimate_class(cls, md, mem, profile);
}

double app_speedup(long long base_cycles, long long total_gain) {
  if (base_cycles == 0) return 1.0;
  long long denom = base_cycles - total_gain;
  if (denom <= 0)
    throw Error("claimed gain " + std::to_string(total_gain) +
                " exceeds base cycles " + std::to_string(base_cycles));
  return (double)base_cycles / (double)denom;
}

}  // namespace ciex
