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

#ifndef CIEX_ESTIMATE_HPP
#define CIEX_ESTIMATE_HPP

#include <span>
#include <vector>

#include "ciex/cigen.hpp"
#include "ciex/isomatch.hpp"

namespace ciex {

// Memory models:
//   noMEM     patterns contain no load/store nodes at all;
//   CDM       the unit accesses shared data memory, every load/store costs
//             mem_cycles and all memory nodes execute in a serial chain in
//             program order;
//   idealCAM  accesses go to local storage at local_access_cycles each,
//             with no serialization beyond true dependences.
struct MemModel {
  MemMode mode = MemMode::NoMem;
  int mem_cycles = 1;
  int local_access_cycles = 1;
  int read_ports = 1;
  int write_ports = 1;
  // Replace the total serialization under CDM with a per-cycle port
  // capacity limit only.
  bool ports_only = false;

  static MemModel from(const MachineDesc& md, MemMode mode);

  int access_cycles() const {
    return mode == MemMode::IdealCam ? local_access_cycles : mem_cycles;
  }
};

/// Cycles of a sequential (one instruction at a time) schedule: the sum of
/// software cycles, with loads/stores costed at the model's access latency.
int seq_cycles(const PatternGraph& g, const MachineDesc& md,
               const MemModel& mem);
int seq_cycles(const BasicBlock& bb, const MachineDesc& md,
               const MemModel& mem, std::span<const int> nodes);
int seq_cycles(const BasicBlock& bb, const MachineDesc& md,
               const MemModel& mem);

/// As-soon-as-possible schedule length in cycles with unlimited functional
/// units. Dependent sub-cycle operators chain within a clock period;
/// operators longer than one period occupy whole cycles. Memory nodes cost
/// the model's access latency and, under CDM, form a serial chain in
/// program order (or compete for ports when ports_only is set).
int asap_cycles(const PatternGraph& g, const MachineDesc& md,
                const MemModel& mem);

/// Sum of per-node hardware area, in MAU.
double ci_area(const PatternGraph& g, const MachineDesc& md);

/// Fills a class's cost fields: ci_cycles and area from the
/// representative, per-instance gain P = seq_cycles - ci_cycles, and
/// instance frequencies from `profile` when given.
void estimate_class(CandidateClass& cls, const MachineDesc& md,
                    const MemModel& mem, const Profile* profile = nullptr);
void estimate_classes(std::vector<CandidateClass>& classes,
                      const MachineDesc& md, const MemModel& mem,
                      const Profile* profile = nullptr);

/// Whole-application speedup for a claimed cycle gain against the base
/// software cycles B: B / (B - gain). B = 0 yields 1.0; a non-positive
/// denominator throws Error.
double app_speedup(long long base_cycles, long long total_gain);

}  // namespace ciex

#endif  // CIEX_ESTIMATE_HPP
