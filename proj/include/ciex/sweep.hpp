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

#ifndef CIEX_SWEEP_HPP
#define CIEX_SWEEP_HPP

#include <string>
#include <vector>

#include "ciex/cigen.hpp"
#include "ciex/select.hpp"

namespace ciex {

/// Selection policies swept over: the two greedy metrics plus the knapsack
/// selector.
enum class SelectorKind { Gain, GainPerArea, Knapsack };

const char* to_string(SelectorKind s);

/// Axes of a constraint sweep; the cartesian product is explored.
struct SweepConfig {
  std::vector<unsigned> ni{kUnlimited};
  std::vector<unsigned> no{kUnlimited};
  std::vector<GenMethod> methods{GenMethod::Mimo};
  std::vector<MemMode> mems{MemMode::NoMem};
  std::vector<SelectorKind> selectors{SelectorKind::Gain};
  std::vector<double> budgets{std::numeric_limits<double>::infinity()};
  Constraints base;  // forbidden set, exhaustive flag, caps

  std::size_t product_size() const {
    return ni.size() * no.size() * methods.size() * mems.size() *
           selectors.size() * budgets.size();
  }
};

/// Runs generation, dedup, estimation and selection for every
/// configuration and returns one CSV row per configuration, canonically
/// ordered. Per-row failures land in the error column and the run
/// continues.
std::string run_sweep(const Program& prog, const Profile& profile,
                      const MachineDesc& md, const SweepConfig& cfg);

}  // namespace ciex

#endif  // CIEX_SWEEP_HPP
