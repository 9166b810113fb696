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

#ifndef CIEX_SELECT_HPP
#define CIEX_SELECT_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ciex/isomatch.hpp"

namespace ciex {

enum class Metric { CycleGain, CycleGainPerArea };

const char* to_string(Metric m);

/// Instruction nodes already claimed by selected instances, per
/// (procedure, block).
using ClaimMap = std::map<std::pair<std::string, std::string>, std::set<int>>;

/// Priority of a class over its unclaimed instances: sum of P*f, divided
/// by the class area under the per-area metric. Zero-area classes rank
/// above every finite priority under the per-area metric.
double class_priority(const CandidateClass& cls, Metric metric,
                      const ClaimMap* claimed = nullptr);

struct SelectLimits {
  unsigned max_classes = kUnlimited;
  double area_budget = std::numeric_limits<double>::infinity();
};

struct SelectionStep {
  int class_id = 0;
  double priority = 0.0;
  long long gain = 0;   // P*f claimed by this pick
  double area = 0.0;    // class area
  double cum_speedup = 1.0;
  double cum_area = 0.0;
};

struct Selection {
  std::vector<int> chosen;                   // class ids in pick order
  std::map<int, std::vector<int>> claimed;   // class id -> instance indices
  long long total_gain = 0;
  double total_area = 0.0;
  std::vector<SelectionStep> curve;
};

/// Greedy selection: repeatedly pick the highest-priority class with at
/// least one unclaimed instance that fits the remaining budget, claim its
/// non-overlapping instances in canonical order, and record a curve point.
/// Priorities are recomputed over unclaimed instances after every pick
/// unless `recompute` is false. Stops at the limits or when no class has
/// positive priority. `base_cycles` is only used for the cumulative
/// speedup column.
Selection greedy_select(const std::vector<CandidateClass>& classes,
                        Metric metric, const SelectLimits& limits,
                        long long base_cycles, bool recompute = true);

/// Exact 0-1 knapsack over (value = sum of P*f, weight = area) with area
/// discretized at 1e-3 MAU. Overlapping instances are pruned first by one
/// greedy pass in cycle-gain order so every class value is realizable.
/// Ties break toward the lexicographically smallest class-id set.
/// Throws Error for a negative budget.
Selection knapsack_select(const std::vector<CandidateClass>& classes,
                          double area_budget, long long base_cycles);

/// Minimal number of selection steps reaching at least 95% of the final
/// speedup (0 for an empty selection).
int steps_to_95pct(const Selection& sel);

}  // namespace ciex

#endif  // CIEX_SELECT_HPP
