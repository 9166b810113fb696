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

#include "ciex/select.hpp"

#include <algorithm>
#include <cmath>

#include "ciex/error.hpp"
#include "ciex/estimate.hpp"

namespace ciex {

const char* to_string(Metric m) {
  return m == Metric::CycleGain ? "gain" : "gain-per-area";
}

namespace {

bool instance_unclaimed(const Instance& inst, const ClaimMap& claimed) {
  auto it = claimed.find({inst.proc, inst.block});
  if (it == claimed.end()) return true;
  for (int n : inst.nodes)
    if (it->second.count(n)) return false;
  return true;
}

long long unclaimed_gain(const CandidateClass& cls, const ClaimMap* claimed,
                         int* count = nullptr) {
  long long sum = 0;
  int k = 0;
  for (const Instance& inst : cls.instances) {
    if (claimed != nullptr && !instance_unclaimed(inst, *claimed)) continue;
    sum += inst.gain * (long long)inst.freq;
    ++k;
  }
  if (count != nullptr) *count = k;
  return sum;
}

}  // namespace

double class_priority(const CandidateClass& cls, Metric metric,
                      const ClaimMap* claimed) {
  long long sum = unclaimed_gain(cls, claimed);
  if (metric == Metric::CycleGain) return (double)sum;
  if (cls.area > 0.0) return (double)sum / cls.area;
  // Zero-area classes rank above every finite priority when they carry
  // positive gain.
  return sum > 0 ? std::numeric_limits<double>::infinity() : (double)sum;
}

namespace {

// Claims the class's instances in canonical order, skipping overlaps, and
// returns the gain claimed.
long long claim_instances(const CandidateClass& cls, ClaimMap& claimed,
                          std::vector<int>& taken) {
  long long gained = 0;
  for (std::size_t i = 0; i < cls.instances.size(); ++i) {
    const Instance& inst = cls.instances[i];
    if (!instance_unclaimed(inst, claimed)) continue;
    auto& nodes = claimed[{inst.proc, inst.block}];
    for (int n : inst.nodes) nodes.insert(n);
    gained += inst.gain * (long long)inst.freq;
    taken.push_back((int)i);
  }
  return gained;
}

}  // namespace

Selection greedy_select(const std::vector<CandidateClass>& classes,
                        Metric metric, const SelectLimits& limits,
                        long long base_cycles, bool recompute) {
  Selection sel;
  ClaimMap claimed;
  double budget = limits.area_budget;
  std::set<int> chosen_ids;

  // Frozen pick order for the no-recompute mode.
  std::vector<int> frozen;
  if (!recompute) {
    frozen.resize(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) frozen[i] = (int)i;
    std::stable_sort(frozen.begin(), frozen.end(), [&](int a, int b) {
      return class_priority(classes[a], metric, nullptr) >
             class_priority(classes[b], metric, nullptr);
    });
  }
  std::size_t frozen_pos = 0;

  while (sel.chosen.size() < limits.max_classes) {
    int best = -1;
    double best_pri = 0.0;
    if (recompute) {
      for (std::size_t i = 0; i < classes.size(); ++i) {
        if (chosen_ids.count((int)i)) continue;
        if (classes[i].area > budget + 1e-12) continue;
        int avail = 0;
        long long sum = unclaimed_gain(classes[i], &claimed, &avail);
        if (avail == 0) continue;
        double pri = metric == Metric::CycleGain ? (double)sum
                     : classes[i].area > 0.0
                         ? (double)sum / classes[i].area
                         : (sum > 0 ? std::numeric_limits<double>::infinity()
                                    : (double)sum);
        if (best == -1 || pri > best_pri) {
          best = (int)i;
          best_pri = pri;
        }
      }
      if (best == -1 || best_pri <= 0.0) break;
    } else {
      while (frozen_pos < frozen.size()) {
        int i = frozen[frozen_pos];
        double pri = class_priority(classes[i], metric, nullptr);
        if (pri <= 0.0) {
          frozen_pos = frozen.size();
          break;
        }
        int avail = 0;
        unclaimed_gain(classes[i], &claimed, &avail);
        if (classes[i].area <= budget + 1e-12 && avail > 0) {
          best = i;
          best_pri = pri;
          ++frozen_pos;
          break;
        }
        ++frozen_pos;
      }
      if (best == -1) break;
    }

    const CandidateClass& cls = classes[best];
    std::vector<int> taken;
    long long gained = claim_instances(cls, claimed, taken);
    chosen_ids.insert(best);
    if (taken.empty()) continue;  // picked with nothing left to claim

    sel.chosen.push_back(cls.id);
    sel.claimed[cls.id] = std::move(taken);
    sel.total_gain += gained;
    sel.total_area += cls.area;
    budget -= cls.area;

    SelectionStep step;
    step.class_id = cls.id;
    step.priority = best_pri;
    step.gain = gained;
    step.area = cls.area;
    step.cum_speedup = app_speedup(base_cycles, sel.total_gain);
    step.cum_area = sel.total_area;
    sel.curve.push_back(step);
  }
  return sel;
}

Selection knapsack_select(const std::vector<CandidateClass>& classes,
                          double area_budget, long long base_cycles) {
  if (area_budget < 0) throw Error("negative area budget");

  Selection sel;
  if (classes.empty()) return sel;

  // Overlap pre-resolution: one greedy pass in cycle-gain priority order
  // claims instances so every class value is realizable independently.
  std::vector<int> order(classes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return class_priority(classes[a], Metric::CycleGain, nullptr) >
           class_priority(classes[b], Metric::CycleGain, nullptr);
  });
  ClaimMap claimed;
  std::vector<std::vector<int>> surviving(classes.size());
  std::vector<long long> value(classes.size(), 0);
  for (int i : order)
    value[i] = claim_instances(classes[i], claimed, surviving[i]);

  if (area_budget == 0) return sel;

  // Discretize weights at 1e-3 MAU.
  std::vector<long long> weight(classes.size());
  long long total_w = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    weight[i] = std::llround(classes[i].area * 1000.0);
    total_w += weight[i];
  }
  long long budget_w = std::isfinite(area_budget)
                           ? std::llround(area_budget * 1000.0)
                           : total_w;
  budget_w = std::min(budget_w, total_w);

  // Only positive-value items can help.
  std::vector<int> items;
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (value[i] > 0) items.push_back((int)i);

  const int m = (int)items.size();
  const long long w_max = budget_w;
  // best[k][w]: optimum over items k.. with capacity w.
  std::vector<std::vector<long long>> best(m + 1,
                                           std::vector<long long>(w_max + 1, 0));
  for (int k = m - 1; k >= 0; --k) {
    long long wi = weight[items[k]];
    long long vi = value[items[k]];
    for (long long w = 0; w <= w_max; ++w) {
      long long b = best[k + 1][w];
      if (wi <= w) b = std::max(b, vi + best[k + 1][w - wi]);
      best[k][w] = b;
    }
  }

  // Walk forward, preferring inclusion on ties: that yields the
  // lexicographically smallest class-id set among the optima.
  long long w = w_max;
  for (int k = 0; k < m; ++k) {
    long long wi = weight[items[k]];
    long long vi = value[items[k]];
    if (wi <= w && vi + best[k + 1][w - wi] == best[k][w]) {
      int idx = items[k];
      sel.chosen.push_back(classes[idx].id);
      sel.claimed[classes[idx].id] = surviving[idx];
      sel.total_gain += value[idx];
      sel.total_area += classes[idx].area;
      w -= wi;

      SelectionStep step;
      step.class_id = classes[idx].id;
      step.priority = (double)value[idx];
      step.gain = value[idx];
      step.area = classes[idx].area;
      step.cum_speedup = app_speedup(base_cycles, sel.total_gain);
      step.cum_area = sel.total_area;
      sel.curve.push_back(step);
    }
  }
  return sel;
}

int steps_to_95pct(const Selection& sel) {
  if (sel.curve.empty()) return 0;
  double target = 0.95 * sel.curve.back().cum_speedup;
  for (std::size_t i = 0; i < sel.curve.size(); ++i)
    if (sel.curve[i].cum_speedup >= target - 1e-12) return (int)i + 1;
  return (int)sel.curve.size();
}

}  // namespace ciex
