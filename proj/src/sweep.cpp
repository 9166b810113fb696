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

#include "ciex/sweep.hpp"

#include <cmath>

#include "ciex/error.hpp"
#include "ciex/estimate.hpp"
#include "ciex/exporters.hpp"

namespace ciex {

const char* to_string(SelectorKind s) {
  switch (s) {
    case SelectorKind::Gain: return "gain";
    case SelectorKind::GainPerArea: return "gain-per-area";
    case SelectorKind::Knapsack: return "knapsack";
  }
  return "?";
}

namespace {

std::string limit_str(unsigned v) {
  return v == kUnlimited ? "inf" : std::to_string(v);
}

std::string budget_str(double v) {
  return std::isfinite(v) ? format_real(v) : "inf";
}

}  // namespace

std::string run_sweep(const Program& prog, const Profile& profile,
                      const MachineDesc& md, const SweepConfig& cfg) {
  std::string csv =
      "ni,no,method,mem,selector,budget,classes,selected,speedup,area,"
      "step95,error\n";

  long long base = program_stats(prog, profile, md).base_cycles;

  for (unsigned ni : cfg.ni)
    for (unsigned no : cfg.no)
      for (GenMethod method : cfg.methods)
        for (MemMode mem : cfg.mems)
          for (SelectorKind selkind : cfg.selectors)
            for (double budget : cfg.budgets) {
              std::string row = limit_str(ni) + "," + limit_str(no) + "," +
                                to_string(method) + "," + to_string(mem) +
                                "," + to_string(selkind) + "," +
                                budget_str(budget);
              std::string error;
              try {
                Constraints c = cfg.base;
                c.max_inputs = ni;
                c.max_outputs = no;
                c.method = method;
                c.mem_mode = mem;
                Candidates cand = gen_program(prog, profile, md, c);
                if (cand.cap_exceeded) error = "enumeration-cap-exceeded";

                auto classes =
                    dedup(materialize(cand.patterns, prog, md), {});
                MemModel model = MemModel::from(md, mem);
                estimate_classes(classes, md, model, &profile);

                Selection sel;
                if (selkind == SelectorKind::Knapsack) {
                  sel = knapsack_select(classes, budget, base);
                } else {
                  Metric metric = selkind == SelectorKind::Gain
                                      ? Metric::CycleGain
                                      : Metric::CycleGainPerArea;
                  SelectLimits limits;
                  limits.area_budget = budget;
                  sel = greedy_select(classes, metric, limits, base);
                }
                row += "," + std::to_string(classes.size()) + "," +
                       std::to_string(sel.chosen.size()) + "," +
                       format_real(app_speedup(base, sel.total_gain)) + "," +
                       format_real(sel.total_area) + "," +
                       std::to_string(steps_to_95pct(sel));
              } catch (const std::exception& e) {
                row += ",0,0,1,0,0";
                error = e.what();
              }
              csv += row + "," + error + "\n";
            }
  return csv;
}

}  // namespace ciex
