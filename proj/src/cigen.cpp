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

#include "ciex/cigen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ciex/error.hpp"

namespace ciex {

const char* to_string(MemMode m) {
  switch (m) {
    case MemMode::NoMem: return "nomem";
    case MemMode::Cdm: return "cdm";
    case MemMode::IdealCam: return "idealcam";
  }
  return "?";
}

const char* to_string(GenMethod m) {
  switch (m) {
    case GenMethod::MaxMiso: return "maxmiso";
    case GenMethod::Miso: return "miso";
    case GenMethod::Mimo: return "mimo";
  }
  return "?";
}

Constraints Constraints::resolved(const MachineDesc& md) const {
  Constraints out = *this;
  std::set<std::string> expanded;
  for (const auto& f : forbidden) {
    auto members = md.expand(f);
    expanded.insert(members.begin(), members.end());
  }
  auto defaults = md.forbidden_defaults();
  expanded.insert(defaults.begin(), defaults.end());
  if (mem_mode == MemMode::NoMem) {
    auto mem = md.memory_ops();
    expanded.insert(mem.begin(), mem.end());
  }
  out.forbidden = std::move(expanded);
  return out;
}

namespace {

struct BlockView {
  const BasicBlock* bb;
  const MachineDesc* md;
  const Constraints* c;
  const LivenessContext* live;
  std::vector<char> allowed;  // per node: opcode not forbidden
  // Register-flow producers per node and consumers per node (value flow),
  // plus memory-order successors.
  std::vector<std::vector<int>> value_preds;
  std::vector<std::vector<int>> value_succs;
  std::vector<std::vector<int>> mem_succs;

  BlockView(const BasicBlock& block, const MachineDesc& machine,
            const Constraints& cons, const LivenessContext& liveness)
      : bb(&block), md(&machine), c(&cons), live(&liveness) {
    int n = block.size();
    allowed.resize(n);
    value_preds.resize(n);
    value_succs.resize(n);
    mem_succs.resize(n);
    for (int i = 0; i < n; ++i)
      allowed[i] = !cons.forbidden.count(block.instructions[i].opcode);
    for (const DepEdge& e : block.edges) {
      if (e.kind == DepKind::RegisterFlow) {
        value_preds[e.consumer].push_back(e.producer);
        value_succs[e.producer].push_back(e.consumer);
      } else {
        mem_succs[e.producer].push_back(e.consumer);
      }
    }
    for (auto& v : value_preds) dedup(v);
    for (auto& v : value_succs) dedup(v);
    for (auto& v : mem_succs) dedup(v);
  }

  static void dedup(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  bool is_mem(int id) const {
    return md->lookup_op(bb->instructions[id].opcode).is_mem();
  }

  Pattern make_pattern(const std::vector<int>& nodes) const {
    Pattern p;
    p.nodes = nodes;
    p.operands =
        collect_operands(*bb, *md, nodes, c->unique_operands, *live);
    for (int id : nodes)
      if (is_mem(id)) ++p.mem_ops;
    return p;
  }

  // Operand-count feasibility; checked at emission because adding a node
  // can reduce the input count (it may produce a former input).
  bool feasible(const std::vector<int>& nodes, Pattern* out) const {
    Pattern p = make_pattern(nodes);
    OperandList uniq = p.operands;
    if (!uniq.unique)
      uniq = collect_operands(*bb, *md, nodes, true, *live);
    if (uniq.inputs.size() > c->max_inputs) return false;
    if (uniq.outputs.size() > c->max_outputs) return false;
    if (uniq.consts.size() > c->max_consts) return false;
    if (out) *out = std::move(p);
    return true;
  }
};

void sort_patterns(std::vector<Pattern>& pats) {
  std::sort(pats.begin(), pats.end(),
            [](const Pattern& a, const Pattern& b) { return a.nodes < b.nodes; });
}

}  // namespace

GenResult gen_maxmiso(const BasicBlock& bb, const MachineDesc& md,
                      const Constraints& c, const LivenessContext& live) {
  BlockView view(bb, md, c, live);
  int n = bb.size();

  std::map<std::string, int> last_def;
  for (const auto& in : bb.instructions)
    for (const Operand* d : reg_defs(in, md)) last_def[d->name] = in.id;

  // owner[i]: root of the maximal single-output subgraph containing i.
  // A node roots its own subgraph when its value is visible outside the
  // block (or dead, or consumed by a forbidden node); otherwise it joins
  // its consumers' subgraph when they all agree.
  std::vector<int> owner(n, -1);
  for (int id = n - 1; id >= 0; --id) {
    if (!view.allowed[id]) continue;
    const Instruction& in = bb.instructions[id];
    auto defs = reg_defs(in, md);

    bool visible = defs.empty() && view.mem_succs[id].empty();
    for (const Operand* d : defs) {
      bool consumed = false;
      for (const DepEdge& e : bb.edges)
        if (e.kind == DepKind::RegisterFlow && e.producer == id &&
            e.via.name == d->name) {
          consumed = true;
          break;
        }
      if (!consumed) visible = true;
      if (live.cross_block.count(d->name) && last_def[d->name] == id)
        visible = true;
    }
    // Stores join nothing: they produce no value.
    if (md.lookup_op(in.opcode).is_store()) visible = true;

    int merged = -2;  // -2 unset, -1 conflict
    if (!visible) {
      std::vector<int> succs = view.value_succs[id];
      succs.insert(succs.end(), view.mem_succs[id].begin(),
                   view.mem_succs[id].end());
      for (int s : succs) {
        if (!view.allowed[s]) {
          merged = -1;
          break;
        }
        int o = owner[s];
        if (merged == -2) merged = o;
        else if (merged != o) merged = -1;
        if (merged == -1) break;
      }
      if (succs.empty()) merged = -1;
    }
    owner[id] = (!visible && merged >= 0) ? merged : id;
  }

  std::map<int, std::vector<int>> groups;
  for (int id = 0; id < n; ++id)
    if (owner[id] >= 0) groups[owner[id]].push_back(id);

  GenResult res;
  for (auto& [root, nodes] : groups) {
    std::sort(nodes.begin(), nodes.end());
    Pattern p;
    if (c.max_inputs == kUnlimited && c.max_outputs == kUnlimited &&
        c.max_consts == kUnlimited) {
      p = view.make_pattern(nodes);
    } else if (!view.feasible(nodes, &p)) {
      continue;  // operand bounds only filter the partition
    }
    res.patterns.push_back(std::move(p));
  }
  sort_patterns(res.patterns);
  return res;
}

namespace {

// Rooted single-output growth. Extensions add a producer of a current
// input with an id below every previously added node; each valid set is
// then reached exactly once (by descending addition order).
struct MisoEnum {
  const BlockView& view;
  const Constraints& c;
  GenResult* res;
  std::uint64_t visited = 0;

  bool grow(std::vector<int>& nodes, int min_added) {
    // nodes is kept sorted; candidates: producers of in-set nodes.
    std::set<int> cands;
    for (int id : nodes)
      for (int p : view.value_preds[id])
        if (p < min_added && view.allowed[p] &&
            !std::binary_search(nodes.begin(), nodes.end(), p))
          cands.insert(p);

    for (auto it = cands.rbegin(); it != cands.rend(); ++it) {
      int p = *it;
      if (++visited > c.enum_cap) return false;
      std::vector<int> next = nodes;
      next.insert(std::lower_bound(next.begin(), next.end(), p), p);
      if (!is_convex(*view.bb, next)) continue;
      OperandList ol = collect_operands(*view.bb, *view.md, next, true,
                                        *view.live);
      if (ol.outputs.size() > 1) continue;
      Pattern pat;
      if (next.size() <= c.max_nodes && view.feasible(next, &pat))
        res->patterns.push_back(std::move(pat));
      if (next.size() < c.max_nodes)
        if (!grow(next, p)) return false;
    }
    return true;
  }
};

}  // namespace

GenResult gen_miso(const BasicBlock& bb, const MachineDesc& md,
                   const Constraints& c, const LivenessContext& live) {
  BlockView view(bb, md, c, live);
  GenResult res;
  MisoEnum en{view, c, &res};

  for (int r = 0; r < bb.size(); ++r) {
    if (!view.allowed[r]) continue;
    std::vector<int> nodes{r};
    OperandList ol = collect_operands(bb, md, nodes, true, live);
    if (ol.outputs.size() <= 1) {
      Pattern pat;
      if (c.max_nodes >= 1 && view.feasible(nodes, &pat))
        res.patterns.push_back(std::move(pat));
      if (c.max_nodes > 1) {
        if (!en.grow(nodes, r)) {
          res.cap_exceeded = true;
          break;
        }
      }
    }
  }
  sort_patterns(res.patterns);
  return res;
}

namespace {

// Every convex set keeps convexity when its largest element is removed,
// so enumerating subsets by ascending-id extension and pruning non-convex
// partial sets visits exactly the convex sets.
struct MimoEnum {
  const BlockView& view;
  const Constraints& c;
  std::vector<std::vector<int>> found;  // feasible node sets
  std::uint64_t visited = 0;
  bool capped = false;

  void run() {
    std::vector<int> nodes;
    for (int first = 0; first < view.bb->size() && !capped; ++first) {
      if (!view.allowed[first]) continue;
      nodes.assign(1, first);
      if (view.feasible(nodes, nullptr)) found.push_back(nodes);
      if (c.max_nodes > 1) extend(nodes);
    }
  }

  void extend(std::vector<int>& nodes) {
    for (int next = nodes.back() + 1; next < view.bb->size(); ++next) {
      if (capped) return;
      if (!view.allowed[next]) continue;
      if (++visited > c.enum_cap) {
        capped = true;
        return;
      }
      nodes.push_back(next);
      if (is_convex(*view.bb, nodes)) {
        if (view.feasible(nodes, nullptr)) found.push_back(nodes);
        if (nodes.size() < c.max_nodes) extend(nodes);
      }
      nodes.pop_back();
    }
  }
};

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

GenResult gen_mimo(const BasicBlock& bb, const MachineDesc& md,
                   const Constraints& c, const LivenessContext& live) {
  BlockView view(bb, md, c, live);
  MimoEnum en{view, c, {}, 0, false};
  en.run();

  std::vector<std::vector<int>> keep;
  if (c.exhaustive) {
    keep = std::move(en.found);
  } else {
    // Dominance pruning: drop every feasible set strictly contained in
    // another feasible set. Under any additive non-negative gain model the
    // best maximal pattern matches the best overall.
    std::sort(en.found.begin(), en.found.end(),
              [](const auto& a, const auto& b) {
                return a.size() > b.size();
              });
    for (const auto& s : en.found) {
      bool dominated = false;
      for (const auto& k : keep) {
        if (k.size() <= s.size()) break;
        if (is_subset(s, k)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(s);
    }
  }

  GenResult res;
  res.cap_exceeded = en.capped;
  res.patterns.reserve(keep.size());
  for (const auto& nodes : keep) res.patterns.push_back(view.make_pattern(nodes));
  sort_patterns(res.patterns);
  return res;
}

Candidates gen_program(const Program& prog, const Profile& profile,
                       const MachineDesc& md, const Constraints& raw) {
  Constraints c = raw.resolved(md);
  Candidates out;
  for (const auto& proc : prog.procedures) {
    for (const auto& bb : proc.blocks) {
      LivenessContext live = LivenessContext::for_block(proc, bb, md);
      GenResult r;
      switch (c.method) {
        case GenMethod::MaxMiso: r = gen_maxmiso(bb, md, c, live); break;
        case GenMethod::Miso: r = gen_miso(bb, md, c, live); break;
        case GenMethod::Mimo: r = gen_mimo(bb, md, c, live); break;
      }
      if (r.cap_exceeded) {
        out.cap_exceeded = true;
        out.warnings.push_back("enumeration cap exceeded in " + proc.name +
                               "/" + bb.label + "; results are partial");
      }
      std::uint64_t f = profile.get(proc.name, bb.label);
      for (Pattern& p : r.patterns) {
        p.proc = proc.name;
        p.block = bb.label;
        p.freq = f;
        out.patterns.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace ciex
