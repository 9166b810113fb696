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

#include "ciex/isomatch.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ciex/error.hpp"
#include "ciex/iseq.hpp"

namespace ciex {

PatternGraph PatternGraph::build(const BasicBlock& bb, const MachineDesc& md,
                                 std::span<const int> nodes) {
  PatternGraph g;
  std::map<int, int> local;  // block id -> local index
  for (int id : nodes) {
    local[id] = static_cast<int>(g.nodes_.size());
    g.nodes_.push_back({});
  }

  // Register-flow producer per (consumer, register name).
  std::map<std::pair<int, std::string>, int> producer;
  for (const DepEdge& e : bb.edges)
    if (e.kind == DepKind::RegisterFlow)
      producer[{e.consumer, e.via.name}] = e.producer;

  std::map<std::string, int> input_ids;  // external register -> input index
  std::map<std::pair<bool, std::string>, int> sym_ids;  // (is_addr, name)

  auto make_slot = [&](const Operand& op, int consumer_id,
                       bool from_dest) -> Slot {
    Slot s;
    s.width = op.width;
    s.from_dest = from_dest;
    if (op.is_const()) {
      s.kind = Slot::Const;
      s.cvalue = op.value;
      return s;
    }
    if (op.is_mem() || op.is_addr()) {
      s.kind = Slot::MemRef;
      s.is_addr = op.is_addr();
      auto [it, _] = sym_ids.try_emplace({s.is_addr, op.name},
                                         (int)sym_ids.size());
      s.sym = it->second;
      return s;
    }
    auto p = producer.find({consumer_id, op.name});
    if (p != producer.end() && local.count(p->second)) {
      s.kind = Slot::Internal;
      s.producer = local[p->second];
      return s;
    }
    s.kind = Slot::Extern;
    auto [it, _] = input_ids.try_emplace(op.name, (int)input_ids.size());
    s.sym = it->second;
    return s;
  };

  for (int id : nodes) {
    const Instruction& in = bb.instructions[id];
    const OperatorSpec& spec = md.lookup_op(in.opcode);
    Node& n = g.nodes_[local[id]];
    n.opcode = in.opcode;
    n.flags = spec.flags;
    n.sw_cycles = spec.sw_cycles;
    n.hw_delay = spec.hw_delay;
    n.hw_area = spec.hw_area;
    n.orig_id = id;
    for (const auto& s : in.srcs) n.slots.push_back(make_slot(s, id, false));
    if (spec.is_store()) {
      // Store destinations are written memory references, kept as slots so
      // the address dataflow stays part of the shape.
      for (const auto& d : in.dests) n.slots.push_back(make_slot(d, id, true));
    } else {
      for (const auto& d : in.dests)
        if (d.is_reg()) n.dest_widths.push_back(d.width);
    }
  }

  for (const DepEdge& e : bb.edges)
    if (e.kind == DepKind::MemoryOrder && local.count(e.producer) &&
        local.count(e.consumer))
      g.mem_edges_.push_back({local[e.producer], local[e.consumer]});
  std::sort(g.mem_edges_.begin(), g.mem_edges_.end());
  g.mem_edges_.erase(std::unique(g.mem_edges_.begin(), g.mem_edges_.end()),
                     g.mem_edges_.end());
  return g;
}

std::vector<int> PatternGraph::preds(int i) const {
  std::vector<int> out;
  for (const Slot& s : nodes_[i].slots)
    if (s.kind == Slot::Internal) out.push_back(s.producer);
  for (const auto& [p, c] : mem_edges_)
    if (c == i) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t str_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace

std::uint64_t PatternGraph::shape_hash(const MatchOptions& opts) const {
  // Two refinement rounds over unordered neighbor labels; invariant under
  // any node relabeling, so unequal hashes imply non-isomorphic patterns.
  int n = size();
  std::vector<std::uint64_t> label(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t h = str_hash(nodes_[i].opcode);
    h = mix(h, nodes_[i].slots.size());
    h = mix(h, nodes_[i].dest_widths.size());
    for (const Slot& s : nodes_[i].slots) {
      std::uint64_t sh = (std::uint64_t)s.kind * 1000003ULL;
      if (s.kind == Slot::Const && opts.const_match == ConstMatch::Value)
        sh = mix(sh, (std::uint64_t)s.cvalue + 7 * (std::uint64_t)s.width);
      if (s.kind == Slot::MemRef) sh = mix(sh, s.is_addr ? 2 : 1);
      h += sh * 0x100000001b3ULL;  // order-independent accumulate
    }
    label[i] = h;
  }
  std::vector<std::vector<int>> mem_in(n), mem_out(n);
  for (auto [p, c] : mem_edges_) {
    mem_out[p].push_back(c);
    mem_in[c].push_back(p);
  }
  std::vector<std::vector<int>> consumers(n);
  for (int i = 0; i < n; ++i)
    for (const Slot& s : nodes_[i].slots)
      if (s.kind == Slot::Internal) consumers[s.producer].push_back(i);

  for (int round = 0; round < 2; ++round) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      std::uint64_t h = mix(label[i], 0xabcdef);
      std::uint64_t acc = 0;
      for (const Slot& s : nodes_[i].slots)
        if (s.kind == Slot::Internal) acc += label[s.producer] * 31ULL;
      for (int c : consumers[i]) acc += label[c] * 37ULL;
      for (int c : mem_out[i]) acc += label[c] * 41ULL;
      for (int p : mem_in[i]) acc += label[p] * 43ULL;
      next[i] = mix(h, acc);
    }
    label = std::move(next);
  }
  std::sort(label.begin(), label.end());
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (auto l : label) h = mix(h, l);
  return h;
}

namespace {

// Mutable matching state: node mapping plus the memory-symbol
// correspondence it induces.
struct MatchState {
  std::vector<int> map;      // p node -> q node or -1
  std::vector<char> used;    // q node taken
  std::map<int, int> sym_pq; // p mem-symbol -> q mem-symbol
  std::map<int, int> sym_qp;
};

bool slot_pair_ok(const PatternGraph::Slot& a, const PatternGraph::Slot& b,
                  const MatchOptions& opts, MatchState& st, bool induced_q) {
  using Slot = PatternGraph::Slot;
  if (a.from_dest != b.from_dest) return false;
  switch (a.kind) {
    case Slot::Const:
      if (b.kind != Slot::Const) return false;
      if (opts.const_match == ConstMatch::Value)
        return a.cvalue == b.cvalue && a.width == b.width;
      return true;
    case Slot::MemRef: {
      if (b.kind != Slot::MemRef || a.is_addr != b.is_addr) return false;
      auto it = st.sym_pq.find(a.sym);
      auto rit = st.sym_qp.find(b.sym);
      if (it != st.sym_pq.end()) return it->second == b.sym;
      if (rit != st.sym_qp.end()) return false;
      st.sym_pq[a.sym] = b.sym;
      st.sym_qp[b.sym] = a.sym;
      return true;
    }
    case Slot::Internal:
      if (b.kind != Slot::Internal) return false;
      // Producers are mapped before consumers (nodes are topological).
      return st.map[a.producer] == b.producer;
    case Slot::Extern:
      // External inputs are anonymous; for an induced embedding the
      // matched slot may also be fed by a q node outside the image, which
      // is checked after the mapping completes.
      if (b.kind == Slot::Extern) return true;
      if (!induced_q && b.kind == Slot::Internal) return true;
      return false;
  }
  return false;
}

// Slot lists of one node pair correspond, permuting commutative inputs.
bool node_slots_ok(const PatternGraph::Node& u, const PatternGraph::Node& v,
                   const MatchOptions& opts, MatchState& st, bool exact) {
  if (u.opcode != v.opcode) return false;
  if (u.slots.size() != v.slots.size()) return false;
  if (u.dest_widths.size() != v.dest_widths.size()) return false;

  auto try_order = [&](const std::vector<int>& order) {
    MatchState trial = st;
    for (std::size_t i = 0; i < u.slots.size(); ++i)
      if (!slot_pair_ok(u.slots[i], v.slots[order[i]], opts, trial, exact))
        return false;
    st = std::move(trial);
    return true;
  };

  std::vector<int> order(u.slots.size());
  std::iota(order.begin(), order.end(), 0);
  if (!u.commutative()) return try_order(order);
  do {
    if (try_order(order)) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

bool mem_edges_ok_incremental(const PatternGraph& p, const PatternGraph& q,
                              int u, int v, const MatchState& st) {
  // All memory predecessors of u are already mapped (edges go forward).
  for (const auto& [a, b] : p.mem_edges()) {
    if (b != u) continue;
    bool found = false;
    for (const auto& [x, y] : q.mem_edges())
      if (x == st.map[a] && y == v) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool iso_rec(const PatternGraph& p, const PatternGraph& q, int u,
             const MatchOptions& opts, MatchState& st) {
  if (u == p.size()) return true;
  for (int v = 0; v < q.size(); ++v) {
    if (st.used[v]) continue;
    MatchState saved = st;
    st.map[u] = v;
    st.used[v] = 1;
    if (node_slots_ok(p.nodes()[u], q.nodes()[v], opts, st, true) &&
        mem_edges_ok_incremental(p, q, u, v, st) &&
        iso_rec(p, q, u + 1, opts, st))
      return true;
    st = std::move(saved);
  }
  return false;
}

}  // namespace

bool iso_equal(const PatternGraph& p, const PatternGraph& q,
               const MatchOptions& opts) {
  if (p.size() != q.size()) return false;
  if (p.mem_edges().size() != q.mem_edges().size()) return false;
  MatchState st;
  st.map.assign(p.size(), -1);
  st.used.assign(q.size(), 0);
  return iso_rec(p, q, 0, opts, st);
}

namespace {

// Full induced check once a candidate embedding is complete.
bool verify_induced(const PatternGraph& p, const PatternGraph& q,
                    const MatchOptions& opts, const MatchState& st) {
  std::vector<char> in_image(q.size(), 0);
  for (int v : st.map) in_image[v] = 1;

  for (int u = 0; u < p.size(); ++u) {
    const auto& pu = p.nodes()[u];
    const auto& qv = q.nodes()[st.map[u]];
    // Re-derive a consistent slot correspondence with the final image:
    // matched Extern slots must not be fed from inside the image.
    auto final_slot_ok = [&](const PatternGraph::Slot& a,
                             const PatternGraph::Slot& b,
                             MatchState& trial) {
      if (a.kind == PatternGraph::Slot::Extern)
        return b.kind == PatternGraph::Slot::Extern ||
               (b.kind == PatternGraph::Slot::Internal &&
                !in_image[b.producer]);
      return slot_pair_ok(a, b, opts, trial, true);
    };
    std::vector<int> order(pu.slots.size());
    std::iota(order.begin(), order.end(), 0);
    bool ok = false;
    auto attempt = [&](const std::vector<int>& ord) {
      MatchState trial = st;
      for (std::size_t i = 0; i < pu.slots.size(); ++i)
        if (!final_slot_ok(pu.slots[i], qv.slots[ord[i]], trial))
          return false;
      return true;
    };
    if (pu.slots.size() != qv.slots.size()) return false;
    if (!pu.commutative()) {
      ok = attempt(order);
    } else {
      do {
        if ((ok = attempt(order))) break;
      } while (std::next_permutation(order.begin(), order.end()));
    }
    if (!ok) return false;
  }

  // Memory edges must biject between image pairs.
  std::vector<std::pair<int, int>> mapped;
  for (const auto& [a, b] : p.mem_edges())
    mapped.push_back({st.map[a], st.map[b]});
  std::sort(mapped.begin(), mapped.end());
  std::vector<std::pair<int, int>> q_internal;
  for (const auto& e : q.mem_edges())
    if (in_image[e.first] && in_image[e.second]) q_internal.push_back(e);
  std::sort(q_internal.begin(), q_internal.end());
  return mapped == q_internal;
}

bool sub_rec(const PatternGraph& p, const PatternGraph& q, int u,
             const MatchOptions& opts, MatchState& st) {
  if (u == p.size()) return verify_induced(p, q, opts, st);
  for (int v = 0; v < q.size(); ++v) {
    if (st.used[v]) continue;
    MatchState saved = st;
    st.map[u] = v;
    st.used[v] = 1;
    if (node_slots_ok(p.nodes()[u], q.nodes()[v], opts, st, false) &&
        sub_rec(p, q, u + 1, opts, st))
      return true;
    st = std::move(saved);
  }
  return false;
}

}  // namespace

bool is_subpattern(const PatternGraph& p, const PatternGraph& q,
                   const MatchOptions& opts) {
  if (p.size() > q.size()) return false;
  MatchState st;
  st.map.assign(p.size(), -1);
  st.used.assign(q.size(), 0);
  return sub_rec(p, q, 0, opts, st);
}

std::vector<Candidate> materialize(const std::vector<Pattern>& patterns,
                                   const Program& prog,
                                   const MachineDesc& md) {
  std::vector<Candidate> out;
  out.reserve(patterns.size());
  for (const Pattern& p : patterns) {
    const Procedure* proc = prog.find_proc(p.proc);
    if (proc == nullptr) throw Error("unknown procedure '" + p.proc + "'");
    const BasicBlock* bb = proc->find_block(p.block);
    if (bb == nullptr) throw Error("unknown block '" + p.block + "'");
    out.push_back({p, PatternGraph::build(*bb, md, p.nodes)});
  }
  return out;
}

std::vector<CandidateClass> dedup(const std::vector<Candidate>& candidates,
                                  const MatchOptions& opts) {
  std::vector<CandidateClass> classes;
  std::map<std::uint64_t, std::vector<int>> buckets;

  for (const Candidate& cand : candidates) {
    std::uint64_t h = cand.graph.shape_hash(opts);
    int found = -1;
    for (int idx : buckets[h]) {
      if (iso_equal(classes[idx].rep.graph, cand.graph, opts)) {
        found = idx;
        break;
      }
    }
    Instance inst{cand.pattern.proc, cand.pattern.block, cand.pattern.nodes,
                  cand.pattern.freq, 0};
    if (found >= 0) {
      classes[found].instances.push_back(std::move(inst));
    } else {
      CandidateClass cls;
      cls.id = static_cast<int>(classes.size());
      cls.rep = cand;
      cls.instances.push_back(std::move(inst));
      buckets[h].push_back(cls.id);
      classes.push_back(std::move(cls));
    }
  }
  return classes;
}

namespace {

// Canonical single-block procedure for one pattern: inputs i<k>, temps
// t<node>, memory symbols m<k>/a<k>, constants inline.
void library_proc(Program& prog, const PatternGraph& g, int class_id) {
  using Slot = PatternGraph::Slot;
  Procedure proc;
  proc.name = "ci" + std::to_string(class_id);
  BasicBlock bb;
  bb.label = "p0";

  auto input_name = [](int k) { return "i" + std::to_string(k); };
  auto temp_name = [](int n, int j) {
    std::string s = "t" + std::to_string(n);
    if (j > 0) s += "_" + std::to_string(j);
    return s;
  };
  auto sym_op = [](const Slot& s) {
    std::string name =
        (s.is_addr ? "a" : "m") + std::to_string(s.sym);
    return s.is_addr ? Operand::addr(name, s.width)
                     : Operand::mem(name, s.width);
  };

  for (int i = 0; i < g.size(); ++i) {
    const auto& n = g.nodes()[i];
    Instruction in;
    in.id = i;
    in.opcode = n.opcode;
    for (std::size_t j = 0; j < n.dest_widths.size(); ++j)
      in.dests.push_back(
          Operand::reg(temp_name(i, (int)j), n.dest_widths[j]));
    for (const Slot& s : n.slots) {
      Operand op;
      switch (s.kind) {
        case Slot::Extern: op = Operand::reg(input_name(s.sym), s.width); break;
        case Slot::Internal: op = Operand::reg(temp_name(s.producer, 0), s.width); break;
        case Slot::Const: op = Operand::cst(s.cvalue, s.width); break;
        case Slot::MemRef: op = sym_op(s); break;
      }
      if (s.from_dest) in.dests.push_back(op);
      else in.srcs.push_back(op);
    }
    bb.instructions.push_back(std::move(in));
  }

  // Explicit dep lines freeze the edge set: reimporting must reproduce the
  // source block's edges exactly, including conservative memory ordering.
  for (int i = 0; i < g.size(); ++i)
    for (const Slot& s : g.nodes()[i].slots)
      if (s.kind == Slot::Internal)
        bb.edges.push_back({s.producer, i,
                            Operand::reg(temp_name(s.producer, 0), s.width),
                            DepKind::RegisterFlow});
  for (const auto& [p, c] : g.mem_edges()) {
    // A memory-kind via token encodes the edge kind; prefer a symbol the
    // pattern actually references.
    const Slot* ref = nullptr;
    for (int node : {c, p})
      for (const Slot& s : g.nodes()[node].slots)
        if (s.kind == Slot::MemRef && ref == nullptr) ref = &s;
    Operand via = ref != nullptr
                      ? sym_op(*ref)
                      : Operand::mem("dep" + std::to_string(p) + "x" +
                                         std::to_string(c),
                                     32);
    bb.edges.push_back({p, c, via, DepKind::MemoryOrder});
  }
  std::sort(bb.edges.begin(), bb.edges.end());
  bb.edges.erase(std::unique(bb.edges.begin(), bb.edges.end()),
                 bb.edges.end());
  bb.explicit_deps = true;

  // Declare symbols so reparsing is warning-free.
  std::map<std::string, SymbolDecl> decls;
  for (const auto& in : bb.instructions)
    for (const auto* list : {&in.dests, &in.srcs})
      for (const auto& op : *list)
        if (!op.is_const()) decls.try_emplace(op.name, SymbolDecl{op.name, op.kind, op.width});
  for (const auto& e : bb.edges)
    if (!e.via.is_const())
      decls.try_emplace(e.via.name, SymbolDecl{e.via.name, e.via.kind, e.via.width});
  for (auto& [_, d] : decls) proc.locals.push_back(d);

  proc.blocks.push_back(std::move(bb));
  prog.procedures.push_back(std::move(proc));
}

}  // namespace

std::string export_library(const std::vector<CandidateClass>& classes,
                           const MachineDesc& md) {
  (void)md;
  Program prog;
  prog.name = "ci_library";
  for (const auto& cls : classes) library_proc(prog, cls.rep.graph, cls.id);
  return serialize_iseq(prog);
}

std::vector<Candidate> import_library(std::string_view text,
                                      const MachineDesc& md) {
  Program prog = parse_iseq(text);
  // Canonical libraries carry explicit dep lines; for foreign files the
  // edges are derived and spurious distinct-symbol ordering is stripped.
  for (auto& proc : prog.procedures)
    for (auto& bb : proc.blocks)
      if (!bb.explicit_deps) {
        attach_ddg(bb, md);
        remove_false_deps(bb, md);
      }

  std::vector<Candidate> out;
  for (const auto& proc : prog.procedures) {
    if (proc.blocks.size() != 1)
      throw Error("library procedure '" + proc.name +
                  "' must hold exactly one block");
  }
  for (const auto& proc : prog.procedures) {
    const BasicBlock& bb = proc.blocks.front();
    std::vector<int> nodes(bb.instructions.size());
    std::iota(nodes.begin(), nodes.end(), 0);
    Pattern p;
    p.proc = proc.name;
    p.block = bb.label;
    p.nodes = nodes;
    p.operands = collect_operands(bb, md, nodes, true);
    for (int id : nodes)
      if (md.lookup_op(bb.instructions[id].opcode).is_mem()) ++p.mem_ops;
    out.push_back({std::move(p), PatternGraph::build(bb, md, nodes)});
  }
  return out;
}

}  // namespace ciex
