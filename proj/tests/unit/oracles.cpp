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

#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ciex/error.hpp"

namespace ciex::oracle {

std::vector<std::vector<char>> reachability(const BasicBlock& bb) {
  int n = bb.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (const DepEdge& e : bb.edges) reach[e.producer][e.consumer] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  return reach;
}

bool convex(const BasicBlock& bb, const std::vector<int>& nodes) {
  auto reach = reachability(bb);
  std::vector<char> in_set(bb.size(), 0);
  for (int id : nodes) in_set[id] = 1;
  for (int u : nodes)
    for (int v : nodes)
      for (int w = 0; w < bb.size(); ++w)
        if (!in_set[w] && reach[u][w] && reach[w][v]) return false;
  return true;
}

namespace {

bool is_store_op(const BasicBlock& bb, const MachineDesc& md, int id) {
  return md.lookup_op(bb.instructions[id].opcode).is_store();
}

// Register names written by an instruction (store writes no register).
std::vector<std::string> written(const BasicBlock& bb, const MachineDesc& md,
                                 int id) {
  std::vector<std::string> out;
  if (is_store_op(bb, md, id)) return out;
  for (const auto& d : bb.instructions[id].dests)
    if (d.is_reg()) out.push_back(d.name);
  return out;
}

// Register names read by an instruction, including store base registers.
std::vector<std::string> read(const BasicBlock& bb, const MachineDesc& md,
                              int id) {
  std::vector<std::string> out;
  for (const auto& s : bb.instructions[id].srcs)
    if (s.is_reg()) out.push_back(s.name);
  if (is_store_op(bb, md, id))
    for (const auto& d : bb.instructions[id].dests)
      if (d.is_reg()) out.push_back(d.name);
  return out;
}

// Last definition of `name` strictly before `id`, or -1.
int last_def_before(const BasicBlock& bb, const MachineDesc& md, int id,
                    const std::string& name) {
  for (int k = id - 1; k >= 0; --k)
    for (const auto& w : written(bb, md, k))
      if (w == name) return k;
  return -1;
}

// Instructions after `id` that read this definition before a redefinition.
std::vector<int> consumers_of(const BasicBlock& bb, const MachineDesc& md,
                              int id, const std::string& name) {
  std::vector<int> out;
  for (int k = id + 1; k < bb.size(); ++k) {
    for (const auto& r : read(bb, md, k))
      if (r == name) out.push_back(k);
    for (const auto& w : written(bb, md, k))
      if (w == name) return out;
  }
  return out;
}

}  // namespace

IoCount io_count(const BasicBlock& bb, const MachineDesc& md,
                 const std::vector<int>& nodes,
                 const std::set<std::string>& cross_block) {
  IoCount io;
  std::vector<char> in_set(bb.size(), 0);
  for (int id : nodes) in_set[id] = 1;

  for (int id : nodes) {
    for (const auto& name : read(bb, md, id)) {
      int def = last_def_before(bb, md, id, name);
      if (def < 0 || !in_set[def]) io.inputs.insert(name);
    }
    for (const auto& s : bb.instructions[id].srcs)
      if (s.is_const()) io.consts.insert({s.value, s.width});
    for (const auto& name : written(bb, md, id)) {
      auto cons = consumers_of(bb, md, id, name);
      bool escapes = cons.empty();
      for (int c : cons)
        if (!in_set[c]) escapes = true;
      if (!escapes && cross_block.count(name) &&
          last_def_before(bb, md, bb.size(), name) == id)
        escapes = true;
      if (escapes) io.outputs.insert(name);
    }
  }
  return io;
}

bool feasible(const BasicBlock& bb, const MachineDesc& md,
              const Constraints& c, const std::vector<int>& nodes,
              const std::set<std::string>& cross_block) {
  for (int id : nodes)
    if (c.forbidden.count(bb.instructions[id].opcode)) return false;
  if (nodes.size() > c.max_nodes) return false;
  if (!convex(bb, nodes)) return false;
  IoCount io = io_count(bb, md, nodes, cross_block);
  return io.inputs.size() <= c.max_inputs &&
         io.outputs.size() <= c.max_outputs &&
         io.consts.size() <= c.max_consts;
}

std::vector<std::vector<int>> enumerate_feasible(
    const BasicBlock& bb, const MachineDesc& md, const Constraints& c,
    const std::set<std::string>& cross_block) {
  std::vector<std::vector<int>> out;
  int n = bb.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) nodes.push_back(i);
    if (feasible(bb, md, c, nodes, cross_block)) out.push_back(nodes);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> enumerate_miso(
    const BasicBlock& bb, const MachineDesc& md, const Constraints& c,
    const std::set<std::string>& cross_block) {
  std::vector<std::vector<int>> out;
  for (const auto& nodes : enumerate_feasible(bb, md, c, cross_block)) {
    IoCount io = io_count(bb, md, nodes, cross_block);
    if (io.outputs.size() > 1) continue;
    // Rooted: every non-sink member's value feeds another member.
    int root = nodes.back();
    bool rooted = true;
    std::vector<char> in_set(bb.size(), 0);
    for (int id : nodes) in_set[id] = 1;
    for (int id : nodes) {
      if (id == root) continue;
      bool feeds = false;
      for (const auto& name : written(bb, md, id))
        for (int cns : consumers_of(bb, md, id, name))
          if (in_set[cns]) feeds = true;
      if (!feeds) rooted = false;
    }
    if (rooted) out.push_back(nodes);
  }
  return out;
}

bool valid_single_output(const BasicBlock& bb, const MachineDesc& md,
                         const std::set<std::string>& forbidden,
                         const std::vector<int>& nodes,
                         const std::set<std::string>& cross_block) {
  for (int id : nodes)
    if (forbidden.count(bb.instructions[id].opcode)) return false;
  if (!convex(bb, nodes)) return false;

  std::vector<char> in_set(bb.size(), 0);
  for (int id : nodes) in_set[id] = 1;
  // Count nodes whose value (or memory effect) escapes the set.
  int escaping = 0;
  for (int id : nodes) {
    bool escapes = false;
    if (is_store_op(bb, md, id)) {
      escapes = true;  // memory effect
    } else {
      auto names = written(bb, md, id);
      if (names.empty()) escapes = true;  // no value to merge through
      for (const auto& name : names) {
        auto cons = consumers_of(bb, md, id, name);
        if (cons.empty()) escapes = true;
        for (int c : cons)
          if (!in_set[c]) escapes = true;
        if (cross_block.count(name) &&
            last_def_before(bb, md, bb.size(), name) == id)
          escapes = true;
      }
    }
    if (escapes) ++escaping;
  }
  return escaping == 1;
}

namespace {

using Slot = PatternGraph::Slot;

// Slot correspondence under a fixed node permutation, with a running
// memory-symbol bijection.
struct SymMap {
  std::map<int, int> pq, qp;
  bool bind(int a, int b) {
    auto it = pq.find(a);
    if (it != pq.end()) return it->second == b;
    if (qp.count(b)) return false;
    pq[a] = b;
    qp[b] = a;
    return true;
  }
};

bool slots_correspond(const PatternGraph::Node& u,
                      const PatternGraph::Node& v,
                      const std::vector<int>& perm, const MatchOptions& opts,
                      SymMap& syms) {
  if (u.opcode != v.opcode || u.slots.size() != v.slots.size() ||
      u.dest_widths.size() != v.dest_widths.size())
    return false;

  auto one = [&](const std::vector<int>& order, SymMap& s) {
    for (std::size_t i = 0; i < u.slots.size(); ++i) {
      const Slot& a = u.slots[i];
      const Slot& b = v.slots[order[i]];
      if (a.from_dest != b.from_dest) return false;
      switch (a.kind) {
        case Slot::Const:
          if (b.kind != Slot::Const) return false;
          if (opts.const_match == ConstMatch::Value &&
              (a.cvalue != b.cvalue || a.width != b.width))
            return false;
          break;
        case Slot::Extern:
          if (b.kind != Slot::Extern) return false;
          break;
        case Slot::Internal:
          if (b.kind != Slot::Internal || perm[a.producer] != b.producer)
            return false;
          break;
        case Slot::MemRef:
          if (b.kind != Slot::MemRef || a.is_addr != b.is_addr) return false;
          if (!s.bind(a.sym, b.sym)) return false;
          break;
      }
    }
    return true;
  };

  std::vector<int> order(u.slots.size());
  std::iota(order.begin(), order.end(), 0);
  if (!u.commutative()) {
    SymMap trial = syms;
    if (!one(order, trial)) return false;
    syms = trial;
    return true;
  }
  do {
    SymMap trial = syms;
    if (one(order, trial)) {
      syms = trial;
      return true;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

bool permutation_matches(const PatternGraph& p, const PatternGraph& q,
                         const std::vector<int>& perm,
                         const MatchOptions& opts) {
  SymMap syms;
  for (int i = 0; i < p.size(); ++i)
    if (!slots_correspond(p.nodes()[i], q.nodes()[perm[i]], perm, opts, syms))
      return false;
  std::vector<std::pair<int, int>> pm, qm;
  for (auto [a, b] : p.mem_edges()) pm.push_back({perm[a], perm[b]});
  qm = q.mem_edges();
  std::sort(pm.begin(), pm.end());
  std::sort(qm.begin(), qm.end());
  return pm == qm;
}

}  // namespace

bool iso_permute(const PatternGraph& p, const PatternGraph& q,
                 const MatchOptions& opts) {
  if (p.size() != q.size()) return false;
  std::vector<int> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permutation_matches(p, q, perm, opts)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

namespace {

bool embedding_matches(const PatternGraph& p, const PatternGraph& q,
                       const std::vector<int>& map, const MatchOptions& opts) {
  std::vector<char> in_image(q.size(), 0);
  for (int v : map) in_image[v] = 1;

  SymMap syms;
  for (int i = 0; i < p.size(); ++i) {
    const auto& u = p.nodes()[i];
    const auto& v = q.nodes()[map[i]];
    if (u.opcode != v.opcode || u.slots.size() != v.slots.size()) return false;

    auto one = [&](const std::vector<int>& order, SymMap& s) {
      for (std::size_t k = 0; k < u.slots.size(); ++k) {
        const Slot& a = u.slots[k];
        const Slot& b = v.slots[order[k]];
        if (a.from_dest != b.from_dest) return false;
        switch (a.kind) {
          case Slot::Const:
            if (b.kind != Slot::Const) return false;
            if (opts.const_match == ConstMatch::Value &&
                (a.cvalue != b.cvalue || a.width != b.width))
              return false;
            break;
          case Slot::Extern:
            // Fed from outside the image in q, or a true input.
            if (b.kind == Slot::Internal && in_image[b.producer]) return false;
            if (b.kind != Slot::Extern && b.kind != Slot::Internal)
              return false;
            break;
          case Slot::Internal:
            if (b.kind != Slot::Internal || map[a.producer] != b.producer)
              return false;
            break;
          case Slot::MemRef:
            if (b.kind != Slot::MemRef || a.is_addr != b.is_addr) return false;
            if (!s.bind(a.sym, b.sym)) return false;
            break;
        }
      }
      return true;
    };

    std::vector<int> order(u.slots.size());
    std::iota(order.begin(), order.end(), 0);
    bool ok = false;
    if (!u.commutative()) {
      SymMap trial = syms;
      ok = one(order, trial);
      if (ok) syms = trial;
    } else {
      do {
        SymMap trial = syms;
        if (one(order, trial)) {
          ok = true;
          syms = trial;
          break;
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
    if (!ok) return false;
  }

  std::vector<std::pair<int, int>> pm, qm;
  for (auto [a, b] : p.mem_edges()) pm.push_back({map[a], map[b]});
  for (auto e : q.mem_edges())
    if (in_image[e.first] && in_image[e.second]) qm.push_back(e);
  std::sort(pm.begin(), pm.end());
  std::sort(qm.begin(), qm.end());
  return pm == qm;
}

}  // namespace

bool subiso_enumerate(const PatternGraph& p, const PatternGraph& q,
                      const MatchOptions& opts) {
  if (p.size() > q.size()) return false;
  std::vector<int> idx(q.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<char> pick(q.size(), 0);
  std::fill(pick.begin(), pick.begin() + p.size(), 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<int> chosen;
    for (int i = 0; i < q.size(); ++i)
      if (pick[i]) chosen.push_back(i);
    std::sort(chosen.begin(), chosen.end());
    do {
      if (embedding_matches(p, q, chosen, opts)) return true;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return false;
}

KnapsackBest knapsack(const std::vector<long long>& values,
                      const std::vector<long long>& weights,
                      long long budget) {
  int n = (int)values.size();
  KnapsackBest best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    long long v = 0, w = 0;
    std::vector<int> picks;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        v += values[i];
        w += weights[i];
        picks.push_back(i);
      }
    if (w > budget) continue;
    if (v > best.value || (v == best.value && picks < best.picks)) {
      best.value = v;
      best.picks = picks;
    }
  }
  return best;
}

namespace {

struct Scanner {
  const std::string& s;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  bool lit(const std::string& t) {
    ws();
    if (s.compare(pos, t.size(), t) == 0) {
      pos += t.size();
      return true;
    }
    return false;
  }
  bool quoted() {
    ws();
    if (pos >= s.size() || s[pos] != '"') return false;
    ++pos;
    while (pos < s.size() && s[pos] != '"') ++pos;
    if (pos >= s.size()) return false;
    ++pos;
    return true;
  }
  bool ident() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
      ++pos;
    return pos > start;
  }
  bool done() {
    ws();
    return pos == s.size();
  }
};

bool dot_statements(Scanner& sc) {
  for (;;) {
    sc.ws();
    if (sc.lit("}")) return true;
    if (sc.lit("node")) {
      if (!(sc.lit("[") && sc.ident() && sc.lit("=") && sc.ident() &&
            sc.lit("]") && sc.lit(";")))
        return false;
      continue;
    }
    if (!sc.ident()) return false;  // node name
    if (sc.lit("->")) {
      if (!sc.ident()) return false;
      if (sc.lit("[")) {
        if (!(sc.ident() && sc.lit("=") && sc.ident() && sc.lit("]")))
          return false;
      }
      if (!sc.lit(";")) return false;
    } else if (sc.lit("[")) {
      if (!(sc.ident() && sc.lit("=") && sc.quoted() && sc.lit("]") &&
            sc.lit(";")))
        return false;
    } else {
      return false;
    }
  }
}

bool gdl_graph(Scanner& sc) {
  if (!(sc.lit("graph:") && sc.lit("{"))) return false;
  for (;;) {
    sc.ws();
    if (sc.lit("}")) return true;
    if (sc.lit("title:")) {
      if (!sc.quoted()) return false;
    } else if (sc.lit("layoutalgorithm:")) {
      if (!sc.ident()) return false;
    } else if (sc.lit("folding:")) {
      if (!sc.ident()) return false;
    } else if (sc.lit("node:")) {
      if (!(sc.lit("{") && sc.lit("title:") && sc.quoted() &&
            sc.lit("label:") && sc.quoted() && sc.lit("}")))
        return false;
    } else if (sc.lit("edge:")) {
      if (!(sc.lit("{") && sc.lit("sourcename:") && sc.quoted() &&
            sc.lit("targetname:") && sc.quoted()))
        return false;
      if (sc.lit("linestyle:") && !sc.ident()) return false;
      if (!sc.lit("}")) return false;
    } else {
      // nested subgraph
      if (!gdl_graph(sc)) return false;
    }
  }
}

}  // namespace

bool valid_dot(const std::string& text) {
  Scanner sc{text};
  while (!sc.done()) {
    if (!(sc.lit("digraph") && sc.quoted() && sc.lit("{"))) return false;
    if (!dot_statements(sc)) return false;
  }
  return true;
}

bool valid_gdl(const std::string& text) {
  Scanner sc{text};
  while (!sc.done())
    if (!gdl_graph(sc)) return false;
  return true;
}

namespace {

std::uint64_t mask_bits(int w) {
  return w >= 64 ? ~0ULL : ((1ULL << w) - 1);
}

std::int64_t sext(std::uint64_t v, int w) {
  std::uint64_t m = mask_bits(w);
  v &= m;
  if (w < 64 && ((v >> (w - 1)) & 1)) v |= ~m;
  return (std::int64_t)v;
}

}  // namespace

std::vector<std::uint64_t> interpret(
    const PatternGraph& g, const std::vector<std::uint64_t>& inputs) {
  std::vector<std::uint64_t> val(g.size(), 0);
  std::vector<char> consumed(g.size(), 0);

  for (int i = 0; i < g.size(); ++i) {
    const auto& n = g.nodes()[i];
    std::vector<std::uint64_t> a;
    std::vector<int> w;
    for (const auto& s : n.slots) {
      switch (s.kind) {
        case Slot::Extern: a.push_back(inputs.at(s.sym)); break;
        case Slot::Internal:
          a.push_back(val[s.producer]);
          consumed[s.producer] = 1;
          break;
        case Slot::Const: a.push_back((std::uint64_t)s.cvalue); break;
        case Slot::MemRef: throw Error("not interpretable");
      }
      w.push_back(s.width);
    }
    int dw = n.dest_widths.empty() ? 32 : n.dest_widths[0];
    std::uint64_t m = mask_bits(dw);
    const std::string& op = n.opcode;
    std::uint64_t r = 0;

    if (op == "add" || op == "addi") r = (a[0] + a[1]) & m;
    else if (op == "sub" || op == "subi") r = (a[0] - a[1]) & m;
    else if (op == "mul" || op == "mult") r = (a[0] * a[1]) & m;
    else if (op == "div") r = (a[1] == 0 ? 0 : a[0] / a[1]) & m;
    else if (op == "rem" || op == "mod") r = (a[1] == 0 ? 0 : a[0] % a[1]) & m;
    else if (op == "and" || op == "andi") r = (a[0] & a[1]) & m;
    else if (op == "ior" || op == "or" || op == "ori") r = (a[0] | a[1]) & m;
    else if (op == "xor" || op == "xori") r = (a[0] ^ a[1]) & m;
    else if (op == "not") r = (~a[0]) & m;
    else if (op == "neg") r = (0 - a[0]) & m;
    else if (op == "abs") {
      std::int64_t s = sext(a[0], w[0]);
      r = (std::uint64_t)(s < 0 ? -s : s) & m;
    } else if (op == "min" || op == "max") {
      bool lt = sext(a[0], w[0]) < sext(a[1], w[1]);
      r = ((op == "min") == lt ? a[0] : a[1]) & m;
    } else if (op == "lsl" || op == "sll" || op == "slli")
      r = (a[0] << (a[1] % dw)) & m;
    else if (op == "lsr" || op == "srl" || op == "srli")
      r = ((a[0] & mask_bits(w[0])) >> (a[1] % w[0])) & m;
    else if (op == "asr" || op == "sra" || op == "srai")
      r = (std::uint64_t)(sext(a[0], w[0]) >> (a[1] % w[0])) & m;
    else if (op == "rot") {
      std::uint64_t sh = a[1] % w[0];
      r = ((a[0] << sh) |
           ((a[0] & mask_bits(w[0])) >> ((w[0] - sh) % w[0]))) & m;
    } else if (op == "seq") r = a[0] == a[1];
    else if (op == "sne") r = a[0] != a[1];
    else if (op == "sl" || op == "slt" || op == "slti")
      r = sext(a[0], w[0]) < sext(a[1], w[1]);
    else if (op == "sle") r = sext(a[0], w[0]) <= sext(a[1], w[1]);
    else if (op == "sgt") r = sext(a[0], w[0]) > sext(a[1], w[1]);
    else if (op == "cpy" || op == "cvt" || op == "ldc") r = a[0] & m;
    else if (op == "lhi") r = (a[0] << 16) & m;
    else if (op == "sxt") r = (std::uint64_t)sext(a[0], w[0]) & m;
    else if (op == "zxt") r = (a[0] & mask_bits(w[0])) & m;
    else if (op == "select") r = (a[0] ? a[1] : a[2]) & m;
    else if (op == "bitextract")
      r = ((a[0] >> a[1]) & ((1ULL << (a[2] - a[1] + 1)) - 1)) & m;
    else if (op == "bitinsert") {
      std::uint64_t fm = (1ULL << (a[3] - a[2] + 1)) - 1;
      r = ((a[0] & ~(fm << a[2])) | ((a[1] & fm) << a[2])) & m;
    } else if (op == "concat") {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < a.size(); ++k)
        acc = (acc << w[k]) | (a[k] & mask_bits(w[k]));
      r = acc & m;
    } else {
      throw Error("not interpretable: '" + op + "'");
    }
    val[i] = r;
  }

  std::vector<std::uint64_t> outputs;
  for (int i = 0; i < g.size(); ++i)
    if (!consumed[i] && !g.nodes()[i].dest_widths.empty())
      outputs.push_back(val[i]);
  return outputs;
}

}  // namespace ciex::oracle
