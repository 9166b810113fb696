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

#include "ciex/exporters.hpp"

#include <cstdio>
#include <sstream>

#include "ciex/error.hpp"

namespace ciex {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

std::string dot_block_body(const BasicBlock& bb, const std::string& prefix) {
  std::string out;
  for (const auto& in : bb.instructions)
    out += "  " + prefix + std::to_string(in.id) + " [label=\"" +
           std::to_string(in.id) + ": " + in.opcode + "\"];\n";
  for (const auto& e : bb.edges) {
    out += "  " + prefix + std::to_string(e.producer) + " -> " + prefix +
           std::to_string(e.consumer);
    if (e.kind == DepKind::MemoryOrder) out += " [style=dashed]";
    out += ";\n";
  }
  return out;
}

}  // namespace

std::string to_dot(const BasicBlock& bb, const std::string& graph_name) {
  std::string out = "digraph \"" + graph_name + "\" {\n";
  out += "  node [shape=box];\n";
  out += dot_block_body(bb, "n");
  out += "}\n";
  return out;
}

std::string to_dot(const Program& prog) {
  std::string out;
  for (const auto& proc : prog.procedures)
    for (const auto& bb : proc.blocks)
      out += to_dot(bb, proc.name + "." + bb.label);
  return out;
}

std::string to_dot(const PatternGraph& g, const std::string& graph_name) {
  std::string out = "digraph \"" + graph_name + "\" {\n";
  out += "  node [shape=box];\n";
  for (int i = 0; i < g.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + std::to_string(i) +
           ": " + g.nodes()[i].opcode + "\"];\n";
  for (int i = 0; i < g.size(); ++i)
    for (const auto& s : g.nodes()[i].slots)
      if (s.kind == PatternGraph::Slot::Internal)
        out += "  n" + std::to_string(s.producer) + " -> n" +
               std::to_string(i) + ";\n";
  for (const auto& [p, c] : g.mem_edges())
    out += "  n" + std::to_string(p) + " -> n" + std::to_string(c) +
           " [style=dashed];\n";
  out += "}\n";
  return out;
}

namespace {

std::string gdl_nodes_edges(const BasicBlock& bb) {
  std::string out;
  for (const auto& in : bb.instructions)
    out += "node: { title: \"" + std::to_string(in.id) + "\" label: \"" +
           std::to_string(in.id) + ": " + in.opcode + "\" }\n";
  for (const auto& e : bb.edges) {
    out += "edge: { sourcename: \"" + std::to_string(e.producer) +
           "\" targetname: \"" + std::to_string(e.consumer) + "\"";
    if (e.kind == DepKind::MemoryOrder) out += " linestyle: dashed";
    out += " }\n";
  }
  return out;
}

}  // namespace

std::string to_gdl(const BasicBlock& bb, const std::string& graph_name) {
  std::string out = "graph: {\n";
  out += "title: \"" + graph_name + "\"\n";
  out += "layoutalgorithm: dfs\n";
  out += gdl_nodes_edges(bb);
  out += "}\n";
  return out;
}

std::string to_gdl(const Program& prog) {
  std::string out;
  for (const auto& proc : prog.procedures)
    for (const auto& bb : proc.blocks)
      out += to_gdl(bb, proc.name + "." + bb.label);
  return out;
}

std::string to_gdl(const PatternGraph& g, const std::string& graph_name) {
  // One folded subgraph per pattern.
  std::string out = "graph: {\n";
  out += "title: \"" + graph_name + "\"\n";
  out += "graph: {\n";
  out += "title: \"" + graph_name + ".ci\"\n";
  out += "folding: 1\n";
  for (int i = 0; i < g.size(); ++i)
    out += "node: { title: \"" + std::to_string(i) + "\" label: \"" +
           std::to_string(i) + ": " + g.nodes()[i].opcode + "\" }\n";
  for (int i = 0; i < g.size(); ++i)
    for (const auto& s : g.nodes()[i].slots)
      if (s.kind == PatternGraph::Slot::Internal)
        out += "edge: { sourcename: \"" + std::to_string(s.producer) +
               "\" targetname: \"" + std::to_string(i) + "\" }\n";
  for (const auto& [p, c] : g.mem_edges())
    out += "edge: { sourcename: \"" + std::to_string(p) +
           "\" targetname: \"" + std::to_string(c) +
           "\" linestyle: dashed }\n";
  out += "}\n";
  out += "}\n";
  return out;
}

namespace {

std::string mask_of(int width) {
  if (width >= 64) return "0xffffffffffffffffULL";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%llxULL",
                (unsigned long long)((1ULL << width) - 1));
  return buf;
}

// Sign extension of a masked value from `width` bits.
std::string c_signed(const std::string& expr, int width) {
  std::string w = std::to_string(width);
  return "sext(" + expr + ", " + w + ")";
}

struct CEmitter {
  const PatternGraph& g;
  std::vector<std::string> val;  // expression naming each node's value
  std::string body;

  std::string slot_expr(const PatternGraph::Slot& s) const {
    switch (s.kind) {
      case PatternGraph::Slot::Extern:
        return "i" + std::to_string(s.sym);
      case PatternGraph::Slot::Internal:
        return val[s.producer];
      case PatternGraph::Slot::Const:
        return "(uint64_t)" + std::to_string(s.cvalue) + "ULL";
      case PatternGraph::Slot::MemRef:
        throw Error("no emission rule for memory references");
    }
    return {};
  }

  std::string emit_node(int i) {
    const auto& n = g.nodes()[i];
    const std::string& op = n.opcode;
    std::vector<std::string> a;
    std::vector<int> w;
    for (const auto& s : n.slots) {
      a.push_back(slot_expr(s));
      w.push_back(s.width);
    }
    int dw = n.dest_widths.empty() ? 32 : n.dest_widths[0];
    std::string m = mask_of(dw);

    auto bin = [&](const char* sym) {
      return "(" + a[0] + " " + sym + " " + a[1] + ") & " + m;
    };
    auto cmp_s = [&](const char* sym) {
      return "(uint64_t)(" + c_signed(a[0], w[0]) + " " + sym + " " +
             c_signed(a[1], w[1]) + ")";
    };

    if (op == "add" || op == "addi") return bin("+");
    if (op == "sub" || op == "subi") return bin("-");
    if (op == "mul" || op == "mult") return bin("*");
    if (op == "div")
      return "(" + a[1] + " == 0 ? 0 : (" + a[0] + " / " + a[1] + ")) & " + m;
    if (op == "rem" || op == "mod")
      return "(" + a[1] + " == 0 ? 0 : (" + a[0] + " % " + a[1] + ")) & " + m;
    if (op == "and" || op == "andi") return bin("&");
    if (op == "ior" || op == "or" || op == "ori") return bin("|");
    if (op == "xor" || op == "xori") return bin("^");
    if (op == "not") return "(~" + a[0] + ") & " + m;
    if (op == "neg") return "(0 - " + a[0] + ") & " + m;
    if (op == "abs")
      return "(uint64_t)(" + c_signed(a[0], w[0]) + " < 0 ? -" +
             c_signed(a[0], w[0]) + " : " + c_signed(a[0], w[0]) + ") & " + m;
    if (op == "min" || op == "max") {
      const char* sym = op == "min" ? "<" : ">";
      return "(" + c_signed(a[0], w[0]) + " " + sym + " " +
             c_signed(a[1], w[1]) + " ? " + a[0] + " : " + a[1] + ") & " + m;
    }
    if (op == "lsl" || op == "sll" || op == "slli")
      return "(" + a[0] + " << (" + a[1] + " % " + std::to_string(dw) +
             ")) & " + m;
    if (op == "lsr" || op == "srl" || op == "srli")
      return "((" + a[0] + " & " + mask_of(w[0]) + ") >> (" + a[1] + " % " +
             std::to_string(w[0]) + ")) & " + m;
    if (op == "asr" || op == "sra" || op == "srai")
      return "(uint64_t)(" + c_signed(a[0], w[0]) + " >> (" + a[1] + " % " +
             std::to_string(w[0]) + ")) & " + m;
    if (op == "rot") {
      std::string wd = std::to_string(w[0]);
      return "(((" + a[0] + " << (" + a[1] + " % " + wd + ")) | ((" + a[0] +
             " & " + mask_of(w[0]) + ") >> ((" + wd + " - " + a[1] + " % " +
             wd + ") % " + wd + "))) & " + m + ")";
    }
    if (op == "seq") return "(uint64_t)(" + a[0] + " == " + a[1] + ")";
    if (op == "sne") return "(uint64_t)(" + a[0] + " != " + a[1] + ")";
    if (op == "sl" || op == "slt" || op == "slti") return cmp_s("<");
    if (op == "sle") return cmp_s("<=");
    if (op == "sgt") return cmp_s(">");
    if (op == "cpy" || op == "cvt") return "(" + a[0] + ") & " + m;
    if (op == "ldc") return "(" + a[0] + ") & " + m;
    if (op == "lhi") return "((" + a[0] + ") << 16) & " + m;
    if (op == "sxt")
      return "(uint64_t)" + c_signed(a[0], w[0]) + " & " + m;
    if (op == "zxt") return "(" + a[0] + " & " + mask_of(w[0]) + ") & " + m;
    if (op == "select")
      return "((" + a[0] + ") ? (" + a[1] + ") : (" + a[2] + ")) & " + m;
    if (op == "bitextract") {
      // value <= src[lpos..hpos]
      return "((" + a[0] + " >> (" + a[1] + ")) & ((1ULL << ((" + a[2] +
             ") - (" + a[1] + ") + 1)) - 1)) & " + m;
    }
    if (op == "bitinsert") {
      // dest[lpos..hpos] <= value, other bits from the base operand
      std::string fw = "((1ULL << ((" + a[3] + ") - (" + a[2] +
                       ") + 1)) - 1)";
      return "((" + a[0] + " & ~(" + fw + " << (" + a[2] + "))) | ((" + a[1] +
             " & " + fw + ") << (" + a[2] + "))) & " + m;
    }
    if (op == "concat") {
      // dest <= a0 & a1 & ... (bit concatenation, first operand highest)
      std::string expr = "0ULL";
      for (std::size_t k = 0; k < a.size(); ++k)
        expr = "((" + expr + " << " + std::to_string(w[k]) + ") | (" + a[k] +
               " & " + mask_of(w[k]) + "))";
      return expr + " & " + m;
    }
    throw Error("no emission rule for operator '" + op + "'");
  }
};

}  // namespace

std::string to_c(const PatternGraph& g, const MachineDesc& md,
                 const std::string& func_name) {
  (void)md;
  for (const auto& n : g.nodes())
    if (n.is_mem() || (n.flags & kFlagCti))
      throw Error("no emission rule for operator '" + n.opcode + "'");

  // Outputs: node values no other node consumes.
  std::vector<char> consumed(g.size(), 0);
  int n_inputs = 0;
  for (const auto& n : g.nodes())
    for (const auto& s : n.slots) {
      if (s.kind == PatternGraph::Slot::Internal) consumed[s.producer] = 1;
      if (s.kind == PatternGraph::Slot::Extern)
        n_inputs = std::max(n_inputs, s.sym + 1);
    }
  std::vector<int> outputs;
  for (int i = 0; i < g.size(); ++i)
    if (!consumed[i] && !g.nodes()[i].dest_widths.empty()) outputs.push_back(i);

  CEmitter em{g, {}, {}};
  em.val.resize(g.size());
  std::string body;
  for (int i = 0; i < g.size(); ++i) {
    em.val[i] = "t" + std::to_string(i);
    std::string expr = em.emit_node(i);
    body += "  uint64_t t" + std::to_string(i) + " = " + expr + ";\n";
  }

  std::string sig;
  bool single = outputs.size() == 1;
  sig += single ? "uint64_t " : "void ";
  sig += func_name + "(";
  for (int i = 0; i < n_inputs; ++i)
    sig += std::string(i ? ", " : "") + "uint64_t i" + std::to_string(i);
  if (!single)
    for (std::size_t k = 0; k < outputs.size(); ++k)
      sig += std::string(n_inputs || k ? ", " : "") + "uint64_t* o" +
             std::to_string(k);
  sig += ")";

  std::string out;
  out += "#include <stdint.h>\n\n";
  out +=
      "static inline int64_t sext(uint64_t v, int w) {\n"
      "  uint64_t m = w >= 64 ? ~0ULL : ((1ULL << w) - 1);\n"
      "  v &= m;\n"
      "  if (w < 64 && (v >> (w - 1)) & 1) v |= ~m;\n"
      "  return (int64_t)v;\n"
      "}\n\n";
  out += sig + " {\n" + body;
  if (single) {
    out += "  return t" + std::to_string(outputs[0]) + ";\n";
  } else {
    for (std::size_t k = 0; k < outputs.size(); ++k)
      out += "  *o" + std::to_string(k) + " = t" +
             std::to_string(outputs[k]) + ";\n";
  }
  out += "}\n";
  return out;
}

std::string stats_text(const ProgramStats& st) {
  std::ostringstream out;
  out << "blocks:\n";
  for (const auto& b : st.blocks)
    out << "  " << b.proc << "/" << b.label << ": " << b.size
        << " instructions, " << b.sw_cycles << " cycles, freq " << b.freq
        << "\n";
  out << "static instructions: " << st.static_instructions << "\n";
  out << "base cycles: " << st.base_cycles << "\n";
  out << "opcode histogram (static/dynamic):\n";
  for (const auto& [op, n] : st.static_ops) {
    auto it = st.dynamic_ops.find(op);
    long long dyn = it == st.dynamic_ops.end() ? 0 : it->second;
    out << "  " << op << ": " << n << " / " << dyn << "\n";
  }
  return out.str();
}

std::string stats_csv(const ProgramStats& st) {
  std::ostringstream out;
  out << "kind,name,static,dynamic\n";
  for (const auto& [op, n] : st.static_ops) {
    auto it = st.dynamic_ops.find(op);
    long long dyn = it == st.dynamic_ops.end() ? 0 : it->second;
    out << "opcode," << op << "," << n << "," << dyn << "\n";
  }
  for (const auto& b : st.blocks)
    out << "block," << b.proc << "/" << b.label << "," << b.size << ","
        << (long long)b.freq * b.size << "\n";
  out << "total,base_cycles," << st.base_cycles << "," << st.base_cycles
      << "\n";
  return out.str();
}

std::string classes_csv(const std::vector<CandidateClass>& classes) {
  std::ostringstream out;
  out << "class,nodes,instances,freq_sum,seq_cycles,ci_cycles,area,gain,"
         "gain_freq\n";
  for (const auto& cls : classes) {
    long long fsum = 0, gf = 0;
    for (const auto& inst : cls.instances) {
      fsum += (long long)inst.freq;
      gf += inst.gain * (long long)inst.freq;
    }
    long long gain = cls.instances.empty() ? 0 : cls.instances.front().gain;
    out << cls.id << "," << cls.rep.graph.size() << ","
        << cls.instances.size() << "," << fsum << "," << cls.seq_cycles << ","
        << cls.ci_cycles << "," << format_real(cls.area) << "," << gain << ","
        << gf << "\n";
  }
  return out.str();
}

std::string selection_csv(const Selection& sel) {
  std::ostringstream out;
  out << "step,class,priority,gain_freq,area,cum_speedup,cum_area\n";
  for (std::size_t i = 0; i < sel.curve.size(); ++i) {
    const SelectionStep& s = sel.curve[i];
    out << (i + 1) << "," << s.class_id << "," << format_real(s.priority)
        << "," << s.gain << "," << format_real(s.area) << ","
        << format_real(s.cum_speedup) << "," << format_real(s.cum_area)
        << "\n";
  }
  return out.str();
}

}  // namespace ciex
