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

#include "ciex/iseq.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ciex {

namespace {

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

long long to_int(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'", lineno);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError("bad integer '" + s + "'", lineno);
  }
}

OperandKind kind_letter(const std::string& s, int lineno) {
  if (s == "r") return OperandKind::Register;
  if (s == "m") return OperandKind::MemSymbol;
  if (s == "a") return OperandKind::AddrSymbol;
  throw ParseError("symbol kind must be r, m or a, got '" + s + "'", lineno);
}

const char* kind_letter(OperandKind k) {
  switch (k) {
    case OperandKind::Register: return "r";
    case OperandKind::MemSymbol: return "m";
    case OperandKind::AddrSymbol: return "a";
    case OperandKind::Constant: break;
  }
  return "c";
}

// Symbol lookup state shared while parsing one procedure.
struct SymbolScope {
  Program* prog = nullptr;
  Procedure* proc = nullptr;
  std::vector<Diagnostic>* warnings = nullptr;

  const SymbolDecl* find(const std::string& name) const {
    for (const auto& d : proc->locals)
      if (d.name == name) return &d;
    for (const auto& d : prog->globals)
      if (d.name == name) return &d;
    return nullptr;
  }

  // Undeclared symbols are reported and auto-declared locally, so the
  // serialized form round-trips without warnings.
  const SymbolDecl& resolve(const std::string& name, OperandKind kind,
                            int width, int lineno) {
    if (const SymbolDecl* d = find(name)) return *d;
    if (warnings)
      warnings->push_back(
          {lineno, "undeclared symbol '" + name + "' in " + proc->name});
    proc->locals.push_back({name, kind, width});
    return proc->locals.back();
  }
};

Operand parse_operand(const std::string& tok, SymbolScope& scope,
                      int lineno) {
  if (tok.size() < 3 || tok[1] != ':')
    throw ParseError("bad operand token '" + tok + "'", lineno);
  char tag = tok[0];
  std::string rest = tok.substr(2);

  if (tag == 'c') {
    auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw ParseError("constant needs a width: '" + tok + "'", lineno);
    Operand op = Operand::cst(to_int(rest.substr(0, colon), lineno),
                              (int)to_int(rest.substr(colon + 1), lineno));
    if (op.width < 1) throw ParseError("width must be >= 1", lineno);
    return op;
  }
  if (tag == 'r') {
    auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw ParseError("register needs a width: '" + tok + "'", lineno);
    std::string name = rest.substr(0, colon);
    int width = (int)to_int(rest.substr(colon + 1), lineno);
    if (width < 1) throw ParseError("width must be >= 1", lineno);
    scope.resolve(name, OperandKind::Register, width, lineno);
    return Operand::reg(name, width);
  }
  if (tag == 'm' || tag == 'a') {
    OperandKind kind =
        tag == 'm' ? OperandKind::MemSymbol : OperandKind::AddrSymbol;
    const SymbolDecl& decl = scope.resolve(rest, kind, 32, lineno);
    return {kind, rest, 0, decl.width};
  }
  throw ParseError("bad operand tag '" + std::string(1, tag) + "'", lineno);
}

struct PendingDep {
  int i, j;
  Operand via;
  int lineno;
};

void close_block(BasicBlock& bb, std::vector<PendingDep>& deps) {
  for (const PendingDep& d : deps) {
    if (d.i < 0 || d.j >= bb.size() || d.i >= d.j)
      throw ParseError("dep endpoints must satisfy 0 <= i < j < block size",
                       d.lineno);
    DepKind kind = d.via.is_reg() ? DepKind::RegisterFlow
                                  : DepKind::MemoryOrder;
    bb.edges.push_back({d.i, d.j, d.via, kind});
    bb.explicit_deps = true;
  }
  deps.clear();
  std::sort(bb.edges.begin(), bb.edges.end());
  bb.edges.erase(std::unique(bb.edges.begin(), bb.edges.end()),
                 bb.edges.end());
}

}  // namespace

Program parse_iseq(std::string_view text, std::vector<Diagnostic>* warnings) {
  Program prog;
  enum class State { Top, Proc, Block } state = State::Top;
  bool saw_program = false;
  Procedure* proc = nullptr;
  BasicBlock* bb = nullptr;
  std::vector<PendingDep> pending_deps;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto toks = split_ws(line);
    const std::string& kw = toks[0];

    if (state == State::Block) {
      if (kw == "end") {
        close_block(*bb, pending_deps);
        bb = nullptr;
        state = State::Proc;
        continue;
      }
      SymbolScope scope{&prog, proc, warnings};
      if (kw == "dep") {
        if (toks.size() != 4)
          throw ParseError("dep <i> <j> <operand>", lineno);
        pending_deps.push_back({(int)to_int(toks[1], lineno),
                                (int)to_int(toks[2], lineno),
                                parse_operand(toks[3], scope, lineno),
                                lineno});
        continue;
      }
      // Instruction: "<id>: <opcode> [dsts] <- [srcs]".
      auto arrow = line.find("<-");
      if (arrow == std::string::npos)
        throw ParseError("expected instruction or 'end'", lineno);
      std::string head = trim(line.substr(0, arrow));
      std::string tail = trim(line.substr(arrow + 2));
      auto colon = head.find(':');
      if (colon == std::string::npos)
        throw ParseError("instruction needs '<id>:'", lineno);
      Instruction instr;
      instr.id = (int)to_int(trim(head.substr(0, colon)), lineno);
      std::string rest = trim(head.substr(colon + 1));
      auto sp = rest.find_first_of(" \t");
      instr.opcode = sp == std::string::npos ? rest : rest.substr(0, sp);
      if (instr.opcode.empty()) throw ParseError("missing opcode", lineno);
      std::string dsts = sp == std::string::npos ? "" : trim(rest.substr(sp));
      for (const auto& t : split_commas(dsts))
        instr.dests.push_back(parse_operand(t, scope, lineno));
      for (const auto& t : split_commas(tail))
        instr.srcs.push_back(parse_operand(t, scope, lineno));
      if (instr.id != bb->size())
        throw ParseError("instruction ids must be consecutive from 0, got " +
                             std::to_string(instr.id),
                         lineno);
      bb->instructions.push_back(std::move(instr));
      continue;
    }

    if (state == State::Proc) {
      if (kw == "end") {
        proc = nullptr;
        state = State::Top;
      } else if (kw == "lsym") {
        if (toks.size() != 4)
          throw ParseError("lsym <name> <kind> <width>", lineno);
        int width = (int)to_int(toks[3], lineno);
        if (width < 1) throw ParseError("width must be >= 1", lineno);
        SymbolScope scope{&prog, proc, warnings};
        if (scope.find(toks[1]) != nullptr)
          throw ParseError("duplicate symbol '" + toks[1] + "'", lineno);
        proc->locals.push_back({toks[1], kind_letter(toks[2], lineno), width});
      } else if (kw == "bb") {
        if (toks.size() != 2) throw ParseError("bb <label>", lineno);
        if (proc->find_block(toks[1]) != nullptr)
          throw ParseError("duplicate label '" + toks[1] + "'", lineno);
        proc->blocks.push_back({});
        bb = &proc->blocks.back();
        bb->label = toks[1];
        state = State::Block;
      } else {
        throw ParseError("expected lsym, bb or end", lineno);
      }
      continue;
    }

    // Top level.
    if (kw == "program") {
      if (toks.size() != 2) throw ParseError("program <name>", lineno);
      if (saw_program) throw ParseError("duplicate program statement", lineno);
      prog.name = toks[1];
      saw_program = true;
    } else if (kw == "gsym") {
      if (toks.size() != 4)
        throw ParseError("gsym <name> <kind> <width>", lineno);
      int width = (int)to_int(toks[3], lineno);
      if (width < 1) throw ParseError("width must be >= 1", lineno);
      for (const auto& g : prog.globals)
        if (g.name == toks[1])
          throw ParseError("duplicate symbol '" + toks[1] + "'", lineno);
      prog.globals.push_back({toks[1], kind_letter(toks[2], lineno), width});
    } else if (kw == "proc") {
      if (toks.size() != 2) throw ParseError("proc <name>", lineno);
      if (prog.find_proc(toks[1]) != nullptr)
        throw ParseError("duplicate procedure '" + toks[1] + "'", lineno);
      prog.procedures.push_back({});
      proc = &prog.procedures.back();
      proc->name = toks[1];
      state = State::Proc;
    } else {
      throw ParseError("expected program, gsym or proc", lineno);
    }
  }

  if (!saw_program) throw ParseError("missing 'program' statement", 1);
  if (state != State::Top) throw ParseError("unterminated block", lineno);
  return prog;
}

std::string serialize_iseq(const Program& prog) {
  std::ostringstream out;
  out << "program " << prog.name << "\n";
  for (const auto& g : prog.globals)
    out << "gsym " << g.name << " " << kind_letter(g.kind) << " " << g.width
        << "\n";
  for (const auto& proc : prog.procedures) {
    out << "proc " << proc.name << "\n";
    for (const auto& l : proc.locals)
      out << "lsym " << l.name << " " << kind_letter(l.kind) << " " << l.width
          << "\n";
    for (const auto& bb : proc.blocks) {
      out << "bb " << bb.label << "\n";
      for (const auto& in : bb.instructions) {
        out << in.id << ": " << in.opcode;
        for (std::size_t i = 0; i < in.dests.size(); ++i)
          out << (i == 0 ? " " : ", ") << to_token(in.dests[i]);
        out << " <-";
        for (std::size_t i = 0; i < in.srcs.size(); ++i)
          out << (i == 0 ? " " : ", ") << to_token(in.srcs[i]);
        out << "\n";
      }
      if (bb.explicit_deps)
        for (const auto& e : bb.edges)
          out << "dep " << e.producer << " " << e.consumer << " "
              << to_token(e.via) << "\n";
      out << "end\n";
    }
    out << "end\n";
  }
  return out.str();
}

Cfg parse_cfg(std::string_view text, const Program& prog) {
  Cfg cfg;
  const Procedure* proc = nullptr;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    if (toks[0] == "proc") {
      if (toks.size() != 2) throw ParseError("proc <name>", lineno);
      proc = prog.find_proc(toks[1]);
      if (proc == nullptr)
        throw ParseError("unknown procedure '" + toks[1] + "'", lineno);
      cfg.edges[proc->name];
    } else if (toks[0] == "edge") {
      if (proc == nullptr)
        throw ParseError("edge before any proc statement", lineno);
      if (toks.size() != 4)
        throw ParseError("edge <src> <dst> <ft|br|call>", lineno);
      CfgEdge e;
      e.src = toks[1];
      e.dst = toks[2];
      if (toks[3] == "ft") e.type = CfgEdgeType::Fallthrough;
      else if (toks[3] == "br") e.type = CfgEdgeType::Branch;
      else if (toks[3] == "call") e.type = CfgEdgeType::Call;
      else throw ParseError("edge type must be ft, br or call", lineno);
      if (proc->find_block(e.src) == nullptr)
        throw ParseError("unknown label '" + e.src + "'", lineno);
      if (proc->find_block(e.dst) == nullptr) {
        // Call edges may target another procedure; that is not an error.
        if (e.type == CfgEdgeType::Call) e.external = true;
        else throw ParseError("unknown label '" + e.dst + "'", lineno);
      }
      cfg.edges[proc->name].push_back(std::move(e));
    } else {
      throw ParseError("expected proc or edge", lineno);
    }
  }
  return cfg;
}

std::string serialize_cfg(const Cfg& cfg) {
  std::ostringstream out;
  for (const auto& [proc, edges] : cfg.edges) {
    out << "proc " << proc << "\n";
    for (const auto& e : edges) {
      const char* t = e.type == CfgEdgeType::Fallthrough ? "ft"
                      : e.type == CfgEdgeType::Branch    ? "br"
                                                         : "call";
      out << "edge " << e.src << " " << e.dst << " " << t << "\n";
    }
  }
  return out.str();
}

Profile parse_profile(std::string_view text, const Program& prog,
                      std::vector<Diagnostic>* warnings) {
  Profile profile;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    if (toks[0] != "freq" || toks.size() != 4)
      throw ParseError("freq <proc> <label> <count>", lineno);
    long long count = to_int(toks[3], lineno);
    if (count < 0) throw ParseError("negative frequency", lineno);
    const Procedure* proc = prog.find_proc(toks[1]);
    if (proc == nullptr || proc->find_block(toks[2]) == nullptr) {
      if (warnings)
        warnings->push_back({lineno, "unknown block '" + toks[1] + "/" +
                                         toks[2] + "', line skipped"});
      continue;
    }
    profile.add(toks[1], toks[2], (std::uint64_t)count);
  }
  return profile;
}

std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  for (const auto& [key, f] : profile.freq)
    out << "freq " << key.first << " " << key.second << " " << f << "\n";
  return out.str();
}

void declare_symbols(Program& prog) {
  for (auto& proc : prog.procedures) {
    auto declared = [&](const std::string& name) {
      for (const auto& d : proc.locals)
        if (d.name == name) return true;
      for (const auto& d : prog.globals)
        if (d.name == name) return true;
      return false;
    };
    for (const auto& bb : proc.blocks)
      for (const auto& in : bb.instructions)
        for (const auto* list : {&in.dests, &in.srcs})
          for (const auto& op : *list)
            if (!op.is_const() && !declared(op.name))
              proc.locals.push_back({op.name, op.kind, op.width});
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace ciex
