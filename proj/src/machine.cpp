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

#include "ciex/machine.hpp"

#include <cstdio>
#include <sstream>

#include "ciex/error.hpp"

namespace ciex {

void MachineDesc::add_op(OperatorSpec spec) {
  if (index_.count(spec.mnemonic))
    throw Error("duplicate operator '" + spec.mnemonic + "'");
  if (spec.sw_cycles < 0 || spec.hw_delay < 0 || spec.hw_area < 0)
    throw Error("negative cost for operator '" + spec.mnemonic + "'");
  if ((spec.flags & kFlagLoad) && (spec.flags & kFlagStore))
    throw Error("operator '" + spec.mnemonic + "' is both load and store");
  index_[spec.mnemonic] = static_cast<int>(ops_.size());
  ops_.push_back(std::move(spec));
}

const OperatorSpec* MachineDesc::find_op(const std::string& mnemonic) const {
  auto it = index_.find(mnemonic);
  return it == index_.end() ? nullptr : &ops_[it->second];
}

const OperatorSpec& MachineDesc::lookup_op(const std::string& mnemonic) const {
  const OperatorSpec* spec = find_op(mnemonic);
  if (spec == nullptr) throw UnknownOpcode(mnemonic);
  return *spec;
}

std::set<std::string> MachineDesc::expand(const std::string& name) const {
  auto it = groups.find(name);
  if (it == groups.end()) return {name};
  return {it->second.begin(), it->second.end()};
}

std::set<std::string> MachineDesc::forbidden_defaults() const {
  std::set<std::string> out;
  for (const auto& op : ops_)
    if (op.forbidden_default()) out.insert(op.mnemonic);
  return out;
}

std::set<std::string> MachineDesc::memory_ops() const {
  std::set<std::string> out;
  for (const auto& op : ops_)
    if (op.is_mem()) out.insert(op.mnemonic);
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

unsigned parse_flag(const std::string& f, int lineno) {
  if (f == "load") return kFlagLoad;
  if (f == "store") return kFlagStore;
  if (f == "cti") return kFlagCti;
  if (f == "forbidden-default") return kFlagForbiddenDefault;
  if (f == "comm") return kFlagCommutative;
  throw ParseError("unknown flag '" + f + "'", lineno);
}

// key=value pair of an "op" or "memports" statement.
std::pair<std::string, std::string> split_kv(const std::string& tok,
                                             int lineno) {
  auto eq = tok.find('=');
  if (eq == std::string::npos)
    throw ParseError("expected key=value, got '" + tok + "'", lineno);
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

std::string trim_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

MachineDesc parse_bxir(std::string_view text) {
  MachineDesc md;
  bool saw_machine = false;
  bool saw_clock = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "machine") {
      if (toks.size() != 2) throw ParseError("machine <name>", lineno);
      md.name = toks[1];
      saw_machine = true;
    } else if (kw == "clock") {
      if (toks.size() != 2) throw ParseError("clock <real>", lineno);
      md.clock = std::stod(toks[1]);
      if (md.clock <= 0) throw ParseError("clock must be positive", lineno);
      saw_clock = true;
    } else if (kw == "memports") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto [k, v] = split_kv(toks[i], lineno);
        int n = std::stoi(v);
        if (k == "read") md.memports.read_ports = n;
        else if (k == "write") md.memports.write_ports = n;
        else if (k == "cycles") md.memports.mem_cycles = n;
        else if (k == "local") md.memports.local_access_cycles = n;
        else throw ParseError("unknown memports key '" + k + "'", lineno);
      }
      if (md.memports.read_ports < 1 || md.memports.write_ports < 1 ||
          md.memports.mem_cycles < 1 || md.memports.local_access_cycles < 0)
        throw ParseError("memports values out of range", lineno);
    } else if (kw == "op") {
      if (toks.size() < 2) throw ParseError("op <mnemonic> ...", lineno);
      OperatorSpec spec;
      spec.mnemonic = toks[1];
      bool saw_area = false;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        auto [k, v] = split_kv(toks[i], lineno);
        if (k == "arity") {
          if (v == "var") spec.variadic = true;
          else spec.arity = std::stoi(v);
        } else if (k == "sw") {
          spec.sw_cycles = std::stoi(v);
        } else if (k == "delay") {
          spec.hw_delay = std::stod(v);
        } else if (k == "area") {
          spec.hw_area = std::stod(v);
          saw_area = true;
        } else if (k == "flags") {
          std::stringstream fs(v);
          std::string f;
          while (std::getline(fs, f, ','))
            if (!f.empty()) spec.flags |= parse_flag(f, lineno);
        } else {
          throw ParseError("unknown op key '" + k + "'", lineno);
        }
      }
      if (!saw_area)
        throw ParseError("operator '" + spec.mnemonic + "' needs area=",
                         lineno);
      try {
        md.add_op(std::move(spec));
      } catch (const Error& e) {
        throw ParseError(e.what(), lineno);
      }
    } else if (kw == "group") {
      if (toks.size() < 3) throw ParseError("group <name> <op...>", lineno);
      md.groups[toks[1]] = {toks.begin() + 2, toks.end()};
    } else {
      throw ParseError("unknown statement '" + kw + "'", lineno);
    }
  }

  if (!saw_machine) throw ParseError("missing 'machine' statement", 1);
  if (!saw_clock) throw ParseError("missing 'clock' statement", 1);
  return md;
}

std::string serialize_bxir(const MachineDesc& md) {
  std::string out;
  out += "machine " + md.name + "\n";
  out += "clock " + trim_real(md.clock) + "\n";
  out += "memports read=" + std::to_string(md.memports.read_ports) +
         " write=" + std::to_string(md.memports.write_ports) +
         " cycles=" + std::to_string(md.memports.mem_cycles) +
         " local=" + std::to_string(md.memports.local_access_cycles) + "\n";
  for (const auto& op : md.ops()) {
    out += "op " + op.mnemonic;
    out += op.variadic ? " arity=var" : " arity=" + std::to_string(op.arity);
    out += " sw=" + std::to_string(op.sw_cycles);
    out += " delay=" + trim_real(op.hw_delay);
    out += " area=" + trim_real(op.hw_area);
    std::string flags;
    auto append = [&flags](const char* f) {
      if (!flags.empty()) flags += ',';
      flags += f;
    };
    if (op.is_load()) append("load");
    if (op.is_store()) append("store");
    if (op.is_cti()) append("cti");
    if (op.forbidden_default()) append("forbidden-default");
    if (op.commutative()) append("comm");
    if (!flags.empty()) out += " flags=" + flags;
    out += "\n";
  }
  for (const auto& [name, members] : md.groups) {
    out += "group " + name;
    for (const auto& m : members) out += " " + m;
    out += "\n";
  }
  return out;
}

}  // namespace ciex
