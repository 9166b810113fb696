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

#ifndef CIEX_ISEQ_HPP
#define CIEX_ISEQ_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ciex/error.hpp"
#include "ciex/ir.hpp"

namespace ciex {

// ISeq is a line-oriented flat CDFG text format ('#' starts a comment):
//
//   program <name>
//   gsym <name> <r|m|a> <width>
//   proc <name>
//   lsym <name> <r|m|a> <width>
//   bb <label>
//   <id>: <opcode> [<dst>(,<dst>)*] <- [<src>(,<src>)*]
//   dep <i> <j> <operand-token>
//   end            # closes the bb
//   end            # closes the proc
//
// Operand tokens: r:<name>:<width> | c:<int>:<width> | m:<sym> | a:<sym>.
// Memory/address symbols take their width from the symbol tables (default
// 32). "dep" lines supply an explicit edge set for imported pattern
// libraries; blocks without them get edges derived at analysis time.

/// Parses an ISeq file. Dependence edges are left empty unless supplied by
/// explicit "dep" lines. Throws ParseError on malformed input, duplicate
/// labels, or non-consecutive instruction ids; undeclared symbols are
/// reported through `warnings` and auto-declared.
Program parse_iseq(std::string_view text,
                   std::vector<Diagnostic>* warnings = nullptr);

/// Canonical text form; parse(serialize(parse(x))) is structurally equal
/// to parse(x).
std::string serialize_iseq(const Program& prog);

/// CFG file: "proc <name>" followed by "edge <src> <dst> <ft|br|call>"
/// lines. Unknown labels are fatal except for call targets, which may name
/// external procedures and are flagged as such.
Cfg parse_cfg(std::string_view text, const Program& prog);
std::string serialize_cfg(const Cfg& cfg);

/// Profile file: "freq <proc> <label> <count>" lines, accumulating.
/// Unknown labels warn and are skipped; negative counts are fatal.
Profile parse_profile(std::string_view text, const Program& prog,
                      std::vector<Diagnostic>* warnings = nullptr);
std::string serialize_profile(const Profile& profile);

/// Appends declarations for any symbol used but not declared, in first-use
/// order (the same order the parser auto-declares them). Programs built
/// programmatically should run this before serialization.
void declare_symbols(Program& prog);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ciex

#endif  // CIEX_ISEQ_HPP
