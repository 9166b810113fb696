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

#ifndef CIEX_ERROR_HPP
#define CIEX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ciex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax or consistency error while reading a text format.
/// Carries the 1-based source line (and column when known).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col = 0)
      : Error(format(msg, line, col)), line_(line), col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string format(const std::string& msg, int line, int col) {
    std::string s = "line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ": " + msg;
  }
  int line_ = 0;
  int col_ = 0;
};

/// Lookup of a mnemonic that the active machine description does not define.
class UnknownOpcode : public Error {
 public:
  explicit UnknownOpcode(const std::string& mnemonic)
      : Error("unknown opcode '" + mnemonic + "'"), mnemonic_(mnemonic) {}
  const std::string& mnemonic() const { return mnemonic_; }

 private:
  std::string mnemonic_;
};

/// Non-fatal finding reported alongside a parse result.
struct Diagnostic {
  int line = 0;
  std::string message;
};

}  // namespace ciex

#endif  // CIEX_ERROR_HPP
