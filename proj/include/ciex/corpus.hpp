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

#ifndef CIEX_CORPUS_HPP
#define CIEX_CORPUS_HPP

#include <cstdint>
#include <utility>

#include "ciex/ir.hpp"
#include "ciex/machine.hpp"

namespace ciex {

/// Deterministic generator parameters for random dataflow-block programs.
struct CorpusSpec {
  std::uint64_t seed = 1;
  int blocks = 1;
  int min_nodes = 3;
  int max_nodes = 10;
  double mem_fraction = 0.0;    // share of load/store nodes
  double reuse_fraction = 0.5;  // chance a source reads an earlier result
  double const_fraction = 0.15;
  std::uint64_t max_freq = 1000;
};

/// Self-contained xorshift generator so output is identical across
/// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next();
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1).
  double real();

 private:
  std::uint64_t state_;
};

/// Generates a single-procedure program of random dataflow blocks over the
/// plain arithmetic operators of `md` (plus loads/stores per mem_fraction)
/// together with a random profile. Output is deterministic in the spec.
std::pair<Program, Profile> random_corpus(const CorpusSpec& spec,
                                          const MachineDesc& md);

}  // namespace ciex

#endif  // CIEX_CORPUS_HPP
