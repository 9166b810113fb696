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

#include <doctest.h>

#include <algorithm>

#include "ciex/corpus.hpp"
#include "ciex/isomatch.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ciex;
using testutil::block_program;
using testutil::graph_of;

namespace {

const MachineDesc& vm() { return builtin_machine("suifvmenh"); }

// Random patterns for matching stress: convex node sets of random blocks.
std::vector<PatternGraph> pattern_pool(std::uint64_t seed, int count,
                                       int max_nodes) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.blocks = count;
  spec.min_nodes = 2;
  spec.max_nodes = max_nodes;
  spec.mem_fraction = 0.15;
  auto [prog, _] = random_corpus(spec, vm());
  std::vector<PatternGraph> out;
  Rng rng(seed * 31 + 1);
  for (const auto& bb : prog.procedures[0].blocks) {
    // random contiguous id range: always convex
    int n = bb.size();
    int lo = (int)rng.below(n);
    int hi = lo + (int)rng.below(n - lo);
    std::vector<int> nodes;
    for (int i = lo; i <= hi; ++i) nodes.push_back(i);
    out.push_back(PatternGraph::build(bb, vm(), nodes));
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("isomatch");

TEST_CASE("iso: relabeling matches, label swap does not") {
  Program p1 = block_program({"add r:t1:32 <- r:a:32, r:b:32",
                              "mul r:t2:32 <- r:t1:32, r:c:32"},
                             vm());
  Program p2 = block_program({"add r:u1:32 <- r:x:32, r:y:32",
                              "mul r:u2:32 <- r:u1:32, r:z:32"},
                             vm());
  Program p3 = block_program({"mul r:t1:32 <- r:a:32, r:b:32",
                              "add r:t2:32 <- r:t1:32, r:c:32"},
                             vm());
  CHECK(iso_equal(graph_of(p1, vm()), graph_of(p2, vm())));
  CHECK_FALSE(iso_equal(graph_of(p1, vm()), graph_of(p3, vm())));
}

TEST_CASE("iso: commutative operands swap, ordered ones do not") {
  Program a = block_program({"add r:t:32 <- r:x:32, c:1:32"}, vm());
  Program b = block_program({"add r:t:32 <- c:1:32, r:x:32"}, vm());
  CHECK(iso_equal(graph_of(a, vm()), graph_of(b, vm())));

  Program c = block_program({"sub r:t:32 <- r:x:32, c:1:32"}, vm());
  Program d = block_program({"sub r:t:32 <- c:1:32, r:x:32"}, vm());
  CHECK_FALSE(iso_equal(graph_of(c, vm()), graph_of(d, vm())));
}

TEST_CASE("iso: constant matching mode") {
  Program a = block_program({"mul r:t:32 <- r:x:32, c:4:32"}, vm());
  Program b = block_program({"mul r:t:32 <- r:x:32, c:5:32"}, vm());
  CHECK_FALSE(iso_equal(graph_of(a, vm()), graph_of(b, vm()),
                        {ConstMatch::Value}));
  CHECK(iso_equal(graph_of(a, vm()), graph_of(b, vm()), {ConstMatch::Shape}));
}

TEST_CASE("iso: structure beyond node multisets") {
  // same opcode multiset, different wiring
  Program a = block_program({"add r:t1:32 <- r:x:32, r:y:32",
                             "add r:t2:32 <- r:t1:32, r:z:32",
                             "mul r:t3:32 <- r:t2:32, r:w:32"},
                            vm());
  Program b = block_program({"add r:t1:32 <- r:x:32, r:y:32",
                             "add r:t2:32 <- r:z:32, r:w:32",
                             "mul r:t3:32 <- r:t1:32, r:t2:32"},
                            vm());
  CHECK_FALSE(iso_equal(graph_of(a, vm()), graph_of(b, vm())));
}

TEST_CASE("iso equals the permutation oracle on random pairs") {
  auto pool = pattern_pool(421, 60, 6);
  MatchOptions opts;
  int positives = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); ++j) {
      bool got = iso_equal(pool[i], pool[j], opts);
      bool want = oracle::iso_permute(pool[i], pool[j], opts);
      CHECK(got == want);
      positives += want;
    }
  CHECK(positives >= (int)pool.size());  // at least the diagonal
}

TEST_CASE("iso is an equivalence relation on samples") {
  auto pool = pattern_pool(77, 25, 5);
  for (const auto& g : pool) CHECK(iso_equal(g, g));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      CHECK(iso_equal(pool[i], pool[j]) == iso_equal(pool[j], pool[i]));
    }
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      for (std::size_t k = 0; k < pool.size(); ++k)
        if (iso_equal(pool[i], pool[j]) && iso_equal(pool[j], pool[k]))
          CHECK(iso_equal(pool[i], pool[k]));
}

TEST_CASE("hash is invariant on isomorphic pairs") {
  auto pool = pattern_pool(901, 40, 6);
  MatchOptions opts;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (iso_equal(pool[i], pool[j], opts))
        CHECK(pool[i].shape_hash(opts) == pool[j].shape_hash(opts));
}

TEST_CASE("subpattern: basic containment") {
  Program chain = block_program({"add r:t1:32 <- r:a:32, r:b:32",
                                 "mul r:t2:32 <- r:t1:32, r:c:32"},
                                vm());
  Program single = block_program({"add r:t:32 <- r:x:32, r:y:32"}, vm());
  Program triple = block_program({"add r:t1:32 <- r:a:32, r:b:32",
                                  "mul r:t2:32 <- r:t1:32, r:c:32",
                                  "neg r:t3:32 <- r:t2:32"},
                                 vm());
  CHECK(is_subpattern(graph_of(single, vm()), graph_of(chain, vm())));
  CHECK_FALSE(is_subpattern(graph_of(triple, vm()), graph_of(chain, vm())));
}

TEST_CASE("subpattern: induced embedding excludes internal edges") {
  // p = two independent adds; q = two adds wired together. The embedding
  // would put an edge between image nodes, so it is not induced.
  Program p = block_program({"add r:t1:32 <- r:a:32, r:b:32",
                             "add r:t2:32 <- r:c:32, r:d:32"},
                            vm());
  Program q = block_program({"add r:t1:32 <- r:a:32, r:b:32",
                             "add r:t2:32 <- r:t1:32, r:c:32"},
                            vm());
  CHECK_FALSE(is_subpattern(graph_of(p, vm()), graph_of(q, vm())));
  CHECK(is_subpattern(graph_of(q, vm()), graph_of(q, vm())));
}

TEST_CASE("subpattern equals the enumeration oracle on random pairs") {
  auto pool = pattern_pool(5511, 40, 5);
  MatchOptions opts;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (pool[i].size() > 5 || pool[j].size() > 5) continue;
      bool got = is_subpattern(pool[i], pool[j], opts);
      bool want = oracle::subiso_enumerate(pool[i], pool[j], opts);
      CHECK(got == want);
    }
}

TEST_CASE("mutual subpatterns are isomorphic") {
  auto pool = pattern_pool(31337, 30, 5);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (is_subpattern(pool[i], pool[j]) && is_subpattern(pool[j], pool[i]))
        CHECK(iso_equal(pool[i], pool[j]));
}

TEST_CASE("dedup groups copies and conserves instances") {
  Program p = parse_iseq(
      "program p\nproc f\nlsym a r 32\nlsym b r 32\n"
      "bb L0\n0: add r:t:32 <- r:a:32, r:b:32\n"
      "1: mul r:u:32 <- r:t:32, r:t:32\nend\n"
      "bb L1\n0: add r:t1:32 <- r:b:32, r:a:32\n"
      "1: mul r:u1:32 <- r:t1:32, r:t1:32\nend\n"
      "bb L2\n0: add r:t2:32 <- r:a:32, r:a:32\n"
      "1: mul r:u2:32 <- r:t2:32, r:t2:32\nend\n"
      "bb L3\n0: sub r:v:32 <- r:a:32, r:b:32\nend\nend\n");
  attach_ddg(p, vm());
  std::vector<Pattern> pats;
  for (const char* label : {"L0", "L1", "L2", "L3"}) {
    Pattern pat;
    pat.proc = "f";
    pat.block = label;
    const BasicBlock& bb = *p.procedures[0].find_block(label);
    pat.nodes = testutil::all_ids(bb);
    pats.push_back(pat);
  }
  auto classes = dedup(materialize(pats, p, vm()));
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].instances.size() == 3);  // add-mul shape, thrice
  CHECK(classes[1].instances.size() == 1);
  std::size_t total = 0;
  for (const auto& c : classes) total += c.instances.size();
  CHECK(total == pats.size());
}

TEST_CASE("dedup on empty input") {
  CHECK(dedup({}).empty());
}

TEST_CASE("dedup conserves instances on random corpora") {
  CorpusSpec spec;
  spec.seed = 1009;
  spec.blocks = 10;
  auto [prog, profile] = random_corpus(spec, vm());
  Constraints c;
  c.max_inputs = 4;
  c.max_outputs = 2;
  Candidates cand = gen_program(prog, profile, vm(), c);
  auto classes = dedup(materialize(cand.patterns, prog, vm()));
  std::size_t total = 0;
  for (const auto& cls : classes) total += cls.instances.size();
  CHECK(total == cand.patterns.size());
  // no two representatives isomorphic
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      CHECK_FALSE(iso_equal(classes[i].rep.graph, classes[j].rep.graph));
}

TEST_CASE("library export/import round-trips representatives") {
  CorpusSpec spec;
  spec.seed = 303;
  spec.blocks = 8;
  spec.mem_fraction = 0.2;
  auto [prog, profile] = random_corpus(spec, vm());
  Constraints c;
  c.max_inputs = 4;
  c.max_outputs = 2;
  c.mem_mode = MemMode::Cdm;
  Candidates cand = gen_program(prog, profile, vm(), c);
  auto classes = dedup(materialize(cand.patterns, prog, vm()));

  std::string lib = export_library(classes, vm());
  auto imported = import_library(lib, vm());
  REQUIRE(imported.size() == classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i)
    CHECK(iso_equal(classes[i].rep.graph, imported[i].graph));

  // exporting the reimported classes again is byte-stable
  auto reclasses = dedup(imported);
  CHECK(export_library(reclasses, vm()) == lib);
}

TEST_CASE("imported library merges with fresh candidates") {
  Program p = block_program({"add r:t:32 <- r:a:32, r:b:32",
                             "mul r:u:32 <- r:t:32, r:c:32"},
                            vm());
  std::vector<Pattern> pats(1);
  pats[0].proc = "f";
  pats[0].block = "L0";
  pats[0].nodes = {0, 1};
  auto fresh = materialize(pats, p, vm());
  auto classes = dedup(fresh);
  std::string lib = export_library(classes, vm());

  auto merged = import_library(lib, vm());
  for (const auto& c : fresh) merged.push_back(c);
  auto merged_classes = dedup(merged);
  REQUIRE(merged_classes.size() == 1);
  CHECK(merged_classes[0].instances.size() == 2);
}

TEST_CASE("empty library file") {
  CHECK(import_library("program empty\n", vm()).empty());
}

TEST_SUITE_END();
