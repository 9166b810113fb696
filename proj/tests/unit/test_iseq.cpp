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

#include "ciex/corpus.hpp"
#include "ciex/iseq.hpp"
#include "test_util.hpp"

using namespace ciex;

TEST_SUITE_BEGIN("iseq");

TEST_CASE("minimal program parses") {
  Program p = parse_iseq("program p\nproc f\nbb L0\nend\nend");
  CHECK(p.name == "p");
  REQUIRE(p.procedures.size() == 1);
  CHECK(p.procedures[0].name == "f");
  REQUIRE(p.procedures[0].blocks.size() == 1);
  CHECK(p.procedures[0].blocks[0].instructions.empty());
}

TEST_CASE("instructions and constants") {
  Program p = parse_iseq(
      "program p\nproc f\nbb L0\n"
      "0: add r:t1:32 <- r:a:32, r:b:32\n"
      "1: mul r:t2:32 <- r:t1:32, c:4:32\n"
      "end\nend");
  const BasicBlock& bb = testutil::only_block(p);
  REQUIRE(bb.instructions.size() == 2);
  CHECK(bb.instructions[0].opcode == "add");
  CHECK(bb.instructions[1].srcs[1].is_const());
  CHECK(bb.instructions[1].srcs[1].value == 4);
  CHECK(bb.instructions[1].srcs[1].width == 32);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_iseq("program p\nproc f\nbb L0\nbogus\nend\nend"),
                  ParseError);
  try {
    parse_iseq("program p\nproc f\nbb L0\nbogus\nend\nend");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  // duplicate label
  CHECK_THROWS_AS(
      parse_iseq("program p\nproc f\nbb L0\nend\nbb L0\nend\nend"),
      ParseError);
  // non-consecutive ids
  CHECK_THROWS_AS(parse_iseq("program p\nproc f\nbb L0\n"
                             "1: add r:t:32 <- r:a:32, r:b:32\nend\nend"),
                  ParseError);
  // duplicate procedure
  CHECK_THROWS_AS(parse_iseq("program p\nproc f\nend\nproc f\nend"),
                  ParseError);
}

TEST_CASE("undeclared symbols warn but parse") {
  std::vector<Diagnostic> warnings;
  Program p = parse_iseq(
      "program p\nproc f\nbb L0\n0: add r:t:32 <- r:a:32, r:b:32\nend\nend",
      &warnings);
  CHECK(warnings.size() == 3);  // t, a, b auto-declared
  CHECK(p.procedures[0].locals.size() == 3);
}

TEST_CASE("round trip is structurally idempotent") {
  const char* text =
      "program p\n"
      "gsym G m 32\n"
      "proc f\n"
      "lsym a r 32\n"
      "bb L0\n"
      "0: lod r:x:32 <- m:G\n"
      "1: add r:t:32 <- r:x:32, r:a:32\n"
      "2: str m:G <- r:t:32\n"
      "end\n"
      "end\n";
  Program p1 = parse_iseq(text);
  std::string s1 = serialize_iseq(p1);
  Program p2 = parse_iseq(s1);
  std::string s2 = serialize_iseq(p2);
  CHECK(s1 == s2);
}

TEST_CASE("round trip over generated corpora") {
  const MachineDesc& md = builtin_machine("suifvmenh");
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
    CorpusSpec spec;
    spec.seed = seed;
    spec.blocks = 3;
    spec.mem_fraction = 0.2;
    auto [prog, profile] = random_corpus(spec, md);
    std::string s1 = serialize_iseq(prog);
    std::string s2 = serialize_iseq(parse_iseq(s1));
    CHECK(s1 == s2);
  }
}

TEST_CASE("explicit dep lines survive round trip") {
  const char* text =
      "program p\nproc f\nlsym a r 32\nlsym b r 32\nbb L0\n"
      "0: add r:t:32 <- r:a:32, r:b:32\n"
      "1: mul r:u:32 <- r:t:32, r:t:32\n"
      "dep 0 1 r:t:32\n"
      "end\nend\n";
  Program p = parse_iseq(text);
  const BasicBlock& bb = testutil::only_block(p);
  CHECK(bb.explicit_deps);
  REQUIRE(bb.edges.size() == 1);
  CHECK(bb.edges[0].producer == 0);
  CHECK(bb.edges[0].kind == DepKind::RegisterFlow);
  std::string s1 = serialize_iseq(p);
  CHECK(s1 == serialize_iseq(parse_iseq(s1)));
  // derived edges are not re-attached over explicit ones
  const MachineDesc& md = builtin_machine("suifvmenh");
  Program p2 = parse_iseq(text);
  attach_ddg(p2, md);
  CHECK(testutil::only_block(p2).edges.size() == 1);
}

TEST_CASE("cfg parsing") {
  Program p = parse_iseq(
      "program p\nproc f\nbb L0\nend\nbb L1\nend\nend\nproc g\nbb E\nend\nend");
  Cfg cfg = parse_cfg("proc f\nedge L0 L1 ft\nedge L1 L0 br\nedge L0 g call\n",
                      p);
  REQUIRE(cfg.edges.at("f").size() == 3);
  CHECK(cfg.edges.at("f")[0].type == CfgEdgeType::Fallthrough);
  CHECK(cfg.edges.at("f")[1].type == CfgEdgeType::Branch);
  CHECK(cfg.edges.at("f")[2].external);  // call to another procedure
  CHECK_THROWS_AS(parse_cfg("proc f\nedge L0 NOPE ft\n", p), ParseError);
  CHECK_THROWS_AS(parse_cfg("proc nope\n", p), ParseError);
}

TEST_CASE("profile accumulates and defaults to zero") {
  Program p = parse_iseq("program p\nproc f\nbb L0\nend\nend");
  Profile prof = parse_profile("freq f L0 100\nfreq f L0 200\n", p);
  CHECK(prof.get("f", "L0") == 300);
  CHECK(prof.get("f", "L1") == 0);

  std::vector<Diagnostic> warnings;
  Profile prof2 = parse_profile("freq f NOPE 5\nfreq f L0 1000\n", p,
                                &warnings);
  CHECK(warnings.size() == 1);  // unknown label skipped
  CHECK(prof2.get("f", "L0") == 1000);
  CHECK_THROWS_AS(parse_profile("freq f L0 -1\n", p), ParseError);
}

TEST_SUITE_END();
