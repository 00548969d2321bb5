// Copyright 2026 The gplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sstream>

#include "gplan/error.hpp"
#include "gplan/plan.hpp"
#include "oracles.hpp"

using gplan::ErrorCode;
using gplan::ParseMode;
using gplan::Plan;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const gplan::Error& e) {
    return e.code();
  }
  FAIL("expected gplan::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("plan_model") {
TEST_CASE("parse a four-step keys plan") {
  auto parsed = gplan::parse_plan(
      "STEP 1: Take the keys from the desk. | STEP 2: Put the keys on the brown drawers. | END",
      ParseMode::Strict);
  CHECK(parsed.plan ==
        Plan({"Take the keys from the desk.", "Put the keys on the brown drawers."}));
  CHECK_FALSE(parsed.missing_terminator);
  CHECK(parsed.warnings.empty());
}

TEST_CASE("empty input is EmptyPlan") {
  CHECK(code_of([] { gplan::parse_plan(""); }) == ErrorCode::EmptyPlan);
  CHECK(code_of([] { gplan::parse_plan("   "); }) == ErrorCode::EmptyPlan);
  CHECK(code_of([] { gplan::parse_plan("END"); }) == ErrorCode::EmptyPlan);
}

TEST_CASE("terminator policy depends on the mode") {
  auto lenient = gplan::parse_plan("Step 1: go left | Step 2: stop", ParseMode::Lenient);
  CHECK(lenient.plan == Plan({"go left", "stop"}));
  CHECK(lenient.missing_terminator);
  CHECK(code_of([] { gplan::parse_plan("Step 1: go left | Step 2: stop", ParseMode::Strict); }) ==
        ErrorCode::MissingTerminator);
}

TEST_CASE("prefix is case-insensitive and whitespace tolerant") {
  auto p = gplan::parse_plan("step 1:a|STEP   2 :  b  |   end", ParseMode::Strict).plan;
  CHECK(p == Plan({"a", "b"}));
  auto q = gplan::parse_plan("Step: a | Step: b | END").plan;
  CHECK(q == Plan({"a", "b"}));
}

TEST_CASE("malformed segments") {
  CHECK(code_of([] { gplan::parse_plan("STEP 1: a | STEP 2: | END"); }) == ErrorCode::MalformedStep);
  CHECK(code_of([] { gplan::parse_plan("STEP 1: a | | END"); }) == ErrorCode::MalformedStep);
  CHECK(code_of([] { gplan::parse_plan("STEP 1: a | END | STEP 2: b", ParseMode::Strict); }) ==
        ErrorCode::MalformedStep);
  auto tolerated = gplan::parse_plan("STEP 1: a | END | STEP 2: b", ParseMode::Lenient);
  CHECK(tolerated.plan == Plan({"a"}));
  CHECK(tolerated.warnings.size() == 1);
}

TEST_CASE("numbering mismatch warns but keeps textual order") {
  auto p = gplan::parse_plan("STEP 1: a | STEP 3: b | STEP 2: c | END");
  CHECK(p.plan == Plan({"a", "b", "c"}));
  CHECK(p.warnings.size() == 2);
}

TEST_CASE("terminator glued to the final step") {
  auto p = gplan::parse_plan(
      "STEP 1: Turn around, go forward to the wall, turn right, go to the desk. | STEP 2: Take the "
      "keys from the desk. | STEP 3: Turn around, go forward to the brown drawers. | STEP 4: Put "
      "the keys on the brown drawers.  END",
      ParseMode::Strict);
  REQUIRE(p.plan.size() == 4);
  CHECK(p.plan[3] == "Put the keys on the brown drawers.");
  CHECK_FALSE(p.missing_terminator);
}

TEST_CASE("serialize") {
  CHECK(gplan::serialize_plan(Plan({"a", "b"})) == "STEP 1: a | STEP 2: b | END");
  CHECK(gplan::serialize_plan(Plan({"only"})) == "STEP 1: only | END");
}

TEST_CASE("plan invariants") {
  CHECK(code_of([] { Plan(std::vector<std::string>{}); }) == ErrorCode::EmptyPlan);
  CHECK(code_of([] { Plan({"a | b"}); }) == ErrorCode::InvalidStep);
  CHECK(code_of([] { Plan({"go to the END"}); }) == ErrorCode::InvalidStep);
  CHECK(code_of([] { Plan({" "}); }) == ErrorCode::InvalidStep);
  CHECK(Plan({"  padded  "})[0] == "padded");
  CHECK(Plan({"the end is near"}).size() == 1);  // lowercase "end" is ordinary text
}

TEST_CASE("round trip parse(serialize(p)) == p on random plans") {
  oracle::StepGen gen(7);
  for (int i = 0; i < 300; ++i) {
    Plan p(gen.steps(gen.length(1, 12)));
    CHECK(gplan::parse_plan(gplan::serialize_plan(p), ParseMode::Strict).plan == p);
  }
}

TEST_CASE("align examples") {
  Plan ref({"r1", "r2", "r3"});
  auto cut = gplan::align(Plan({"a", "b", "c", "d", "e"}), ref);
  CHECK(cut.generated == std::vector<std::string>{"a", "b", "c"});
  CHECK(cut.truncated_count == 2);
  CHECK(cut.padded_count == 0);

  auto pad = gplan::align(Plan({"a", "b"}), Plan({"1", "2", "3", "4"}));
  CHECK(pad.generated == std::vector<std::string>{"a", "b", "b", "b"});
  CHECK(pad.padded_count == 2);

  auto same = gplan::align(Plan({"x", "y", "z"}), ref);
  CHECK(same.generated == std::vector<std::string>{"x", "y", "z"});
  CHECK(same.truncated_count + same.padded_count == 0);
  CHECK(same.reference == ref.steps());
}

TEST_CASE("null plan aligns to blank steps") {
  auto pair = gplan::align(Plan::null_plan(), Plan({"a", "b", "c"}));
  CHECK(pair.generated == std::vector<std::string>{"", "", ""});
  CHECK(pair.padded_count == 3);
}

TEST_CASE("align is idempotent and length preserving") {
  oracle::StepGen gen(11);
  for (int i = 0; i < 300; ++i) {
    Plan g(gen.steps(gen.length(1, 10)));
    Plan r(gen.steps(gen.length(1, 10)));
    auto once = gplan::align(g, r);
    CHECK(once.generated.size() == r.size());
    auto twice = gplan::align(Plan(once.generated), r);
    CHECK(twice.generated == once.generated);
    CHECK(twice.reference == once.reference);
  }
}

TEST_CASE("dataset reading collects violations with line numbers") {
  std::istringstream in(
      R"({"task_id":"a","goal":"g","reference_steps":["s"],"split":"train"})"
      "\n\n"
      R"({"task_id":"a","goal":"g","reference_steps":["s"],"split":"train"})"
      "\n"
      R"({"task_id":"b","goal":"g","reference_steps":["s"],"split":"valid"})"
      "\n"
      R"({"task_id":"c","goal":"","reference_steps":["s"],"split":"train"})"
      "\n"
      R"({"task_id":"d","goal":"g","reference_steps":[],"split":"test_seen"})"
      "\n");
  auto ds = gplan::read_dataset(in);
  CHECK(ds.records.size() == 1);
  REQUIRE(ds.violations.size() == 4);
  CHECK(ds.violations[0].line == 3);
  CHECK(ds.violations[0].message.find("DuplicateTask") == 0);
  CHECK(ds.violations[1].line == 4);
  CHECK(ds.violations[2].line == 5);
  CHECK(ds.violations[3].message.find("EmptyPlan") == 0);
}

TEST_CASE("fixture dataset loads with environments") {
  auto ds = gplan::read_dataset_file(oracle::fixture("dataset.jsonl"));
  CHECK(ds.violations.empty());
  REQUIRE(ds.records.size() == 20);
  CHECK(ds.records[0].reference_plan.size() == 4);
  CHECK(ds.records[0].split == gplan::Split::TestUnseen);
  REQUIRE(ds.records[0].environment);
  CHECK(ds.records[0].environment->size() == 6);
  // record survives a JSON round trip
  CHECK(gplan::task_from_json(gplan::task_to_json(ds.records[2])) == ds.records[2]);
}
}
