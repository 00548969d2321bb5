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

#include <numeric>

#include "gplan/aggregation.hpp"
#include "gplan/error.hpp"
#include "oracles.hpp"

using gplan::ErrorCode;

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

gplan::EvalReport small_report() {
  gplan::EvalReport r;
  r.config.metrics = {"kas", "bleu"};
  r.config.p = 0.5;
  r.config.lexicon_digest = "00ff";
  r.config.tokenizer_id = "tok";
  r.config.run = {{"dataset", "d.jsonl"}};
  r.tasks.push_back({"a", {{"kas", {1.0, 0.5}}, {"bleu", {0.25, 0.0}}}, {{"kas", 0.75}, {"bleu", 0.125}}, 2, 2, true});
  r.tasks.push_back({"b,\"q\"", {{"kas", {0.0}}, {"bleu", {1.0 / 3.0}}}, {{"kas", 0.0}, {"bleu", 1.0 / 3.0}}, 0, 1, false});
  r.summarize();
  return r;
}

}  // namespace

TEST_SUITE("aggregation") {
TEST_CASE("geometric weights") {
  auto w = gplan::geometric_weights(3, 0.5);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(4.0 / 7.0));
  CHECK(w[1] == doctest::Approx(2.0 / 7.0));
  CHECK(w[2] == doctest::Approx(1.0 / 7.0));
  CHECK(gplan::geometric_weights(4, 0.0) == std::vector<double>(4, 0.25));
  CHECK(gplan::geometric_weights(4, 1.0) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  CHECK(gplan::geometric_weights(1, 0.3) == std::vector<double>{1.0});
  CHECK(code_of([] { gplan::geometric_weights(3, 1.5); }) == ErrorCode::DomainError);
  CHECK(code_of([] { gplan::geometric_weights(3, -0.1); }) == ErrorCode::DomainError);
  CHECK(code_of([] { gplan::geometric_weights(0, 0.5); }) == ErrorCode::DomainError);
}

TEST_CASE("weights are normalized, positive and non-increasing") {
  oracle::StepGen rng(9);
  for (int i = 0; i < 500; ++i) {
    auto t = rng.length(1, 30);
    double p = rng.uniform(0.0, 1.0);
    auto w = gplan::geometric_weights(t, p);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] <= w[k - 1]);
    for (double x : w) CHECK(x > 0.0);
  }
}

TEST_CASE("small p approaches uniform, large p approaches the first step") {
  auto near_uniform = gplan::geometric_weights(5, 1e-9);
  for (double x : near_uniform) CHECK(x == doctest::Approx(0.2).epsilon(1e-6));
  auto near_first = gplan::geometric_weights(5, 1.0 - 1e-9);
  CHECK(near_first[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("plan aggregation") {
  std::vector<double> s{1.0, 0.5, 0.0};
  CHECK(gplan::aggregate_plan(s, gplan::geometric_weights(3, 0.0)) == doctest::Approx(0.5));
  CHECK(gplan::aggregate_plan(s, gplan::geometric_weights(3, 0.5)) == doctest::Approx(5.0 / 7.0));
  CHECK(gplan::aggregate_plan(s, gplan::geometric_weights(3, 1.0)) == 1.0);
  std::vector<double> two{0.5, 0.5};
  CHECK(code_of([&] { gplan::aggregate_plan(s, two); }) == ErrorCode::LengthMismatch);
  std::vector<double> bad{0.5, 0.4, 0.3};
  CHECK(code_of([&] { gplan::aggregate_plan(s, bad); }) == ErrorCode::DomainError);
}

TEST_CASE("plan score lies between the min and max step score") {
  oracle::StepGen rng(10);
  for (int i = 0; i < 300; ++i) {
    auto t = rng.length(1, 12);
    std::vector<double> s;
    for (std::size_t k = 0; k < t; ++k) s.push_back(rng.uniform(0.0, 1.0));
    double v = gplan::aggregate_plan(s, gplan::geometric_weights(t, rng.uniform(0.0, 1.0)));
    CHECK(v >= *std::min_element(s.begin(), s.end()) - 1e-12);
    CHECK(v <= *std::max_element(s.begin(), s.end()) + 1e-12);
  }
}

TEST_CASE("corpus macro average") {
  std::vector<double> v{1.0, 0.0, 0.5};
  auto c = gplan::aggregate_corpus(v);
  CHECK(c.mean == doctest::Approx(0.5));
  CHECK(c.count == 3);
  CHECK(code_of([] { gplan::aggregate_corpus({}); }) == ErrorCode::EmptyCorpus);
}

TEST_CASE("report summary and JSON round trip") {
  auto r = small_report();
  CHECK(r.corpus.at("kas").mean == doctest::Approx(0.375));
  CHECK(r.corpus.at("bleu").count == 2);
  auto back = gplan::report_from_json(gplan::report_to_json(r));
  CHECK(back.tasks == r.tasks);
  CHECK(back.config == r.config);
  CHECK(gplan::report_to_json(back).dump() == gplan::report_to_json(r).dump());
  CHECK(code_of([] { gplan::report_from_json(nlohmann::json{{"tasks", 1}}); }) == ErrorCode::SchemaError);
}

TEST_CASE("report CSV") {
  auto csv = gplan::report_to_csv(small_report());
  CHECK(csv ==
        "task_id,metric,score,gen_length,ref_length,step_scores\n"
        "a,kas,0.75,2,2,1;0.5\n"
        "a,bleu,0.125,2,2,0.25;0\n"
        "\"b,\"\"q\"\"\",kas,0,0,1,0\n"
        "\"b,\"\"q\"\"\",bleu,0.3333333333333333,0,1,0.3333333333333333\n");
}

TEST_CASE("shortest round-trip number formatting") {
  oracle::StepGen rng(2);
  for (int i = 0; i < 200; ++i) {
    double v = rng.uniform(-10.0, 10.0);
    CHECK(std::stod(gplan::format_double(v)) == v);
  }
  CHECK(gplan::format_double(0.5) == "0.5");
  CHECK(gplan::format_double(10.0) == "10");
}
}
