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
#include <httplib.h>

#include <atomic>
#include <thread>

#include "gplan/decode.hpp"
#include "gplan/env_table.hpp"
#include "gplan/error.hpp"
#include "oracles.hpp"

using gplan::ErrorCode;
using gplan::GeneratorResponse;

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

gplan::TaskRecord task(std::string goal = "Put keys on drawers") {
  return {"t", std::move(goal), gplan::Plan({"Go to the desk."}), std::nullopt, gplan::Split::Train};
}

// Local generator answering from a fixed plan, one step per call.
class FakeServer {
 public:
  explicit FakeServer(std::vector<std::string> plan) : plan_(std::move(plan)) {
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      auto doc = nlohmann::json::parse(req.body);
      bodies_.push_back(doc);
      auto r = gplan::request_from_json(doc);
      gplan::GeneratorResponse out;
      if (r.mode == gplan::DecodeMode::SinglePassFullPlan) {
        gplan::Plan p(plan_);
        out.text = gplan::serialize_plan(p);
      } else if (r.steps_so_far.size() < plan_.size()) {
        out.text = plan_[r.steps_so_far.size()];
      } else {
        out.is_end = true;
      }
      res.set_content(gplan::response_to_json(out).dump(), "application/json");
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
    });
    server_.Post("/fail", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint(const std::string& path = "/generate") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  const std::vector<nlohmann::json>& bodies() const { return bodies_; }

 private:
  std::vector<std::string> plan_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::vector<nlohmann::json> bodies_;
};

}  // namespace

TEST_SUITE("decode_harness") {
TEST_CASE("prompt construction") {
  CHECK(gplan::build_prompt("Put keys on drawers", {}, std::nullopt) == "Put keys on drawers");
  CHECK(gplan::build_prompt("Put keys on drawers", {"Go to the desk.", "Take the keys."}, std::nullopt) ==
        "Put keys on drawers STEP 1: Go to the desk. | STEP 2: Take the keys.");
  CHECK(gplan::build_prompt("g", {"a"}, std::string("Env: id=A")) == "g STEP 1: a Env: id=A");
  CHECK(gplan::build_prompt("g", {}, std::string("  ")) == "g");
}

TEST_CASE("each prompt extends the previous one on its goal and history") {
  oracle::StepGen rng(6);
  for (int i = 0; i < 100; ++i) {
    auto steps = rng.steps(rng.length(1, 8));
    std::optional<std::string> env;
    if (rng.coin()) env = "Env: id=Desk_1 type=Desk";
    for (std::size_t k = 1; k <= steps.size(); ++k) {
      std::vector<std::string> before(steps.begin(), steps.begin() + static_cast<long>(k) - 1);
      std::vector<std::string> after(steps.begin(), steps.begin() + static_cast<long>(k));
      auto a = gplan::build_prompt("goal", before, std::nullopt);
      auto b = gplan::build_prompt("goal", after, std::nullopt);
      CHECK(b.rfind(a, 0) == 0);
      auto with_env = gplan::build_prompt("goal", after, env);
      CHECK(with_env.rfind(b, 0) == 0);
    }
  }
}

TEST_CASE("wire format round trip") {
  gplan::GeneratorRequest req{"g", std::string("Env:"), {"a", "b"}, gplan::DecodeMode::IterativeNextStep, "g STEP 1: a"};
  auto j = gplan::request_to_json(req);
  CHECK(j["mode"] == "iterative");
  CHECK(j["env"] == "Env:");
  CHECK(gplan::request_from_json(j) == req);
  req.env_encoding.reset();
  CHECK(gplan::request_to_json(req)["env"].is_null());
  CHECK(gplan::response_from_json({{"text", "x"}, {"end", false}}) == GeneratorResponse{"x", false});
  CHECK(gplan::response_from_json({{"text", ""}, {"end", true}}).is_end);
  CHECK(code_of([] { gplan::response_from_json({{"text", ""}, {"end", false}}); }) == ErrorCode::ProtocolError);
  CHECK(code_of([] { gplan::response_from_json({{"end", true}}); }) == ErrorCode::ProtocolError);
  CHECK(code_of([] { gplan::request_from_json({{"goal", "g"}}); }) == ErrorCode::ProtocolError);
}

TEST_CASE("iterative decoding makes one call per step plus the end call") {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<std::string> steps;
    for (std::size_t i = 0; i < n; ++i) steps.push_back("Step text " + std::to_string(i));
    auto gen = gplan::ScriptedGenerator::ending_after(steps);
    auto trace = gplan::run_iterative(gen, task(), std::nullopt);
    CHECK(trace.call_count == n + 1);
    CHECK(trace.plan.steps() == steps);
    CHECK_FALSE(trace.truncated_by_cap);
    REQUIRE(gen.requests().size() == n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(gen.requests()[k].steps_so_far.size() == k);
      CHECK(gen.requests()[k].mode == gplan::DecodeMode::IterativeNextStep);
    }
  }
}

TEST_CASE("iterative decoding stops at the cap") {
  auto gen = gplan::ScriptedGenerator::never_ending();
  auto trace = gplan::run_iterative(gen, task(), std::nullopt);
  CHECK(trace.plan.size() == gplan::kDefaultMaxSteps);
  CHECK(trace.call_count == gplan::kDefaultMaxSteps);
  CHECK(trace.truncated_by_cap);
  auto small = gplan::ScriptedGenerator::never_ending();
  CHECK(gplan::run_iterative(small, task(), std::nullopt, 3).plan.size() == 3);
}

TEST_CASE("iterative decoding tolerates prefixes, separators and glued terminators") {
  gplan::ScriptedGenerator gen({{"STEP 1: Go to the desk.", false},
                                {"Take the keys. | STEP 3: extra", false},
                                {"Open the drawer. END", false}});
  auto trace = gplan::run_iterative(gen, task(), std::nullopt);
  CHECK(trace.plan.steps() == std::vector<std::string>{"Go to the desk.", "Take the keys.", "Open the drawer."});
  CHECK(trace.call_count == 3);
  CHECK_FALSE(trace.warnings.empty());
  gplan::ScriptedGenerator last({{"a", false}, {"b", true}});
  CHECK(gplan::run_iterative(last, task(), std::nullopt).plan.size() == 2);
}

TEST_CASE("a generator that ends immediately is an error") {
  gplan::ScriptedGenerator gen({{"", true}});
  CHECK(code_of([&] { gplan::run_iterative(gen, task(), std::nullopt); }) == ErrorCode::EmptyFirstStep);
  gplan::ScriptedGenerator end_text({{"END", false}});
  CHECK(code_of([&] { gplan::run_iterative(end_text, task(), std::nullopt); }) == ErrorCode::EmptyFirstStep);
}

TEST_CASE("single pass decoding") {
  gplan::ScriptedGenerator gen({{"STEP 1: Go to the desk. | STEP 2: Take the keys. | END", true}});
  auto trace = gplan::run_single_pass(gen, task(), std::string("Env: id=Desk_1"));
  CHECK(trace.call_count == 1);
  CHECK(trace.plan.size() == 2);
  CHECK_FALSE(trace.missing_terminator);
  CHECK(gen.requests()[0].mode == gplan::DecodeMode::SinglePassFullPlan);
  CHECK(gen.requests()[0].env_encoding == std::string("Env: id=Desk_1"));
  gplan::ScriptedGenerator open({{"STEP 1: Go to the desk.", true}});
  CHECK(gplan::run_single_pass(open, task(), std::nullopt).missing_terminator);
}

TEST_CASE("replaying a trace reproduces it") {
  auto gen = gplan::ScriptedGenerator::ending_after({"Go to the desk.", "Take the keys.", "Open the drawer."});
  auto env = gplan::flatten("g", gplan::load_table_file(oracle::fixture("bedroom_env.json"))).encoding.env_text();
  auto first = gplan::run_iterative(gen, task(), env);
  auto again = gplan::replay(first);
  auto second = gplan::run_iterative(again, task(), env);
  CHECK(first == second);
}

TEST_CASE("HTTP client speaks the wire format") {
  FakeServer server({"Go to the desk.", "Take the keys."});
  gplan::HttpGeneratorClient client({server.endpoint(), std::chrono::milliseconds(5000), 0});
  auto trace = gplan::run_iterative(client, task(), std::string("Env: id=Desk_1"));
  CHECK(trace.plan.steps() == std::vector<std::string>{"Go to the desk.", "Take the keys."});
  CHECK(trace.call_count == 3);
  REQUIRE(server.bodies().size() == 3);
  CHECK(server.bodies()[2]["steps"].size() == 2);
  CHECK(server.bodies()[0]["env"] == "Env: id=Desk_1");
  CHECK(server.bodies()[0]["mode"] == "iterative");

  auto single = gplan::run_single_pass(client, task(), std::nullopt);
  CHECK(single.plan.steps() == std::vector<std::string>{"Go to the desk.", "Take the keys."});
  CHECK(server.bodies().back()["mode"] == "single_pass");

  gplan::HttpGeneratorClient broken({server.endpoint("/broken"), std::chrono::milliseconds(5000), 0});
  CHECK(code_of([&] { broken.generate({"g", std::nullopt, {}, gplan::DecodeMode::IterativeNextStep, "g"}); }) ==
        ErrorCode::ProtocolError);
  gplan::HttpGeneratorClient failing({server.endpoint("/fail"), std::chrono::milliseconds(5000), 0});
  CHECK(code_of([&] { failing.generate({"g", std::nullopt, {}, gplan::DecodeMode::IterativeNextStep, "g"}); }) ==
        ErrorCode::ProtocolError);
}

TEST_CASE("unreachable generator") {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  gplan::HttpGeneratorClient client(
      {"http://127.0.0.1:" + std::to_string(port) + "/generate", std::chrono::milliseconds(500), 1});
  CHECK(code_of([&] { client.generate({"g", std::nullopt, {}, gplan::DecodeMode::IterativeNextStep, "g"}); }) ==
        ErrorCode::GeneratorUnreachable);
  CHECK(code_of([] { gplan::HttpGeneratorClient({"localhost:80", std::chrono::milliseconds(10), 0}); }) ==
        ErrorCode::InvalidConfig);
}
}
