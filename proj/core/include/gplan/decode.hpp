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

#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplan/plan.hpp"

namespace gplan {

enum class DecodeMode { IterativeNextStep, SinglePassFullPlan };

std::string_view to_string(DecodeMode mode) noexcept;  // "iterative" / "single_pass"
std::optional<DecodeMode> parse_decode_mode(std::string_view name) noexcept;

// Wire request. `prompt` is the rendered input; the structured fields are
// sent alongside so a generator can build its own input if it prefers.
struct GeneratorRequest {
  std::string goal;
  std::optional<std::string> env_encoding;
  std::vector<std::string> steps_so_far;
  DecodeMode mode = DecodeMode::IterativeNextStep;
  std::string prompt;

  friend bool operator==(const GeneratorRequest&, const GeneratorRequest&) = default;
};

struct GeneratorResponse {
  std::string text;
  bool is_end = false;

  friend bool operator==(const GeneratorResponse&, const GeneratorResponse&) = default;
};

nlohmann::json request_to_json(const GeneratorRequest& req);
GeneratorRequest request_from_json(const nlohmann::json& doc);  // throws ProtocolError
nlohmann::json response_to_json(const GeneratorResponse& resp);
GeneratorResponse response_from_json(const nlohmann::json& doc);  // throws ProtocolError

// A text generator behind the request/response contract.
class GeneratorClient {
 public:
  virtual ~GeneratorClient() = default;
  virtual GeneratorResponse generate(const GeneratorRequest& request) = 0;
};

struct HttpClientOptions {
  std::string endpoint;  // e.g. "http://localhost:8080/generate"
  std::chrono::milliseconds timeout{30000};
  int retries = 2;       // extra attempts after a connection failure
};

// POSTs JSON to the endpoint. Connection failures (after retries) raise
// GeneratorUnreachable; bad status codes or bodies raise ProtocolError.
class HttpGeneratorClient final : public GeneratorClient {
 public:
  explicit HttpGeneratorClient(HttpClientOptions options);
  ~HttpGeneratorClient() override;
  HttpGeneratorClient(const HttpGeneratorClient&) = delete;
  HttpGeneratorClient& operator=(const HttpGeneratorClient&) = delete;

  GeneratorResponse generate(const GeneratorRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Plays back a fixed list of responses and records what it was asked.
// Once the script runs out it either repeats the last response or throws
// ProtocolError.
class ScriptedGenerator final : public GeneratorClient {
 public:
  enum class OnExhausted { RepeatLast, Fail };

  explicit ScriptedGenerator(std::vector<GeneratorResponse> script,
                             OnExhausted on_exhausted = OnExhausted::Fail);

  // Script of plain step texts followed by one END response.
  static ScriptedGenerator ending_after(const std::vector<std::string>& steps);
  // Never emits END; every response is "<prefix> <k>".
  static ScriptedGenerator never_ending(std::string prefix = "step");

  GeneratorResponse generate(const GeneratorRequest& request) override;
  const std::vector<GeneratorRequest>& requests() const noexcept { return requests_; }

 private:
  std::vector<GeneratorResponse> script_;
  OnExhausted on_exhausted_;
  bool counting_ = false;
  std::string prefix_;
  std::vector<GeneratorRequest> requests_;
};

// Goal, then the history as "STEP i: <text>" joined by " | ", then the
// environment text. Empty parts are omitted.
std::string build_prompt(std::string_view goal, const std::vector<std::string>& steps,
                         const std::optional<std::string>& env);

struct Exchange {
  GeneratorRequest request;
  GeneratorResponse response;

  friend bool operator==(const Exchange&, const Exchange&) = default;
};

struct DecodeTrace {
  Plan plan = Plan::null_plan();
  std::size_t call_count = 0;
  bool truncated_by_cap = false;
  bool missing_terminator = false;
  std::vector<std::string> warnings;
  std::vector<Exchange> log;

  friend bool operator==(const DecodeTrace&, const DecodeTrace&) = default;
};

inline constexpr std::size_t kDefaultMaxSteps = 15;

// One call per step plus the END call: N steps cost N+1 calls. Responses
// are cut at the first separator and a leading "STEP k:" is dropped. The
// history fed back is always the generator's own output.
DecodeTrace run_iterative(GeneratorClient& client, const TaskRecord& task,
                          const std::optional<std::string>& env_encoding,
                          std::size_t max_steps = kDefaultMaxSteps);

// One call; the response is parsed as a full plan in lenient mode.
DecodeTrace run_single_pass(GeneratorClient& client, const TaskRecord& task,
                            const std::optional<std::string>& env_encoding);

// A scripted generator that answers with the responses recorded in `trace`.
ScriptedGenerator replay(const DecodeTrace& trace);

}  // namespace gplan
