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

#include "gplan/decode.hpp"

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

std::string_view to_string(DecodeMode mode) noexcept {
  return mode == DecodeMode::IterativeNextStep ? "iterative" : "single_pass";
}

std::optional<DecodeMode> parse_decode_mode(std::string_view name) noexcept {
  if (name == "iterative") return DecodeMode::IterativeNextStep;
  if (name == "single_pass") return DecodeMode::SinglePassFullPlan;
  return std::nullopt;
}

json request_to_json(const GeneratorRequest& req) {
  return {{"goal", req.goal},
          {"env", req.env_encoding ? json(*req.env_encoding) : json(nullptr)},
          {"steps", req.steps_so_far},
          {"mode", std::string(to_string(req.mode))},
          {"prompt", req.prompt}};
}

GeneratorRequest request_from_json(const json& doc) {
  try {
    GeneratorRequest req;
    req.goal = doc.at("goal").get<std::string>();
    if (const auto& env = doc.at("env"); !env.is_null()) req.env_encoding = env.get<std::string>();
    req.steps_so_far = doc.at("steps").get<std::vector<std::string>>();
    auto mode = parse_decode_mode(doc.at("mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::ProtocolError, "unknown mode");
    req.mode = *mode;
    req.prompt = doc.value("prompt", "");
    if (req.mode == DecodeMode::SinglePassFullPlan && !req.steps_so_far.empty())
      throw Error(ErrorCode::ProtocolError, "single_pass request carries step history");
    return req;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProtocolError, std::string("malformed request: ") + e.what());
  }
}

json response_to_json(const GeneratorResponse& resp) {
  return {{"text", resp.text}, {"end", resp.is_end}};
}

GeneratorResponse response_from_json(const json& doc) {
  GeneratorResponse resp;
  try {
    resp.text = doc.at("text").get<std::string>();
    resp.is_end = doc.value("end", false);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProtocolError, std::string("malformed response: ") + e.what());
  }
  if (!resp.is_end && trim(resp.text).empty())
    throw Error(ErrorCode::ProtocolError, "empty text without end flag");
  return resp;
}

ScriptedGenerator::ScriptedGenerator(std::vector<GeneratorResponse> script, OnExhausted on_exhausted)
    : script_(std::move(script)), on_exhausted_(on_exhausted) {}

ScriptedGenerator ScriptedGenerator::ending_after(const std::vector<std::string>& steps) {
  std::vector<GeneratorResponse> script;
  for (const auto& s : steps) script.push_back({s, false});
  script.push_back({"", true});
  return ScriptedGenerator(std::move(script));
}

ScriptedGenerator ScriptedGenerator::never_ending(std::string prefix) {
  ScriptedGenerator g({}, OnExhausted::RepeatLast);
  g.counting_ = true;
  g.prefix_ = std::move(prefix);
  return g;
}

GeneratorResponse ScriptedGenerator::generate(const GeneratorRequest& request) {
  requests_.push_back(request);
  std::size_t k = requests_.size() - 1;
  if (counting_) return {prefix_ + " " + std::to_string(k + 1), false};
  if (k < script_.size()) return script_[k];
  if (on_exhausted_ == OnExhausted::RepeatLast && !script_.empty()) return script_.back();
  throw Error(ErrorCode::ProtocolError, "scripted generator exhausted after " +
                                            std::to_string(script_.size()) + " responses");
}

std::string build_prompt(std::string_view goal, const std::vector<std::string>& steps,
                         const std::optional<std::string>& env) {
  std::string out(trim(goal));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!out.empty()) out += i ? " | " : " ";
    out += "STEP " + std::to_string(i + 1) + ": " + steps[i];
  }
  if (env && !trim(*env).empty()) {
    if (!out.empty()) out += ' ';
    out += trim(*env);
  }
  return out;
}

namespace {

GeneratorRequest make_request(const TaskRecord& task, const std::vector<std::string>& steps,
                              const std::optional<std::string>& env, DecodeMode mode) {
  GeneratorRequest req;
  req.goal = task.goal;
  req.env_encoding = env;
  req.steps_so_far = steps;
  req.mode = mode;
  req.prompt = build_prompt(task.goal, steps, env);
  return req;
}

struct NextStep {
  std::optional<std::string> step;
  bool ends = false;
};

NextStep interpret(const GeneratorResponse& resp) {
  std::string_view text = resp.text;
  if (auto bar = text.find(kStepSeparator); bar != std::string_view::npos) text = text.substr(0, bar);
  text = trim(text);
  if (text.empty()) {
    if (!resp.is_end) throw Error(ErrorCode::ProtocolError, "generator returned an empty step");
    return {std::nullopt, true};
  }
  if (text == kTerminator) return {std::nullopt, true};
  try {
    auto parsed = parse_plan(text, ParseMode::Lenient);
    return {parsed.plan[0], resp.is_end || !parsed.missing_terminator};
  } catch (const Error& e) {
    throw Error(ErrorCode::ProtocolError, std::string("unusable step text: ") + e.what());
  }
}

}  // namespace

DecodeTrace run_iterative(GeneratorClient& client, const TaskRecord& task,
                          const std::optional<std::string>& env_encoding, std::size_t max_steps) {
  if (max_steps < 1) throw Error(ErrorCode::DomainError, "max_steps must be >= 1");
  DecodeTrace trace;
  std::vector<std::string> steps;
  bool ended = false;
  while (!ended && steps.size() < max_steps) {
    auto req = make_request(task, steps, env_encoding, DecodeMode::IterativeNextStep);
    auto resp = client.generate(req);
    trace.log.push_back({std::move(req), resp});
    ++trace.call_count;
    auto next = interpret(resp);
    if (resp.text.find(kStepSeparator) != std::string::npos)
      trace.warnings.push_back("call " + std::to_string(trace.call_count) +
                               ": output cut at separator");
    if (next.step) steps.push_back(std::move(*next.step));
    ended = next.ends;
  }
  if (steps.empty())
    throw Error(ErrorCode::EmptyFirstStep, "generator ended before producing a step for task " +
                                               task.task_id);
  trace.truncated_by_cap = !ended;
  trace.plan = Plan(std::move(steps));
  return trace;
}

DecodeTrace run_single_pass(GeneratorClient& client, const TaskRecord& task,
                            const std::optional<std::string>& env_encoding) {
  DecodeTrace trace;
  auto req = make_request(task, {}, env_encoding, DecodeMode::SinglePassFullPlan);
  auto resp = client.generate(req);
  trace.log.push_back({std::move(req), resp});
  trace.call_count = 1;
  auto parsed = parse_plan(resp.text, ParseMode::Lenient);
  trace.plan = std::move(parsed.plan);
  trace.missing_terminator = parsed.missing_terminator;
  trace.warnings = std::move(parsed.warnings);
  return trace;
}

ScriptedGenerator replay(const DecodeTrace& trace) {
  std::vector<GeneratorResponse> script;
  for (const auto& ex : trace.log) script.push_back(ex.response);
  return ScriptedGenerator(std::move(script));
}

}  // namespace gplan
