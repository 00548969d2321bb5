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

#include "gplan/plan.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

bool is_terminator(std::string_view s) { return iequals(trim(s), kTerminator); }

// Recognizes "STEP", "Step 3", "step 3:" etc. at the start of a segment.
// Returns the number of bytes consumed and the step number, if any.
struct StepPrefix {
  std::size_t length = 0;
  std::optional<long> number;
};

std::optional<StepPrefix> match_step_prefix(std::string_view s) {
  if (s.size() < 4 || !iequals(s.substr(0, 4), "step")) return std::nullopt;
  std::size_t i = 4;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  StepPrefix p;
  std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > digits) p.number = std::stol(std::string(s.substr(digits, i - digits)));
  skip_ws();
  if (i >= s.size() || s[i] != ':') return std::nullopt;
  p.length = i + 1;
  return p;
}

}  // namespace

void validate_step(std::string_view text) {
  if (trim(text).empty()) throw Error(ErrorCode::InvalidStep, "step text is empty");
  if (text.find(kStepSeparator) != std::string_view::npos)
    throw Error(ErrorCode::InvalidStep, "step contains the separator: " + std::string(text));
  for (auto tok : split_whitespace(text))
    if (tok == kTerminator)
      throw Error(ErrorCode::InvalidStep, "step contains the END token: " + std::string(text));
}

Plan::Plan(std::vector<std::string> steps) {
  if (steps.empty()) throw Error(ErrorCode::EmptyPlan, "a plan needs at least one step");
  steps_.reserve(steps.size());
  for (auto& s : steps) {
    validate_step(s);
    steps_.emplace_back(trim(s));
  }
}

ParsedPlan parse_plan(std::string_view text, ParseMode mode) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorCode::EmptyPlan, "plan text is empty");

  std::vector<std::string_view> segments;
  std::size_t start = 0;
  while (true) {
    auto bar = text.find(kStepSeparator, start);
    segments.push_back(trim(text.substr(start, bar == std::string_view::npos ? bar : bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + kStepSeparator.size();
  }

  std::vector<std::string> steps;
  std::vector<std::string> warnings;
  bool terminated = false;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    auto seg = segments[k];
    if (is_terminator(seg)) {
      terminated = true;
      if (k + 1 < segments.size()) {
        if (mode == ParseMode::Strict)
          throw Error(ErrorCode::MalformedStep, "content after END terminator");
        warnings.push_back("ignored content after END terminator");
      }
      break;
    }
    if (seg.empty()) throw Error(ErrorCode::MalformedStep, "empty segment " + std::to_string(k + 1));

    std::string_view body = seg;
    if (auto prefix = match_step_prefix(seg)) {
      body = trim(seg.substr(prefix->length));
      if (prefix->number && *prefix->number != static_cast<long>(steps.size() + 1))
        warnings.push_back("step labelled " + std::to_string(*prefix->number) + " found at position " +
                           std::to_string(steps.size() + 1));
    } else {
      warnings.push_back("segment " + std::to_string(k + 1) + " has no STEP prefix");
    }
    if (body.empty())
      throw Error(ErrorCode::MalformedStep, "segment " + std::to_string(k + 1) + " has no content");

    // Some generators glue the terminator onto the last step ("... drawers.  END").
    auto words = split_whitespace(body);
    if (words.size() > 1 && words.back() == kTerminator && k + 1 == segments.size()) {
      body = trim(body.substr(0, static_cast<std::size_t>(words.back().data() - body.data())));
      terminated = true;
      warnings.push_back("END terminator not separated by '|'");
    }
    try {
      validate_step(body);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedStep, e.what());
    }
    steps.emplace_back(body);
  }

  if (steps.empty()) throw Error(ErrorCode::EmptyPlan, "no steps before END");
  if (!terminated && mode == ParseMode::Strict)
    throw Error(ErrorCode::MissingTerminator, "plan does not end with END");
  return {Plan(std::move(steps)), !terminated, std::move(warnings)};
}

std::string serialize_plan(const Plan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    out += "STEP " + std::to_string(i + 1) + ": " + plan[i] + " | ";
  }
  out += kTerminator;
  return out;
}

AlignedPair align(const Plan& generated, const Plan& reference) {
  AlignedPair pair;
  pair.reference = reference.steps();
  const std::size_t target = reference.size();
  if (generated.is_null()) {
    pair.generated.assign(target, std::string());
    pair.padded_count = target;
    return pair;
  }
  const auto& gen = generated.steps();
  if (gen.size() >= target) {
    pair.generated.assign(gen.begin(), gen.begin() + static_cast<std::ptrdiff_t>(target));
    pair.truncated_count = gen.size() - target;
  } else {
    pair.generated = gen;
    pair.padded_count = target - gen.size();
    pair.generated.resize(target, gen.back());
  }
  return pair;
}

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::ValidSeen: return "valid_seen";
    case Split::ValidUnseen: return "valid_unseen";
    case Split::TestSeen: return "test_seen";
    case Split::TestUnseen: return "test_unseen";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view name) noexcept {
  for (auto s : {Split::Train, Split::ValidSeen, Split::ValidUnseen, Split::TestSeen,
                 Split::TestUnseen})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

TaskRecord task_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "record must be a JSON object");
  auto str = [&](const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string())
      throw Error(ErrorCode::SchemaError, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  };
  TaskRecord rec{str("task_id"), str("goal"), Plan::null_plan(), std::nullopt, Split::Train};
  if (rec.task_id.empty()) throw Error(ErrorCode::SchemaError, "task_id is empty");
  if (trim(rec.goal).empty()) throw Error(ErrorCode::SchemaError, "goal is empty");

  auto steps_it = doc.find("reference_steps");
  if (steps_it == doc.end() || !steps_it->is_array())
    throw Error(ErrorCode::SchemaError, "missing array field 'reference_steps'");
  std::vector<std::string> steps;
  for (const auto& s : *steps_it) {
    if (!s.is_string()) throw Error(ErrorCode::SchemaError, "reference_steps must hold strings");
    steps.push_back(s.get<std::string>());
  }
  rec.reference_plan = Plan(std::move(steps));

  auto split_name = str("split");
  auto split = parse_split(split_name);
  if (!split) throw Error(ErrorCode::SchemaError, "unknown split '" + split_name + "'");
  rec.split = *split;

  if (auto env = doc.find("environment"); env != doc.end() && !env->is_null())
    rec.environment = load_table(*env);
  return rec;
}

json task_to_json(const TaskRecord& task) {
  json j;
  j["task_id"] = task.task_id;
  j["goal"] = task.goal;
  j["reference_steps"] = task.reference_plan.steps();
  j["environment"] = task.environment ? table_to_json(*task.environment) : json(nullptr);
  j["split"] = std::string(to_string(task.split));
  return j;
}

Dataset read_dataset(std::istream& in) {
  Dataset ds;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto rec = task_from_json(json::parse(line));
      if (!ids.insert(rec.task_id).second)
        throw Error(ErrorCode::DuplicateTask, "task_id '" + rec.task_id + "' repeated");
      ds.records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      ds.violations.push_back({lineno, std::string("ParseError: ") + e.what()});
    } catch (const Error& e) {
      ds.violations.push_back({lineno, e.what()});
    }
  }
  return ds;
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_dataset(in);
}

}  // namespace gplan
