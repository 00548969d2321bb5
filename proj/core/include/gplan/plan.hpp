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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gplan/env_table.hpp"

namespace gplan {

inline constexpr std::string_view kStepSeparator = "|";
inline constexpr std::string_view kTerminator = "END";

// An ordered list of step texts. Steps are stored trimmed, are never empty,
// and never contain the separator or a standalone END token.
//
// The one exception is the null plan: a zero-step value standing in for a
// generation that produced nothing. It aligns to blank steps and scores 0.
class Plan {
 public:
  explicit Plan(std::vector<std::string> steps);

  static Plan null_plan() { return Plan(); }

  bool is_null() const noexcept { return steps_.empty(); }
  std::size_t size() const noexcept { return steps_.size(); }
  const std::vector<std::string>& steps() const noexcept { return steps_; }
  const std::string& operator[](std::size_t i) const { return steps_[i]; }

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  Plan() = default;
  std::vector<std::string> steps_;
};

// Throws InvalidStep when `text` cannot be a plan step.
void validate_step(std::string_view text);

enum class ParseMode { Strict, Lenient };

struct ParsedPlan {
  Plan plan;
  bool missing_terminator = false;
  std::vector<std::string> warnings;
};

// Parses "STEP 1: <s1> | STEP 2: <s2> | END". The STEP keyword is matched
// case-insensitively and its number is optional; numbering that disagrees
// with textual order produces a warning, textual order wins.
ParsedPlan parse_plan(std::string_view text, ParseMode mode = ParseMode::Lenient);

std::string serialize_plan(const Plan& plan);

struct AlignedPair {
  std::vector<std::string> generated;
  std::vector<std::string> reference;
  std::size_t truncated_count = 0;
  std::size_t padded_count = 0;

  std::size_t size() const noexcept { return reference.size(); }
  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

// Cuts surplus generated steps, or repeats the last generated step, so the
// generated side has exactly the reference's length. A null generated plan
// becomes reference.size() blank steps.
AlignedPair align(const Plan& generated, const Plan& reference);

enum class Split { Train, ValidSeen, ValidUnseen, TestSeen, TestUnseen };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view name) noexcept;

struct TaskRecord {
  std::string task_id;
  std::string goal;
  Plan reference_plan;
  std::optional<ObjectTable> environment;
  Split split = Split::Train;

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

TaskRecord task_from_json(const nlohmann::json& doc);
nlohmann::json task_to_json(const TaskRecord& task);

struct DatasetViolation {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct Dataset {
  std::vector<TaskRecord> records;
  std::vector<DatasetViolation> violations;
};

// Reads JSON-lines. Bad lines are collected as violations rather than
// thrown, so callers can report every problem in one pass. Blank lines
// are skipped.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

}  // namespace gplan
