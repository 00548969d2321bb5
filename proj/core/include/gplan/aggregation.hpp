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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gplan {

struct ReweightConfig {
  double p = 0.0;  // 0 = uniform, 1 = first step only
  void validate() const;
};

// Geometric step weights p(1-p)^(t-1), t = 1..steps, renormalized over the
// finite plan. p = 0 gives uniform weights and p = 1 puts all weight on the
// first step.
std::vector<double> geometric_weights(std::size_t steps, double p);

double aggregate_plan(std::span<const double> step_scores, std::span<const double> weights);

struct CorpusScore {
  double mean = 0.0;
  std::size_t count = 0;
};

CorpusScore aggregate_corpus(std::span<const double> per_task);

struct TaskEntry {
  std::string task_id;
  std::map<std::string, std::vector<double>> step_scores;  // metric -> per step
  std::map<std::string, double> aggregate;                 // metric -> plan score
  std::size_t gen_length = 0;  // before alignment
  std::size_t ref_length = 0;
  bool predicted = true;       // false when the task had no prediction

  friend bool operator==(const TaskEntry&, const TaskEntry&) = default;
};

struct ReportConfig {
  std::vector<std::string> metrics;
  double p = 0.0;
  std::string lexicon_digest;
  std::string tokenizer_id;
  nlohmann::json run;  // caller-provided echo of the run configuration

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct EvalReport {
  std::vector<TaskEntry> tasks;                // sorted by task_id
  std::map<std::string, CorpusScore> corpus;   // metric -> macro average
  ReportConfig config;

  // Recomputes `corpus` from `tasks`. Tasks must already carry every
  // configured metric.
  void summarize();
};

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);
// One row per task per metric.
std::string report_to_csv(const EvalReport& report);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace gplan
