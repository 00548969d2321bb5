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
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplan/aggregation.hpp"
#include "gplan/kas.hpp"
#include "gplan/plan.hpp"

namespace gplan {

// One line of a predictions file: {task_id, steps, call_count?, truncated?}.
struct Prediction {
  std::string task_id;
  Plan plan = Plan::null_plan();  // null when `steps` was empty
  std::optional<std::size_t> call_count;
  std::optional<bool> truncated;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

nlohmann::json prediction_to_json(const Prediction& p);
// Throws ParseError / DuplicateTask / SchemaError with the 1-based line.
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions_file(const std::string& path);

inline const std::vector<std::string> kKnownMetrics{"kas", "bleu", "cider"};

struct EvaluateOptions {
  std::vector<std::string> metrics{"kas", "bleu", "cider"};
  double p = 0.0;
  std::shared_ptr<const ActionLexicon> lexicon;  // default lexicon when null
  std::size_t workers = 1;
  nlohmann::json run = nlohmann::json::object();

  void validate() const;  // throws InvalidConfig / DomainError
};

// Aligns every prediction with its reference, scores each configured
// metric step-wise, reweights and averages. Dataset tasks without a
// prediction are scored as null plans. The IDF table for CIDEr is built
// once over every reference step in `dataset`. Output does not depend on
// `workers`.
EvalReport evaluate(const std::vector<TaskRecord>& dataset, const std::vector<Prediction>& predictions,
                    const EvaluateOptions& options);

struct ValidationReport {
  std::size_t records = 0;
  std::vector<DatasetViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_dataset(std::istream& in);

}  // namespace gplan
