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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplan/aggregation.hpp"
#include "gplan/plan.hpp"

namespace gplan {

struct LengthErrorHistogram {
  std::map<long, std::size_t> counts;  // (generated - reference) -> tasks
  std::size_t total = 0;
  double exact_share = 0.0;

  friend bool operator==(const LengthErrorHistogram&, const LengthErrorHistogram&) = default;
};

// Uses lengths before alignment; negative bins are underestimates.
LengthErrorHistogram length_error_histogram(const std::vector<std::pair<Plan, Plan>>& pairs);
LengthErrorHistogram length_error_histogram(
    const std::vector<std::pair<std::size_t, std::size_t>>& gen_ref_lengths);
LengthErrorHistogram length_error_histogram(const EvalReport& report);

struct LengthBucket {
  std::optional<std::size_t> lower;  // inclusive; none = unbounded
  std::optional<std::size_t> upper;  // exclusive; none = unbounded
  std::size_t count = 0;
  std::map<std::string, std::optional<double>> mean;  // null for empty buckets

  std::string label() const;
};

struct LengthBucketReport {
  std::vector<std::size_t> boundaries;
  std::vector<LengthBucket> buckets;
  std::size_t total = 0;
};

inline const std::vector<std::size_t> kDefaultLengthBoundaries{4, 7, 10};

// Boundaries b0 < b1 < ... give buckets (-inf,b0) [b0,b1) ... [bk,inf),
// assigned by reference plan length.
LengthBucketReport bucket_by_length(const EvalReport& report,
                                    const std::vector<std::size_t>& boundaries);

struct SplitStats {
  std::size_t task_count = 0;
  double avg_goal_tokens = 0.0;
  std::optional<double> avg_objects;  // over tasks that have an environment
  std::size_t tasks_without_env = 0;
  double avg_steps = 0.0;
  double avg_step_tokens = 0.0;  // pooled over every reference step
};

struct DatasetStats {
  std::map<std::string, SplitStats> per_split;  // keyed by split name
  SplitStats overall;
};

DatasetStats dataset_stats(const std::vector<TaskRecord>& records);

nlohmann::json to_json(const LengthErrorHistogram& h);
nlohmann::json to_json(const LengthBucketReport& r);
nlohmann::json to_json(const DatasetStats& s);
std::string stats_to_csv(const DatasetStats& s);
std::string histogram_to_csv(const LengthErrorHistogram& h);
std::string buckets_to_csv(const LengthBucketReport& r);

}  // namespace gplan
