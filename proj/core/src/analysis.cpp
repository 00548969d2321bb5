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

#include "gplan/analysis.hpp"

#include <algorithm>

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

LengthErrorHistogram length_error_histogram(
    const std::vector<std::pair<std::size_t, std::size_t>>& gen_ref_lengths) {
  if (gen_ref_lengths.empty()) throw Error(ErrorCode::EmptyInput, "no plan pairs");
  LengthErrorHistogram h;
  std::size_t exact = 0;
  for (auto [gen, ref] : gen_ref_lengths) {
    long diff = static_cast<long>(gen) - static_cast<long>(ref);
    ++h.counts[diff];
    if (diff == 0) ++exact;
  }
  h.total = gen_ref_lengths.size();
  h.exact_share = static_cast<double>(exact) / static_cast<double>(h.total);
  return h;
}

LengthErrorHistogram length_error_histogram(const std::vector<std::pair<Plan, Plan>>& pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> lengths;
  lengths.reserve(pairs.size());
  for (const auto& [gen, ref] : pairs) lengths.emplace_back(gen.size(), ref.size());
  return length_error_histogram(lengths);
}

LengthErrorHistogram length_error_histogram(const EvalReport& report) {
  std::vector<std::pair<std::size_t, std::size_t>> lengths;
  for (const auto& t : report.tasks) lengths.emplace_back(t.gen_length, t.ref_length);
  return length_error_histogram(lengths);
}

std::string LengthBucket::label() const {
  if (!lower && !upper) return "[all]";
  if (!lower) return "[<" + std::to_string(*upper) + "]";
  if (!upper) return "[>=" + std::to_string(*lower) + "]";
  return "[" + std::to_string(*lower) + "," + std::to_string(*upper) + ")";
}

LengthBucketReport bucket_by_length(const EvalReport& report,
                                    const std::vector<std::size_t>& boundaries) {
  if (boundaries.empty()) throw Error(ErrorCode::EmptyBucketBoundaries, "no bucket boundaries");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (boundaries[i] <= boundaries[i - 1])
      throw Error(ErrorCode::DomainError, "bucket boundaries must be strictly increasing");

  LengthBucketReport out;
  out.boundaries = boundaries;
  out.buckets.resize(boundaries.size() + 1);
  for (std::size_t i = 0; i < out.buckets.size(); ++i) {
    if (i > 0) out.buckets[i].lower = boundaries[i - 1];
    if (i < boundaries.size()) out.buckets[i].upper = boundaries[i];
  }

  std::vector<std::map<std::string, double>> sums(out.buckets.size());
  for (const auto& t : report.tasks) {
    auto idx = static_cast<std::size_t>(
        std::upper_bound(boundaries.begin(), boundaries.end(), t.ref_length) - boundaries.begin());
    ++out.buckets[idx].count;
    for (const auto& metric : report.config.metrics) {
      auto it = t.aggregate.find(metric);
      if (it != t.aggregate.end()) sums[idx][metric] += it->second;
    }
  }
  for (std::size_t i = 0; i < out.buckets.size(); ++i) {
    auto& b = out.buckets[i];
    for (const auto& metric : report.config.metrics) {
      if (b.count == 0)
        b.mean[metric] = std::nullopt;
      else
        b.mean[metric] = sums[i][metric] / static_cast<double>(b.count);
    }
  }
  out.total = report.tasks.size();
  return out;
}

namespace {

struct Accumulator {
  std::size_t tasks = 0;
  std::size_t goal_tokens = 0;
  std::size_t envs = 0;
  std::size_t objects = 0;
  std::size_t steps = 0;
  std::size_t step_tokens = 0;

  void add(const TaskRecord& r) {
    ++tasks;
    goal_tokens += tokenize(r.goal).size();
    if (r.environment) {
      ++envs;
      objects += r.environment->size();
    }
    steps += r.reference_plan.size();
    for (const auto& s : r.reference_plan.steps()) step_tokens += tokenize(s).size();
  }

  SplitStats finish() const {
    SplitStats s;
    s.task_count = tasks;
    s.avg_goal_tokens = static_cast<double>(goal_tokens) / static_cast<double>(tasks);
    if (envs) s.avg_objects = static_cast<double>(objects) / static_cast<double>(envs);
    s.tasks_without_env = tasks - envs;
    s.avg_steps = static_cast<double>(steps) / static_cast<double>(tasks);
    s.avg_step_tokens = steps ? static_cast<double>(step_tokens) / static_cast<double>(steps) : 0.0;
    return s;
  }
};

json split_json(const SplitStats& s) {
  return {{"tasks", s.task_count},
          {"avg_goal_tokens", s.avg_goal_tokens},
          {"avg_objects", s.avg_objects ? json(*s.avg_objects) : json(nullptr)},
          {"tasks_without_env", s.tasks_without_env},
          {"avg_steps", s.avg_steps},
          {"avg_step_tokens", s.avg_step_tokens}};
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

DatasetStats dataset_stats(const std::vector<TaskRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no records");
  // Integer accumulation keeps the result independent of record order.
  std::map<std::string, Accumulator> acc;
  Accumulator all;
  for (const auto& r : records) {
    acc[std::string(to_string(r.split))].add(r);
    all.add(r);
  }
  DatasetStats out;
  for (const auto& [name, a] : acc) out.per_split[name] = a.finish();
  out.overall = all.finish();
  return out;
}

json to_json(const LengthErrorHistogram& h) {
  json bins = json::object();
  for (const auto& [diff, n] : h.counts) bins[std::to_string(diff)] = n;
  return {{"bins", bins}, {"total", h.total}, {"exact_share", h.exact_share}};
}

json to_json(const LengthBucketReport& r) {
  json buckets = json::array();
  for (const auto& b : r.buckets) {
    json mean = json::object();
    for (const auto& [metric, m] : b.mean) mean[metric] = m ? json(*m) : json(nullptr);
    buckets.push_back({{"label", b.label()},
                       {"lower", b.lower ? json(*b.lower) : json(nullptr)},
                       {"upper", b.upper ? json(*b.upper) : json(nullptr)},
                       {"count", b.count},
                       {"mean", mean}});
  }
  return {{"boundaries", r.boundaries}, {"buckets", buckets}, {"total", r.total}};
}

json to_json(const DatasetStats& s) {
  json splits = json::object();
  for (const auto& [name, st] : s.per_split) splits[name] = split_json(st);
  return {{"splits", splits}, {"overall", split_json(s.overall)}};
}

std::string stats_to_csv(const DatasetStats& s) {
  std::string out = "split,tasks,avg_goal_tokens,avg_objects,tasks_without_env,avg_steps,avg_step_tokens\n";
  auto row = [&](const std::string& name, const SplitStats& st) {
    out += name + "," + std::to_string(st.task_count) + "," + format_double(st.avg_goal_tokens) +
           "," + opt(st.avg_objects) + "," + std::to_string(st.tasks_without_env) + "," +
           format_double(st.avg_steps) + "," + format_double(st.avg_step_tokens) + "\n";
  };
  for (const auto& [name, st] : s.per_split) row(name, st);
  row("all", s.overall);
  return out;
}

std::string histogram_to_csv(const LengthErrorHistogram& h) {
  std::string out = "length_error,count\n";
  for (const auto& [diff, n] : h.counts) out += std::to_string(diff) + "," + std::to_string(n) + "\n";
  return out;
}

std::string buckets_to_csv(const LengthBucketReport& r) {
  std::string out = "bucket,metric,count,mean\n";
  for (const auto& b : r.buckets)
    for (const auto& [metric, m] : b.mean)
      out += csv_field(b.label()) + "," + csv_field(metric) + "," + std::to_string(b.count) + "," +
             opt(m) + "\n";
  return out;
}

}  // namespace gplan
