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

#include "gplan/aggregation.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "gplan/error.hpp"

namespace gplan {

using nlohmann::json;

void ReweightConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::DomainError, "reweight p must lie in [0, 1]");
}

std::vector<double> geometric_weights(std::size_t steps, double p) {
  if (steps < 1) throw Error(ErrorCode::DomainError, "need at least one step");
  ReweightConfig{p}.validate();
  std::vector<double> w(steps, 0.0);
  if (p == 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(steps));
    return w;
  }
  if (p == 1.0) {
    w[0] = 1.0;
    return w;
  }
  double q = 1.0 - p;
  double raw = p;
  for (auto& x : w) {
    x = raw;
    raw *= q;
  }
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= sum;
  return w;
}

double aggregate_plan(std::span<const double> step_scores, std::span<const double> weights) {
  if (step_scores.size() != weights.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(step_scores.size()) + " scores vs " +
                                                std::to_string(weights.size()) + " weights");
  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || std::abs(wsum - 1.0) > 1e-9)
    throw Error(ErrorCode::DomainError, "weights must sum to 1");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) total += step_scores[i] * weights[i];
  return total;
}

CorpusScore aggregate_corpus(std::span<const double> per_task) {
  if (per_task.empty()) throw Error(ErrorCode::EmptyCorpus, "no task scores to aggregate");
  double sum = std::accumulate(per_task.begin(), per_task.end(), 0.0);
  return {sum / static_cast<double>(per_task.size()), per_task.size()};
}

void EvalReport::summarize() {
  corpus.clear();
  for (const auto& metric : config.metrics) {
    std::vector<double> scores;
    scores.reserve(tasks.size());
    for (const auto& t : tasks) {
      auto it = t.aggregate.find(metric);
      if (it == t.aggregate.end())
        throw Error(ErrorCode::InvalidConfig, "task " + t.task_id + " lacks metric " + metric);
      scores.push_back(it->second);
    }
    corpus[metric] = aggregate_corpus(scores);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json report_to_json(const EvalReport& report) {
  json tasks = json::array();
  for (const auto& t : report.tasks) {
    tasks.push_back({{"task_id", t.task_id},
                     {"step_scores", t.step_scores},
                     {"aggregate", t.aggregate},
                     {"gen_length", t.gen_length},
                     {"ref_length", t.ref_length},
                     {"predicted", t.predicted}});
  }
  json corpus = json::object();
  for (const auto& [metric, c] : report.corpus) corpus[metric] = {{"mean", c.mean}, {"count", c.count}};
  json config = {{"metrics", report.config.metrics},
                 {"p", report.config.p},
                 {"lexicon_digest", report.config.lexicon_digest},
                 {"tokenizer", report.config.tokenizer_id},
                 {"run", report.config.run}};
  return {{"config", config}, {"corpus", corpus}, {"tasks", tasks}};
}

EvalReport report_from_json(const json& doc) {
  EvalReport r;
  try {
    const auto& cfg = doc.at("config");
    r.config.metrics = cfg.at("metrics").get<std::vector<std::string>>();
    r.config.p = cfg.at("p").get<double>();
    r.config.lexicon_digest = cfg.value("lexicon_digest", "");
    r.config.tokenizer_id = cfg.value("tokenizer", "");
    r.config.run = cfg.value("run", json::object());
    for (const auto& t : doc.at("tasks")) {
      TaskEntry e;
      e.task_id = t.at("task_id").get<std::string>();
      e.step_scores = t.at("step_scores").get<std::map<std::string, std::vector<double>>>();
      e.aggregate = t.at("aggregate").get<std::map<std::string, double>>();
      e.gen_length = t.at("gen_length").get<std::size_t>();
      e.ref_length = t.at("ref_length").get<std::size_t>();
      e.predicted = t.value("predicted", true);
      r.tasks.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("malformed report: ") + e.what());
  }
  r.summarize();
  return r;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "task_id,metric,score,gen_length,ref_length,step_scores\n";
  for (const auto& t : report.tasks) {
    for (const auto& metric : report.config.metrics) {
      std::string steps;
      if (auto it = t.step_scores.find(metric); it != t.step_scores.end())
        for (std::size_t i = 0; i < it->second.size(); ++i)
          steps += (i ? ";" : "") + format_double(it->second[i]);
      auto agg = t.aggregate.find(metric);
      out += csv_field(t.task_id) + "," + csv_field(metric) + "," +
             (agg == t.aggregate.end() ? std::string() : format_double(agg->second)) + "," +
             std::to_string(t.gen_length) + "," + std::to_string(t.ref_length) + "," + steps + "\n";
    }
  }
  return out;
}

}  // namespace gplan
