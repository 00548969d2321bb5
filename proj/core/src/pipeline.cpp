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

#include "gplan/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "gplan/error.hpp"
#include "gplan/ngram_metrics.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

json prediction_to_json(const Prediction& p) {
  json j{{"task_id", p.task_id}, {"steps", p.plan.steps()}};
  if (p.call_count) j["call_count"] = *p.call_count;
  if (p.truncated) j["truncated"] = *p.truncated;
  return j;
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto where = "predictions line " + std::to_string(lineno);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
    Prediction p;
    try {
      p.task_id = doc.at("task_id").get<std::string>();
      auto steps = doc.at("steps").get<std::vector<std::string>>();
      if (!steps.empty()) p.plan = Plan(std::move(steps));
      if (auto it = doc.find("call_count"); it != doc.end()) p.call_count = it->get<std::size_t>();
      if (auto it = doc.find("truncated"); it != doc.end()) p.truncated = it->get<bool>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaError, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
    if (!ids.insert(p.task_id).second)
      throw Error(ErrorCode::DuplicateTask, where + ": task_id '" + p.task_id + "' repeated");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_predictions(in);
}

void EvaluateOptions::validate() const {
  if (metrics.empty()) throw Error(ErrorCode::InvalidConfig, "no metrics selected");
  std::set<std::string> seen;
  for (const auto& m : metrics) {
    if (std::find(kKnownMetrics.begin(), kKnownMetrics.end(), m) == kKnownMetrics.end())
      throw Error(ErrorCode::InvalidConfig, "unknown metric '" + m + "'");
    if (!seen.insert(m).second) throw Error(ErrorCode::InvalidConfig, "metric '" + m + "' repeated");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "p must lie in [0, 1]");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
}

namespace {

struct Job {
  const TaskRecord* record;
  const Plan* generated;  // null when there was no prediction
};

}  // namespace

EvalReport evaluate(const std::vector<TaskRecord>& dataset, const std::vector<Prediction>& predictions,
                    const EvaluateOptions& options) {
  options.validate();
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no records");

  std::unordered_map<std::string, const TaskRecord*> by_id;
  for (const auto& r : dataset)
    if (!by_id.emplace(r.task_id, &r).second)
      throw Error(ErrorCode::DuplicateTask, "dataset repeats task_id '" + r.task_id + "'");
  std::unordered_map<std::string, const Plan*> predicted;
  for (const auto& p : predictions) {
    if (!by_id.count(p.task_id))
      throw Error(ErrorCode::MissingTask, "prediction for unknown task '" + p.task_id + "'");
    if (!predicted.emplace(p.task_id, &p.plan).second)
      throw Error(ErrorCode::DuplicateTask, "task '" + p.task_id + "' predicted twice");
  }

  auto lexicon = options.lexicon ? options.lexicon
                                 : std::shared_ptr<const ActionLexicon>(std::shared_ptr<void>(),
                                                                        &default_lexicon());
  std::vector<std::unique_ptr<StepScorer>> scorers;
  for (const auto& m : options.metrics) {
    if (m == "kas") {
      scorers.push_back(std::make_unique<KasScorer>(lexicon));
    } else if (m == "bleu") {
      scorers.push_back(std::make_unique<BleuScorer>());
    } else {
      std::vector<std::string> corpus;
      for (const auto& r : dataset)
        corpus.insert(corpus.end(), r.reference_plan.steps().begin(), r.reference_plan.steps().end());
      scorers.push_back(std::make_unique<CiderScorer>(std::make_shared<IdfTable>(build_idf(corpus))));
    }
  }

  std::vector<Job> jobs;
  for (const auto& r : dataset) {
    auto it = predicted.find(r.task_id);
    jobs.push_back({&r, it == predicted.end() ? nullptr : it->second});
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const Job& a, const Job& b) { return a.record->task_id < b.record->task_id; });

  std::vector<TaskEntry> entries(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  auto run_one = [&](std::size_t i) {
    try {
      const auto& job = jobs[i];
      static const Plan kNull = Plan::null_plan();
      const Plan& gen = job.generated ? *job.generated : kNull;
      const Plan& ref = job.record->reference_plan;
      auto pair = align(gen, ref);
      auto weights = geometric_weights(pair.size(), options.p);
      TaskEntry e;
      e.task_id = job.record->task_id;
      e.gen_length = gen.size();
      e.ref_length = ref.size();
      e.predicted = job.generated != nullptr;
      for (const auto& scorer : scorers) {
        auto steps = score_plan(pair, *scorer);
        e.aggregate[scorer->name()] = aggregate_plan(steps, weights);
        e.step_scores[scorer->name()] = std::move(steps);
      }
      entries[i] = std::move(e);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  std::size_t workers = std::min(options.workers, std::max<std::size_t>(jobs.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
  } else {
    // Strided partition; each slot is written by exactly one thread.
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < jobs.size(); i += workers) run_one(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  EvalReport report;
  report.tasks = std::move(entries);
  report.config.metrics = options.metrics;
  report.config.p = options.p;
  report.config.lexicon_digest = lexicon->digest();
  report.config.tokenizer_id = std::string(kTokenizerId);
  report.config.run = options.run;
  report.summarize();
  return report;
}

ValidationReport validate_dataset(std::istream& in) {
  auto ds = read_dataset(in);
  return {ds.records.size(), std::move(ds.violations)};
}

}  // namespace gplan
