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

// gplan: evaluate, analyze and generate grounded step-by-step plans.
//
// Exit codes: 0 success, 1 usage/config error, 2 data validation failure,
// 3 generator/protocol failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gplan/aggregation.hpp"
#include "gplan/analysis.hpp"
#include "gplan/decode.hpp"
#include "gplan/env_table.hpp"
#include "gplan/error.hpp"
#include "gplan/kas.hpp"
#include "gplan/pipeline.hpp"
#include "gplan/plan.hpp"
#include "gplan/tokenize.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGenerator = 3;

int exit_code_for(gplan::ErrorCode code) {
  using gplan::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::IoError:
    case ErrorCode::DomainError:
    case ErrorCode::EmptyBucketBoundaries:
    case ErrorCode::BudgetTooSmall:
      return kExitUsage;
    case ErrorCode::GeneratorUnreachable:
    case ErrorCode::ProtocolError:
    case ErrorCode::EmptyFirstStep:
      return kExitGenerator;
    default:
      return kExitData;
  }
}

// Writes to `path`, or stdout when empty or "-".
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gplan::Error(gplan::ErrorCode::IoError, "cannot write " + path);
  out << content;
}

std::vector<gplan::TaskRecord> load_dataset_or_throw(const std::string& path) {
  auto ds = gplan::read_dataset_file(path);
  if (!ds.violations.empty()) {
    for (const auto& v : ds.violations)
      std::cerr << path << ":" << v.line << ": " << v.message << "\n";
    throw gplan::Error(gplan::ErrorCode::SchemaError,
                       std::to_string(ds.violations.size()) + " invalid record(s) in " + path);
  }
  return std::move(ds.records);
}

std::shared_ptr<const gplan::ActionLexicon> load_lexicon_option(const std::string& path) {
  if (path.empty())
    return std::shared_ptr<const gplan::ActionLexicon>(std::shared_ptr<void>(),
                                                       &gplan::default_lexicon());
  return std::make_shared<gplan::ActionLexicon>(gplan::load_lexicon_file(path));
}

gplan::FlattenConfig flatten_config(const std::vector<std::string>& columns, int precision,
                                    const std::string& separator) {
  gplan::FlattenConfig cfg;
  if (!columns.empty()) {
    cfg.included_columns.clear();
    for (const auto& c : columns) {
      auto col = gplan::parse_column(c);
      if (!col) throw gplan::Error(gplan::ErrorCode::InvalidConfig, "unknown column '" + c + "'");
      cfg.included_columns.push_back(*col);
    }
  }
  cfg.precision = precision;
  cfg.separator = separator;
  cfg.validate();
  return cfg;
}

struct EvaluateArgs {
  std::string dataset, predictions, lexicon, out, format = "json";
  std::vector<std::string> metrics{"kas", "bleu", "cider"};
  double p = 0.0;
  std::size_t workers = 1;
};

int cmd_evaluate(const EvaluateArgs& a) {
  auto dataset = load_dataset_or_throw(a.dataset);
  auto predictions = gplan::read_predictions_file(a.predictions);
  gplan::EvaluateOptions opts;
  opts.metrics = a.metrics;
  opts.p = a.p;
  opts.lexicon = load_lexicon_option(a.lexicon);
  opts.workers = a.workers;
  // Worker count and output path are left out so they cannot change the bytes.
  opts.run = {{"subcommand", "evaluate"},
              {"dataset", a.dataset},
              {"predictions", a.predictions},
              {"metrics", a.metrics},
              {"p", a.p},
              {"lexicon", a.lexicon.empty() ? std::string("default") : a.lexicon},
              {"format", a.format}};
  auto report = gplan::evaluate(dataset, predictions, opts);
  write_output(a.out, a.format == "csv" ? gplan::report_to_csv(report)
                                        : gplan::report_to_json(report).dump(2) + "\n");
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gplan::Error(gplan::ErrorCode::IoError, "cannot open " + path);
  auto report = gplan::validate_dataset(in);
  for (const auto& v : report.violations) std::cout << "line " << v.line << ": " << v.message << "\n";
  std::cout << report.records << " valid record(s), " << report.violations.size() << " violations\n";
  return report.ok() ? kExitOk : kExitData;
}

struct EncodeArgs {
  std::string input, goal;
  std::size_t max_tokens = 0;  // 0 = unlimited
  std::vector<std::string> columns;
  int precision = 2;
  std::string separator = "[SEP]";
};

int cmd_encode_env(const EncodeArgs& a) {
  auto table = gplan::load_table_file(a.input);
  auto result = gplan::flatten(a.goal, table, flatten_config(a.columns, a.precision, a.separator));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  auto encoding = result.encoding;
  if (a.max_tokens > 0) {
    auto t = gplan::truncate_encoding(encoding, a.max_tokens);
    if (t.rows_dropped) std::cerr << "dropped " << t.rows_dropped << " trailing row(s)\n";
    encoding = t.encoding;
  }
  std::cout << encoding.text() << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& dataset, const std::string& out, const std::string& format) {
  auto stats = gplan::dataset_stats(load_dataset_or_throw(dataset));
  write_output(out, format == "csv" ? gplan::stats_to_csv(stats) : gplan::to_json(stats).dump(2) + "\n");
  return kExitOk;
}

struct AnalyzeArgs {
  std::string report, out, format = "json", plot_data;
  std::vector<std::size_t> boundaries = gplan::kDefaultLengthBoundaries;
};

int cmd_analyze(const AnalyzeArgs& a) {
  std::ifstream in(a.report);
  if (!in) throw gplan::Error(gplan::ErrorCode::IoError, "cannot open " + a.report);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw gplan::Error(gplan::ErrorCode::ParseError, a.report + ": " + e.what());
  }
  auto report = gplan::report_from_json(doc);
  auto hist = gplan::length_error_histogram(report);
  auto buckets = gplan::bucket_by_length(report, a.boundaries);
  if (a.format == "csv") {
    write_output(a.out, gplan::histogram_to_csv(hist) + "\n" + gplan::buckets_to_csv(buckets));
  } else {
    json out{{"length_error", gplan::to_json(hist)},
             {"length_buckets", gplan::to_json(buckets)},
             {"source", a.report}};
    write_output(a.out, out.dump(2) + "\n");
  }
  if (!a.plot_data.empty()) {
    // Long format for external plotting: one (series, x, y) point per line.
    std::string csv = "series,x,y\n";
    for (const auto& [diff, n] : hist.counts)
      csv += "length_error," + std::to_string(diff) + "," + std::to_string(n) + "\n";
    for (const auto& b : buckets.buckets)
      for (const auto& [metric, m] : b.mean)
        if (m) csv += gplan::csv_field("bucket_" + metric) + "," + gplan::csv_field(b.label()) + "," +
                      gplan::format_double(*m) + "\n";
    write_output(a.plot_data, csv);
  }
  return kExitOk;
}

struct PlanArgs {
  std::string endpoint, dataset, out, mode = "iterative";
  bool with_env = true;
  std::size_t max_steps = gplan::kDefaultMaxSteps;
  std::size_t max_tokens = 0;
  long timeout_ms = 30000;
  int retries = 2;
};

int cmd_plan(PlanArgs a) {
  if (a.endpoint.empty())
    if (const char* env = std::getenv("GPLAN_ENDPOINT")) a.endpoint = env;
  if (a.endpoint.empty())
    throw gplan::Error(gplan::ErrorCode::InvalidConfig, "no --endpoint and GPLAN_ENDPOINT unset");
  auto mode = gplan::parse_decode_mode(a.mode);
  if (!mode) throw gplan::Error(gplan::ErrorCode::InvalidConfig, "unknown mode '" + a.mode + "'");

  auto dataset = load_dataset_or_throw(a.dataset);
  gplan::HttpGeneratorClient client(
      {a.endpoint, std::chrono::milliseconds(a.timeout_ms), a.retries});

  std::string lines;
  int status = kExitOk;
  for (const auto& task : dataset) {
    std::optional<std::string> env;
    if (a.with_env && task.environment) {
      auto enc = gplan::flatten(task.goal, *task.environment).encoding;
      if (a.max_tokens > 0) enc = gplan::truncate_encoding(enc, a.max_tokens).encoding;
      env = enc.env_text();
    }
    gplan::Prediction pred;
    pred.task_id = task.task_id;
    try {
      auto trace = *mode == gplan::DecodeMode::IterativeNextStep
                       ? gplan::run_iterative(client, task, env, a.max_steps)
                       : gplan::run_single_pass(client, task, env);
      pred.plan = trace.plan;
      pred.call_count = trace.call_count;
      pred.truncated = trace.truncated_by_cap;
    } catch (const gplan::Error& e) {
      if (e.code() == gplan::ErrorCode::GeneratorUnreachable) throw;
      std::cerr << task.task_id << ": " << e.what() << "\n";
      pred.call_count = 0;
      pred.truncated = false;
      status = kExitGenerator;
    }
    lines += gplan::prediction_to_json(pred).dump() + "\n";
  }
  write_output(a.out, lines);
  return status;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!gplan::trim(item).empty()) out.emplace_back(gplan::trim(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gplan: grounded plan evaluation and generation toolkit"};
  app.set_config("--config", "", "TOML/INI file mirroring command-line flags");
  app.require_subcommand(1);

  EvaluateArgs ev;
  std::string ev_metrics = "kas,bleu,cider";
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against references step by step");
  evaluate->add_option("--dataset", ev.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", ev.predictions, "Predictions JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--metrics", ev_metrics, "Comma-separated subset of kas,bleu,cider")
      ->capture_default_str();
  evaluate->add_option("-p,--p", ev.p, "Geometric reweighting p (0 = uniform)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  evaluate->add_option("--lexicon", ev.lexicon, "KAS lexicon JSON (default: built-in)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev.out, "Output file (default stdout)");
  evaluate->add_option("--format", ev.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  evaluate->add_option("--workers", ev.workers)->check(CLI::PositiveNumber)->capture_default_str();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a dataset against every record invariant");
  validate->add_option("--dataset", validate_path)->required()->check(CLI::ExistingFile);

  EncodeArgs enc;
  std::string enc_columns;
  auto* encode = app.add_subcommand("encode-env", "Flatten an environment table for generator input");
  encode->add_option("--input", enc.input, "Environment JSON document")->required()->check(CLI::ExistingFile);
  encode->add_option("--goal", enc.goal)->required();
  encode->add_option("--max-tokens", enc.max_tokens, "Whitespace-token budget (0 = none)");
  encode->add_option("--columns", enc_columns, "Comma list of id,type,position,rotation,receptacle");
  encode->add_option("--precision", enc.precision)->check(CLI::NonNegativeNumber)->capture_default_str();
  encode->add_option("--separator", enc.separator)->capture_default_str();

  std::string st_dataset, st_out, st_format = "json";
  auto* stats = app.add_subcommand("stats", "Per-split dataset statistics");
  stats->add_option("--dataset", st_dataset)->required()->check(CLI::ExistingFile);
  stats->add_option("--out", st_out);
  stats->add_option("--format", st_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Length-error histogram and length buckets of a report");
  analyze->add_option("--report", an.report, "Report JSON from evaluate")->required()->check(CLI::ExistingFile);
  analyze->add_option("--boundaries", an.boundaries, "Bucket boundaries on reference length")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--out", an.out);
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  analyze->add_option("--plot-data", an.plot_data, "Also write long-format CSV for plotting");

  PlanArgs pl;
  auto* plan = app.add_subcommand("plan", "Generate plans through an external generator service");
  plan->add_option("--endpoint", pl.endpoint, "Generator URL (fallback: $GPLAN_ENDPOINT)");
  plan->add_option("--dataset", pl.dataset)->required()->check(CLI::ExistingFile);
  plan->add_option("--mode", pl.mode)->check(CLI::IsMember({"iterative", "single_pass"}))->capture_default_str();
  plan->add_flag("--with-env,!--no-env", pl.with_env, "Append the flattened environment")
      ->capture_default_str();
  plan->add_option("--max-steps", pl.max_steps)->check(CLI::PositiveNumber)->capture_default_str();
  plan->add_option("--max-tokens", pl.max_tokens, "Environment token budget (0 = none)");
  plan->add_option("--timeout-ms", pl.timeout_ms)->check(CLI::PositiveNumber)->capture_default_str();
  plan->add_option("--retries", pl.retries)->check(CLI::NonNegativeNumber)->capture_default_str();
  plan->add_option("--out", pl.out, "Predictions JSONL (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*evaluate) {
      ev.metrics = split_list(ev_metrics);
      return cmd_evaluate(ev);
    }
    if (*validate) return cmd_validate(validate_path);
    if (*encode) {
      enc.columns = split_list(enc_columns);
      return cmd_encode_env(enc);
    }
    if (*stats) return cmd_stats(st_dataset, st_out, st_format);
    if (*analyze) return cmd_analyze(an);
    if (*plan) return cmd_plan(pl);
  } catch (const gplan::Error& e) {
    std::cerr << "gplan: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "gplan: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
