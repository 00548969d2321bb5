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

#include <benchmark/benchmark.h>

#include "gplan/env_table.hpp"
#include "gplan/kas.hpp"
#include "gplan/ngram_metrics.hpp"
#include "gplan/pipeline.hpp"
#include "oracles.hpp"

namespace {

std::vector<std::pair<std::string, std::string>> step_pairs(std::size_t n) {
  oracle::StepGen rng(42);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.step(), rng.step());
  return out;
}

void BM_KasStep(benchmark::State& state) {
  auto pairs = step_pairs(256);
  const auto& lex = gplan::default_lexicon();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [g, r] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(gplan::kas_step(g, r, lex).value);
  }
}
BENCHMARK(BM_KasStep);

void BM_KasBruteForce(benchmark::State& state) {
  auto pairs = step_pairs(256);
  const auto& lex = gplan::default_lexicon();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [g, r] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(oracle::brute_kas_step(g, r, lex));
  }
}
BENCHMARK(BM_KasBruteForce);

void BM_BleuStep(benchmark::State& state) {
  auto pairs = step_pairs(256);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [g, r] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(gplan::bleu_step(g, r));
  }
}
BENCHMARK(BM_BleuStep);

void BM_CiderStep(benchmark::State& state) {
  auto pairs = step_pairs(256);
  std::vector<std::string> refs;
  for (const auto& p : pairs) refs.push_back(p.second);
  auto idf = gplan::build_idf(refs);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [g, r] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(gplan::cider_step(g, r, idf));
  }
}
BENCHMARK(BM_CiderStep);

void BM_Flatten(benchmark::State& state) {
  auto table = gplan::load_table_file(oracle::fixture("bedroom_env.json"));
  for (auto _ : state) benchmark::DoNotOptimize(gplan::flatten("Put keys on drawers", table).encoding.text());
}
BENCHMARK(BM_Flatten);

void BM_EvaluateSynthetic(benchmark::State& state) {
  auto tasks = static_cast<std::size_t>(state.range(0));
  oracle::StepGen rng(7);
  std::vector<gplan::TaskRecord> ds;
  std::vector<gplan::Prediction> preds;
  for (std::size_t i = 0; i < tasks; ++i) {
    auto id = "task" + std::to_string(i);
    ds.push_back({id, "goal", gplan::Plan(rng.steps(rng.length(2, 12))), std::nullopt, gplan::Split::Train});
    preds.push_back({id, gplan::Plan(rng.steps(rng.length(1, 12))), std::nullopt, std::nullopt});
  }
  gplan::EvaluateOptions opt;
  opt.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gplan::evaluate(ds, preds, opt).corpus.size());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(tasks));
}
BENCHMARK(BM_EvaluateSynthetic)->Args({1000, 1})->Args({1000, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
