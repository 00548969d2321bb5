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

#include "gplan/ngram_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

NGramCounts count_ngrams(const std::vector<std::string>& tokens, int max_n) {
  NGramCounts counts;
  for (int n = 1; n <= max_n; ++n) {
    if (tokens.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
      ++counts[NGram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

double bleu_step(std::string_view generated, std::string_view reference, int max_n) {
  if (max_n < 1) throw Error(ErrorCode::DomainError, "BLEU order must be >= 1");
  auto gen = tokenize(generated);
  auto ref = tokenize(reference);
  if (gen.empty() || ref.empty()) return 0.0;

  auto gen_counts = count_ngrams(gen, max_n);
  auto ref_counts = count_ngrams(ref, max_n);
  std::vector<std::size_t> matches(max_n + 1, 0), totals(max_n + 1, 0);
  for (const auto& [gram, c] : gen_counts) {
    auto n = gram.size();
    totals[n] += c;
    if (auto it = ref_counts.find(gram); it != ref_counts.end()) matches[n] += std::min(c, it->second);
  }
  if (matches[1] == 0) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    if (totals[n] == 0) break;
    double num = matches[n] ? static_cast<double>(matches[n]) : kBleuEpsilon;
    log_sum += std::log(num / static_cast<double>(totals[n]));
    ++orders;
  }
  double bp = gen.size() < ref.size()
                  ? std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(gen.size()))
                  : 1.0;
  return bp * std::exp(log_sum / orders);
}

std::size_t IdfTable::df(const NGram& gram) const {
  auto it = df_.find(gram);
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::idf(const NGram& gram) const {
  auto d = std::max<std::size_t>(df(gram), 1);
  return std::log(static_cast<double>(documents_)) - std::log(static_cast<double>(d));
}

IdfTable build_idf(const std::vector<std::string>& reference_steps) {
  if (reference_steps.empty()) throw Error(ErrorCode::EmptyCorpus, "no reference steps for IDF");
  IdfTable table;
  table.documents_ = reference_steps.size();
  for (const auto& step : reference_steps)
    for (const auto& [gram, _] : count_ngrams(tokenize(step), kMaxNGram)) ++table.df_[gram];
  return table;
}

namespace {

struct TfIdf {
  std::array<std::map<NGram, double>, kMaxNGram> vec;
  std::array<double, kMaxNGram> norm{};
};

TfIdf tfidf(const std::vector<std::string>& tokens, const IdfTable& idf) {
  TfIdf out;
  for (const auto& [gram, count] : count_ngrams(tokens, kMaxNGram)) {
    auto n = gram.size() - 1;
    double w = static_cast<double>(count) * idf.idf(gram);
    out.vec[n][gram] = w;
    out.norm[n] += w * w;
  }
  for (auto& v : out.norm) v = std::sqrt(v);
  return out;
}

}  // namespace

double cider_step(std::string_view generated, std::string_view reference, const IdfTable& idf) {
  auto g = tfidf(tokenize(generated), idf);
  auto r = tfidf(tokenize(reference), idf);
  double total = 0.0;
  for (int n = 0; n < kMaxNGram; ++n) {
    if (g.norm[n] == 0.0 || r.norm[n] == 0.0) continue;
    double dot = 0.0;
    for (const auto& [gram, w] : g.vec[n])
      if (auto it = r.vec[n].find(gram); it != r.vec[n].end()) dot += w * it->second;
    total += dot / (g.norm[n] * r.norm[n]);
  }
  return total / kMaxNGram * kCiderScale;
}

std::vector<double> score_plan(const AlignedPair& pair, const StepScorer& scorer) {
  std::vector<double> out;
  out.reserve(pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) {
    try {
      out.push_back(scorer.score(pair.generated[i], pair.reference[i]));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ScorerFailure,
                  scorer.name() + " failed at step " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gplan
