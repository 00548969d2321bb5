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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gplan/kas.hpp"
#include "gplan/plan.hpp"

namespace gplan {

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

inline constexpr int kMaxNGram = 4;

// Counts of every n-gram of order 1..max_n in `tokens`.
NGramCounts count_ngrams(const std::vector<std::string>& tokens, int max_n = kMaxNGram);

inline constexpr double kBleuEpsilon = 0.1;

// Sentence BLEU of one generated step against one reference step.
//
// Orders the candidate is too short to have are left out of the geometric
// mean; an order with candidate n-grams but no matches uses epsilon / count
// (only for n > 1: no unigram match means 0).
double bleu_step(std::string_view generated, std::string_view reference, int max_n = kMaxNGram);

// Document frequencies over reference steps, one step per document.
class IdfTable {
 public:
  std::size_t document_count() const noexcept { return documents_; }
  // 0 for n-grams never seen.
  std::size_t df(const NGram& gram) const;
  double idf(const NGram& gram) const;  // log(N / max(df, 1))
  std::size_t size() const noexcept { return df_.size(); }

 private:
  friend IdfTable build_idf(const std::vector<std::string>& reference_steps);
  std::size_t documents_ = 0;
  std::map<NGram, std::size_t> df_;
};

IdfTable build_idf(const std::vector<std::string>& reference_steps);

inline constexpr double kCiderScale = 10.0;

// Plain CIDEr (no length penalty, no clipping) with a single reference.
double cider_step(std::string_view generated, std::string_view reference, const IdfTable& idf);

// Attach point for step-level metrics. Implementations must be
// deterministic and safe to call concurrently.
class StepScorer {
 public:
  virtual ~StepScorer() = default;
  virtual std::string name() const = 0;
  virtual double score(std::string_view generated, std::string_view reference) const = 0;
};

class BleuScorer final : public StepScorer {
 public:
  explicit BleuScorer(int max_n = kMaxNGram) : max_n_(max_n) {}
  std::string name() const override { return "bleu"; }
  double score(std::string_view g, std::string_view r) const override {
    return bleu_step(g, r, max_n_);
  }

 private:
  int max_n_;
};

class CiderScorer final : public StepScorer {
 public:
  explicit CiderScorer(std::shared_ptr<const IdfTable> idf) : idf_(std::move(idf)) {}
  std::string name() const override { return "cider"; }
  double score(std::string_view g, std::string_view r) const override {
    return cider_step(g, r, *idf_);
  }

 private:
  std::shared_ptr<const IdfTable> idf_;
};

class KasScorer final : public StepScorer {
 public:
  explicit KasScorer(std::shared_ptr<const ActionLexicon> lexicon) : lexicon_(std::move(lexicon)) {}
  std::string name() const override { return "kas"; }
  double score(std::string_view g, std::string_view r) const override {
    return kas_step(g, r, *lexicon_).value;
  }

 private:
  std::shared_ptr<const ActionLexicon> lexicon_;
};

// Scores aligned steps pairwise. A scorer exception is rethrown as
// ScorerFailure naming the step index.
std::vector<double> score_plan(const AlignedPair& pair, const StepScorer& scorer);

}  // namespace gplan
