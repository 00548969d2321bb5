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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gplan/error.hpp"
#include "gplan/ngram_metrics.hpp"
#include "oracles.hpp"

using gplan::ErrorCode;

namespace {

const std::vector<std::string> kToyCorpus{"go to the desk", "pick up the keys", "put the keys on the desk"};

class Exploding final : public gplan::StepScorer {
 public:
  std::string name() const override { return "boom"; }
  double score(std::string_view g, std::string_view) const override {
    if (g == "bad") throw std::runtime_error("kaboom");
    return 1.0;
  }
};

}  // namespace

TEST_SUITE("ngram_metrics") {
TEST_CASE("n-gram counting") {
  auto c = gplan::count_ngrams({"a", "b", "a", "b"}, 2);
  CHECK(c.at({"a"}) == 2);
  CHECK(c.at({"a", "b"}) == 2);
  CHECK(c.at({"b", "a"}) == 1);
  CHECK(c.size() == 4);
  CHECK(gplan::count_ngrams({}, 4).empty());
}

TEST_CASE("BLEU frozen values") {
  CHECK(gplan::bleu_step("pick up the keys", "pick up the key") == doctest::Approx(0.3976353643835253).epsilon(1e-12));
  CHECK(gplan::bleu_step("pick up keys", "pick up the keys") == doctest::Approx(0.26397239179159177).epsilon(1e-12));
  CHECK(gplan::bleu_step("Pick up the keys.", "pick up the keys") == 1.0);
  CHECK(gplan::bleu_step("zzz", "pick up the keys") == 0.0);
  CHECK(gplan::bleu_step("", "pick up the keys") == 0.0);
  CHECK(gplan::bleu_step("keys", "keys") == 1.0);
}

TEST_CASE("BLEU agrees with the textbook oracle") {
  oracle::StepGen rng(21);
  for (int i = 0; i < 2000; ++i) {
    auto g = rng.step(), r = rng.step();
    CAPTURE(g);
    CAPTURE(r);
    double v = gplan::bleu_step(g, r);
    CHECK(v == doctest::Approx(oracle::textbook_bleu(g, r)).epsilon(1e-12));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("idf table") {
  auto idf = gplan::build_idf(kToyCorpus);
  CHECK(idf.document_count() == 3);
  CHECK(idf.df({"the"}) == 3);
  CHECK(idf.df({"keys"}) == 2);
  CHECK(idf.df({"the", "desk"}) == 2);
  CHECK(idf.df({"lamp"}) == 0);
  CHECK(idf.idf({"the"}) == 0.0);
  CHECK(idf.idf({"keys"}) == doctest::Approx(std::log(1.5)));
  CHECK(idf.idf({"lamp"}) == doctest::Approx(std::log(3.0)));
  CHECK(gplan::build_idf({"a a a"}).df({"a"}) == 1);
  CHECK([] {
    try {
      gplan::build_idf({});
    } catch (const gplan::Error& e) {
      return e.code() == ErrorCode::EmptyCorpus;
    }
    return false;
  }());
}

TEST_CASE("CIDEr frozen values") {
  auto idf = gplan::build_idf(kToyCorpus);
  CHECK(gplan::cider_step("go to the keys", "go to the desk", idf) == doctest::Approx(5.931181472616496).epsilon(1e-12));
  CHECK(gplan::cider_step("put the keys on the table", "put the keys on the desk", idf) ==
        doctest::Approx(7.673285499666567).epsilon(1e-12));
  CHECK(gplan::cider_step("pick up the keys", "pick up the keys", idf) == doctest::Approx(10.0));
  CHECK(gplan::cider_step("pick up the desk", "pick up the keys", idf) == doctest::Approx(5.931181472616496).epsilon(1e-12));
  CHECK(gplan::cider_step("", "pick up the keys", idf) == 0.0);
  CHECK(gplan::cider_step("the", "the", idf) == 0.0);
}

TEST_CASE("CIDEr identity is maximal") {
  auto ds = gplan::read_dataset_file(oracle::fixture("dataset.jsonl"));
  std::vector<std::string> corpus;
  for (const auto& r : ds.records) corpus.insert(corpus.end(), r.reference_plan.steps().begin(), r.reference_plan.steps().end());
  auto idf = gplan::build_idf(corpus);
  oracle::StepGen rng(4);
  for (const auto& ref : corpus) {
    double self = gplan::cider_step(ref, ref, idf);
    CHECK(self <= gplan::kCiderScale + 1e-9);
    CHECK(self >= 0.0);
    auto other = rng.step();
    CHECK(gplan::cider_step(other, ref, idf) <= self + 1e-9);
  }
}

TEST_CASE("score_plan wraps scorer failures with the step index") {
  gplan::AlignedPair pair{{"ok", "bad"}, {"x", "y"}, 0, 0};
  Exploding scorer;
  try {
    gplan::score_plan(pair, scorer);
    FAIL("expected ScorerFailure");
  } catch (const gplan::Error& e) {
    CHECK(e.code() == ErrorCode::ScorerFailure);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
  gplan::AlignedPair fine{{"ok"}, {"x"}, 0, 0};
  CHECK(gplan::score_plan(fine, scorer) == std::vector<double>{1.0});
}

TEST_CASE("scorer names") {
  CHECK(gplan::BleuScorer().name() == "bleu");
  CHECK(gplan::CiderScorer(std::make_shared<gplan::IdfTable>(gplan::build_idf(kToyCorpus))).name() == "cider");
  CHECK(gplan::KasScorer(std::shared_ptr<const gplan::ActionLexicon>(std::shared_ptr<void>(), &gplan::default_lexicon()))
            .name() == "kas");
}
}
