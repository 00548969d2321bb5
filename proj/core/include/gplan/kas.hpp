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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplan/plan.hpp"

namespace gplan {

using TokenList = std::vector<std::string>;

// Key Action Score machinery.
//
// A step is split into clauses at ", . ; ! ? |" and at the words "and" and
// "then". Inside a clause, synonym phrases are rewritten to their canonical
// form, then the leftmost (longest) lexicon verb anchors one action phrase.
// The tokens after the verb are cut into argument spans at particles and at
// any further verb; stopwords are dropped and empty spans discarded.

struct ActionPhrase {
  std::string canonical_verb;
  std::vector<TokenList> arguments;
  std::string raw_span;

  friend bool operator==(const ActionPhrase&, const ActionPhrase&) = default;
};

class ActionLexicon {
 public:
  // Validates and resolves synonym chains. Throws EmptyLexicon,
  // CycleInSynonyms or SchemaError.
  ActionLexicon(std::set<std::string> verbs, std::map<std::string, std::string> synonyms,
                std::set<std::string> particles, std::set<std::string> stopwords);

  const std::set<std::string>& verbs() const noexcept { return verbs_; }
  // Fully resolved: canonical(canonical(x)) == canonical(x).
  const std::map<std::string, std::string>& synonyms() const noexcept { return synonyms_; }
  const std::set<std::string>& particles() const noexcept { return particles_; }
  const std::set<std::string>& stopwords() const noexcept { return stopwords_; }

  // Maps a (normalized) phrase through the synonym table.
  std::string canonicalize(std::string_view phrase) const;

  // Token-level views used by the extractor; longest phrase first.
  const std::vector<std::pair<TokenList, TokenList>>& synonym_rules() const noexcept {
    return synonym_rules_;
  }
  const std::vector<TokenList>& verb_phrases() const noexcept { return verb_phrases_; }

  nlohmann::json to_json() const;
  // Stable FNV-1a digest of the canonical document, for report echoes.
  std::string digest() const;

 private:
  std::set<std::string> verbs_;
  std::map<std::string, std::string> synonyms_;
  std::set<std::string> particles_;
  std::set<std::string> stopwords_;
  std::vector<std::pair<TokenList, TokenList>> synonym_rules_;
  std::vector<TokenList> verb_phrases_;
};

// Document: {verbs: [..], synonyms: {..}, particles: [..], stopwords: [..]}.
ActionLexicon load_lexicon(const nlohmann::json& doc);
ActionLexicon load_lexicon_file(const std::string& path);
// The household lexicon shipped with the library.
const ActionLexicon& default_lexicon();
std::string_view default_lexicon_document();

std::vector<ActionPhrase> extract_key_actions(std::string_view step, const ActionLexicon& lexicon);

// Token overlap over the reference argument, gated on a head-token match.
double argument_credit(const TokenList& generated, const TokenList& reference);

double phrase_match_score(const ActionPhrase& generated, const ActionPhrase& reference);

struct PhraseMatch {
  ActionPhrase generated;
  ActionPhrase reference;
  double score = 0.0;
};

struct StepScore {
  double value = 0.0;
  std::vector<PhraseMatch> matched;
  std::vector<ActionPhrase> unmatched;
};

// Precision of the generated step's key actions against the reference
// step's. A blank generated step (null plan padding) scores 0.
StepScore kas_step(std::string_view generated, std::string_view reference,
                   const ActionLexicon& lexicon);
StepScore kas_step(const std::vector<ActionPhrase>& generated,
                   const std::vector<ActionPhrase>& reference);

std::vector<StepScore> kas_plan(const AlignedPair& pair, const ActionLexicon& lexicon);

}  // namespace gplan
