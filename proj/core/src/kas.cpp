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

#include "gplan/kas.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

namespace {

std::string normalize_phrase(std::string_view phrase) { return join(tokenize(phrase), " "); }

TokenList split_phrase(const std::string& phrase) {
  TokenList out;
  for (auto t : split_whitespace(phrase)) out.emplace_back(t);
  return out;
}

std::set<std::string> normalize_words(const std::set<std::string>& in, const char* what) {
  std::set<std::string> out;
  for (const auto& w : in) {
    auto n = normalize_phrase(w);
    if (n.empty()) throw Error(ErrorCode::SchemaError, std::string("empty entry in ") + what);
    out.insert(std::move(n));
  }
  return out;
}

bool by_length_desc(const TokenList& a, const TokenList& b) {
  return a.size() != b.size() ? a.size() > b.size() : a < b;
}

}  // namespace

ActionLexicon::ActionLexicon(std::set<std::string> verbs, std::map<std::string, std::string> synonyms,
                             std::set<std::string> particles, std::set<std::string> stopwords)
    : verbs_(normalize_words(verbs, "verbs")),
      particles_(normalize_words(particles, "particles")),
      stopwords_(normalize_words(stopwords, "stopwords")) {
  if (verbs_.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no verbs");

  std::map<std::string, std::string> raw;
  for (const auto& [k, v] : synonyms) {
    auto key = normalize_phrase(k);
    auto value = normalize_phrase(v);
    if (key.empty() || value.empty())
      throw Error(ErrorCode::SchemaError, "synonym entries must be non-empty: '" + k + "'");
    if (key != value) raw[key] = value;
  }
  for (const auto& [key, _] : raw)
    if (verbs_.count(key))
      throw Error(ErrorCode::SchemaError, "'" + key + "' is both a verb and a synonym key");

  // Resolve chains so the map is idempotent.
  for (const auto& [key, first] : raw) {
    std::set<std::string> seen{key};
    std::string cur = first;
    while (true) {
      auto it = raw.find(cur);
      if (it == raw.end()) break;
      if (!seen.insert(cur).second)
        throw Error(ErrorCode::CycleInSynonyms, "synonym cycle through '" + key + "'");
      cur = it->second;
    }
    if (cur == key) throw Error(ErrorCode::CycleInSynonyms, "synonym cycle through '" + key + "'");
    synonyms_[key] = cur;
  }

  for (const auto& [k, v] : synonyms_) synonym_rules_.emplace_back(split_phrase(k), split_phrase(v));
  std::sort(synonym_rules_.begin(), synonym_rules_.end(),
            [](const auto& a, const auto& b) { return by_length_desc(a.first, b.first); });
  for (const auto& v : verbs_) verb_phrases_.push_back(split_phrase(v));
  std::sort(verb_phrases_.begin(), verb_phrases_.end(), by_length_desc);
}

std::string ActionLexicon::canonicalize(std::string_view phrase) const {
  auto n = normalize_phrase(phrase);
  auto it = synonyms_.find(n);
  return it == synonyms_.end() ? n : it->second;
}

json ActionLexicon::to_json() const {
  json j;
  j["verbs"] = verbs_;
  j["synonyms"] = synonyms_;
  j["particles"] = particles_;
  j["stopwords"] = stopwords_;
  return j;
}

std::string ActionLexicon::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ActionLexicon load_lexicon(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "lexicon must be a JSON object");
  auto words = [&](const char* key) {
    std::set<std::string> out;
    auto it = doc.find(key);
    if (it == doc.end()) return out;
    if (!it->is_array()) throw Error(ErrorCode::SchemaError, std::string(key) + " must be an array");
    for (const auto& w : *it) {
      if (!w.is_string()) throw Error(ErrorCode::SchemaError, std::string(key) + " must hold strings");
      out.insert(w.get<std::string>());
    }
    return out;
  };
  for (const auto& [key, _] : doc.items())
    if (key != "verbs" && key != "synonyms" && key != "particles" && key != "stopwords")
      throw Error(ErrorCode::SchemaError, "lexicon: unexpected field '" + key + "'");

  std::map<std::string, std::string> synonyms;
  if (auto it = doc.find("synonyms"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorCode::SchemaError, "synonyms must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw Error(ErrorCode::SchemaError, "synonym values must be strings");
      synonyms[k] = v.get<std::string>();
    }
  }
  return ActionLexicon(words("verbs"), std::move(synonyms), words("particles"), words("stopwords"));
}

ActionLexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return load_lexicon(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

const ActionLexicon& default_lexicon() {
  static const ActionLexicon lexicon = load_lexicon(json::parse(default_lexicon_document()));
  return lexicon;
}

namespace {

bool is_clause_mark(char c) {
  return c == ',' || c == '.' || c == ';' || c == '!' || c == '?' || c == '|';
}

bool matches_at(const std::vector<Token>& toks, std::size_t i, const TokenList& phrase) {
  if (i + phrase.size() > toks.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k)
    if (toks[i + k].text != phrase[k]) return false;
  return true;
}

// Longest verb phrase starting at i, or nullptr.
const TokenList* verb_at(const std::vector<Token>& toks, std::size_t i, const ActionLexicon& lex) {
  for (const auto& v : lex.verb_phrases())
    if (matches_at(toks, i, v)) return &v;
  return nullptr;
}

std::vector<Token> rewrite_synonyms(const std::vector<Token>& clause, const ActionLexicon& lex) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < clause.size()) {
    const std::pair<TokenList, TokenList>* rule = nullptr;
    for (const auto& r : lex.synonym_rules())
      if (matches_at(clause, i, r.first)) {
        rule = &r;
        break;
      }
    if (!rule) {
      out.push_back(clause[i++]);
      continue;
    }
    std::size_t begin = clause[i].begin;
    std::size_t end = clause[i + rule->first.size() - 1].end;
    for (const auto& t : rule->second) out.push_back({t, begin, end});
    i += rule->first.size();
  }
  return out;
}

std::vector<std::vector<Token>> split_clauses(std::string_view step) {
  std::vector<std::vector<Token>> clauses;
  std::size_t start = 0;
  auto add_range = [&](std::size_t b, std::size_t e) {
    std::vector<Token> cur;
    for (auto t : tokenize_with_offsets(step.substr(b, e - b))) {
      t.begin += b;
      t.end += b;
      if (t.text == "and" || t.text == "then") {
        if (!cur.empty()) clauses.push_back(std::move(cur));
        cur.clear();
        continue;
      }
      cur.push_back(std::move(t));
    }
    if (!cur.empty()) clauses.push_back(std::move(cur));
  };
  for (std::size_t i = 0; i < step.size(); ++i) {
    if (is_clause_mark(step[i])) {
      add_range(start, i);
      start = i + 1;
    }
  }
  add_range(start, step.size());
  return clauses;
}

}  // namespace

std::vector<ActionPhrase> extract_key_actions(std::string_view step, const ActionLexicon& lexicon) {
  std::vector<ActionPhrase> phrases;
  for (const auto& raw_clause : split_clauses(step)) {
    auto clause = rewrite_synonyms(raw_clause, lexicon);
    std::size_t anchor = 0;
    const TokenList* verb = nullptr;
    for (; anchor < clause.size(); ++anchor)
      if ((verb = verb_at(clause, anchor, lexicon))) break;
    if (!verb) continue;

    ActionPhrase phrase;
    phrase.canonical_verb = join(*verb, " ");
    TokenList span;
    auto close = [&] {
      if (!span.empty()) phrase.arguments.push_back(std::move(span));
      span.clear();
    };
    std::size_t i = anchor + verb->size();
    while (i < clause.size()) {
      const auto& word = clause[i].text;
      if (lexicon.particles().count(word)) {
        close();
        ++i;
      } else if (const auto* other = verb_at(clause, i, lexicon)) {
        close();
        i += other->size();
      } else {
        if (!lexicon.stopwords().count(word)) span.push_back(word);
        ++i;
      }
    }
    close();
    auto b = clause[anchor].begin;
    phrase.raw_span = std::string(step.substr(b, clause.back().end - b));
    phrases.push_back(std::move(phrase));
  }
  return phrases;
}

double argument_credit(const TokenList& generated, const TokenList& reference) {
  if (generated.empty() || reference.empty()) return 0.0;
  auto contains = [](const TokenList& list, const std::string& w) {
    return std::find(list.begin(), list.end(), w) != list.end();
  };
  if (!contains(generated, reference.back()) && !contains(reference, generated.back())) return 0.0;
  std::size_t shared = 0;
  for (const auto& w : reference)
    if (contains(generated, w)) ++shared;
  return static_cast<double>(shared) / static_cast<double>(reference.size());
}

double phrase_match_score(const ActionPhrase& generated, const ActionPhrase& reference) {
  if (generated.canonical_verb != reference.canonical_verb) return 0.0;
  if (reference.arguments.empty()) return 1.0;
  double total = 0.0;
  for (const auto& r : reference.arguments) {
    double best = 0.0;
    for (const auto& g : generated.arguments) best = std::max(best, argument_credit(g, r));
    total += best;
  }
  return total / static_cast<double>(reference.arguments.size());
}

StepScore kas_step(const std::vector<ActionPhrase>& generated,
                   const std::vector<ActionPhrase>& reference) {
  StepScore out;
  if (generated.empty()) {
    out.value = reference.empty() ? 1.0 : 0.0;
    return out;
  }
  // Only phrases sharing a canonical verb can score above zero.
  std::unordered_map<std::string, std::vector<const ActionPhrase*>> by_verb;
  for (const auto& r : reference) by_verb[r.canonical_verb].push_back(&r);

  double total = 0.0;
  for (const auto& g : generated) {
    double best = 0.0;
    const ActionPhrase* best_ref = nullptr;
    if (auto it = by_verb.find(g.canonical_verb); it != by_verb.end()) {
      for (const auto* r : it->second) {
        double s = phrase_match_score(g, *r);
        if (s > best) {
          best = s;
          best_ref = r;
          if (best >= 1.0) break;
        }
      }
    }
    total += best;
    if (best_ref)
      out.matched.push_back({g, *best_ref, best});
    else
      out.unmatched.push_back(g);
  }
  out.value = total / static_cast<double>(generated.size());
  return out;
}

StepScore kas_step(std::string_view generated, std::string_view reference,
                   const ActionLexicon& lexicon) {
  if (tokenize(generated).empty()) return {};
  return kas_step(extract_key_actions(generated, lexicon), extract_key_actions(reference, lexicon));
}

std::vector<StepScore> kas_plan(const AlignedPair& pair, const ActionLexicon& lexicon) {
  std::vector<StepScore> out;
  out.reserve(pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i)
    out.push_back(kas_step(pair.generated[i], pair.reference[i], lexicon));
  return out;
}

}  // namespace gplan
