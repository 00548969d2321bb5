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

#include "gplan/tokenize.hpp"

#include "gplan/error.hpp"

namespace gplan {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::MissingTerminator: return "MissingTerminator";
    case ErrorCode::MalformedStep: return "MalformedStep";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DanglingReceptacle: return "DanglingReceptacle";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::CycleInSynonyms: return "CycleInSynonyms";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyBucketBoundaries: return "EmptyBucketBoundaries";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ScorerFailure: return "ScorerFailure";
    case ErrorCode::GeneratorUnreachable: return "GeneratorUnreachable";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::EmptyFirstStep: return "EmptyFirstStep";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateTask: return "DuplicateTask";
    case ErrorCode::MissingTask: return "MissingTask";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
         (u >= 123 && u <= 126);
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<Token> tokenize_with_offsets(std::string_view text) {
  std::vector<Token> out;
  Token cur;
  bool open = false;
  auto flush = [&](std::size_t at) {
    if (open) {
      cur.end = at;
      out.push_back(std::move(cur));
      cur = Token{};
      open = false;
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\'') continue;  // deleted, does not break the token
    if (is_space(c) || is_ascii_punct(c)) {
      flush(i);
      continue;
    }
    if (!open) {
      open = true;
      cur.begin = i;
    }
    cur.text.push_back(lower(c));
  }
  flush(text.size());
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.text));
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::size_t count_whitespace_tokens(std::string_view text) {
  return split_whitespace(text).size();
}

std::string_view trim(std::string_view text) noexcept {
  std::size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return text.substr(b, e - b);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace gplan
