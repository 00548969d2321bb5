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
#include <string>
#include <string_view>
#include <vector>

namespace gplan {

// Identifier echoed into reports so scores stay comparable across runs.
inline constexpr std::string_view kTokenizerId = "lower-nopunct-ws/1";

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
};

// The one tokenizer shared by BLEU, CIDEr, KAS and dataset statistics:
// ASCII lowercase, apostrophes deleted, every other ASCII punctuation
// character treated as whitespace, then split on whitespace.
std::vector<std::string> tokenize(std::string_view text);

// Same as tokenize() but keeps byte offsets of each token in `text`.
std::vector<Token> tokenize_with_offsets(std::string_view text);

// Plain whitespace split with no normalization (budget accounting).
std::vector<std::string_view> split_whitespace(std::string_view text);
std::size_t count_whitespace_tokens(std::string_view text);

std::string_view trim(std::string_view text) noexcept;
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace gplan
