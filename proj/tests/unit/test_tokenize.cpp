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

#include "gplan/tokenize.hpp"

using gplan::tokenize;

TEST_CASE("tokenize lowercases and strips punctuation") {
  CHECK(tokenize("Take the Keys from the desk.") ==
        std::vector<std::string>{"take", "the", "keys", "from", "the", "desk"});
  CHECK(tokenize("you're at the coffee-table!") ==
        std::vector<std::string>{"youre", "at", "the", "coffee", "table"});
  CHECK(tokenize("  \t ").empty());
  CHECK(tokenize("Keys_1") == std::vector<std::string>{"keys", "1"});
}

TEST_CASE("tokenize_with_offsets points back into the source") {
  std::string s = "Go to, the DESK";
  auto toks = gplan::tokenize_with_offsets(s);
  REQUIRE(toks.size() == 4);
  CHECK(s.substr(toks[3].begin, toks[3].end - toks[3].begin) == "DESK");
  CHECK(toks[1].text == "to");
}

TEST_CASE("whitespace helpers") {
  CHECK(gplan::count_whitespace_tokens("a  b\tc\n") == 3);
  CHECK(gplan::trim("  x y  ") == "x y");
  CHECK(gplan::join({"a", "b"}, " | ") == "a | b");
}
