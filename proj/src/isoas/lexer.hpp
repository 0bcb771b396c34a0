// Copyright 2026 The isoas Authors
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

#include "isoas/lexicon.hpp"

namespace isoas {

struct Span {
  std::size_t begin = 0;  // byte offsets, half-open
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  TokenClass cls;
  std::string lexeme;   // lowercase, single-spaced
  std::string surface;  // exact slice of the input
  Span span;
  bool free_identifier = false;  // C token not listed in the lexicon

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
  std::vector<Token> tokens;
  std::string source;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
};

// Greedy left-to-right scan: the longest lexicon phrase (in words) wins, an
// all-digit word is NUMBER, and any other word becomes a free identifier.
// Trailing '.', '?' and ',' are skipped. Throws EncodingError on invalid UTF-8.
TokenStream tokenize(std::string_view text, const Lexicon& lexicon);

// Rebuilds the source from token surfaces and the skipped gaps between them.
std::string untokenize(const TokenStream& ts);

}  // namespace isoas
