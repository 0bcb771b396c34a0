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

#include "isoas/lexer.hpp"

#include <algorithm>

#include "isoas/error.hpp"
#include "isoas/text.hpp"

namespace isoas {

namespace {

constexpr bool is_terminal_punct(char c) { return c == '.' || c == '?' || c == ','; }

struct Word {
  Span span;           // after punctuation stripping
  std::string lower;
  bool stripped = false;  // trailing punctuation was removed
};

std::vector<Word> scan_words(std::string_view text) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::size_t end = i;
    while (end > begin && is_terminal_punct(text[end - 1])) --end;
    if (end > begin) {
      words.push_back({{begin, end}, ascii_lower(text.substr(begin, end - begin)), end != i});
    }
  }
  return words;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return is_digit(c); });
}

}  // namespace

TokenStream tokenize(std::string_view text, const Lexicon& lexicon) {
  if (auto bad = find_invalid_utf8(text)) {
    throw Error(ErrorCode::EncodingError, "invalid UTF-8 at byte " + std::to_string(*bad), {{"offset", *bad}});
  }

  TokenStream ts;
  ts.source = std::string(text);
  const std::vector<Word> words = scan_words(text);
  const std::size_t max_words = std::max<std::size_t>(1, lexicon.longest_phrase_words());

  std::size_t i = 0;
  while (i < words.size()) {
    // Longest run of words starting at i that a phrase may cover.
    std::size_t reach = 1;
    while (reach < max_words && i + reach < words.size() && !words[i + reach - 1].stripped) ++reach;

    std::string candidate;
    std::vector<std::string> prefixes;
    for (std::size_t k = 0; k < reach; ++k) {
      if (k) candidate.push_back(' ');
      candidate += words[i + k].lower;
      prefixes.push_back(candidate);
    }

    Token tok;
    std::size_t used = 0;
    for (std::size_t k = reach; k >= 1; --k) {
      if (auto cls = lexicon.lookup(prefixes[k - 1])) {
        tok.cls = *cls;
        tok.lexeme = prefixes[k - 1];
        used = k;
        break;
      }
    }
    if (used == 0) {
      used = 1;
      tok.lexeme = words[i].lower;
      if (all_digits(tok.lexeme)) {
        tok.cls = TokenClass::Number;
      } else if (!lexicon.free_identifier_classes().empty()) {
        tok.cls = *lexicon.free_identifier_classes().begin();
        tok.free_identifier = true;
      } else {
        throw Error(ErrorCode::UnknownPhrase, "'" + tok.lexeme + "' is not in the lexicon",
                    {{"word", tok.lexeme}, {"offset", words[i].span.begin}});
      }
    }
    tok.span = {words[i].span.begin, words[i + used - 1].span.end};
    tok.surface = std::string(text.substr(tok.span.begin, tok.span.end - tok.span.begin));
    ts.tokens.push_back(std::move(tok));
    i += used;
  }
  return ts;
}

std::string untokenize(const TokenStream& ts) {
  std::string out;
  out.reserve(ts.source.size());
  std::size_t pos = 0;
  for (const Token& t : ts.tokens) {
    out.append(ts.source, pos, t.span.begin - pos);
    out += t.surface;
    pos = t.span.end;
  }
  out.append(ts.source, pos, std::string::npos);
  return out;
}

}  // namespace isoas
