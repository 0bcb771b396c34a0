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

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "isoas/lexer.hpp"

namespace isoas {

enum class RuleKind { astmt, bstmt, cstmt, stmt1, stmt2, condbt, condeq, condweq, condeqbt };

inline constexpr std::array<RuleKind, 9> kAllRules = {
    RuleKind::astmt,  RuleKind::bstmt,  RuleKind::cstmt,   RuleKind::stmt1,   RuleKind::stmt2,
    RuleKind::condbt, RuleKind::condeq, RuleKind::condweq, RuleKind::condeqbt};

std::string_view to_string(RuleKind r);
std::optional<RuleKind> rule_from_string(std::string_view s);
bool is_conditional(RuleKind r);

// One position of a production body: the set of classes accepted there.
// Condition values accept C or NUMBER.
using Slot = std::set<TokenClass>;
const std::vector<Slot>& production(RuleKind r);

struct Statement {
  RuleKind rule;
  std::optional<Token> subject;
  std::optional<Token> verb;
  std::optional<Token> concept_;
  std::vector<Token> cond_tokens;
  Span span;
  std::size_t first_token = 0;  // index into the source stream
  std::size_t token_count = 0;
};

// Detail attached to NoRuleMatches: `position` is a token index into the
// whole stream; `expected` the classes that would have extended a viable
// prefix; `end_ok` whether the input could have stopped there instead.
struct ParseFailure {
  std::size_t position = 0;
  std::set<TokenClass> expected;
  bool end_ok = false;
};

// The whole stream must be exactly one production.
Statement parse(const TokenStream& ts);

// Splits the stream into consecutive statements, preferring the longest
// production at each boundary and backtracking when a split dead-ends.
std::vector<Statement> parse_many(const TokenStream& ts);

}  // namespace isoas
