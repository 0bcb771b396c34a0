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

#include "isoas/parser.hpp"

#include <algorithm>
#include <map>

#include "isoas/error.hpp"

namespace isoas {

namespace {

using TC = TokenClass;

const Slot kA{TC::A}, kB{TC::B}, kC{TC::C}, kW{TC::W}, kBt{TC::Bt}, kEq{TC::Eq}, kAnd{TC::And};
const Slot kValue{TC::C, TC::Number};

const std::map<RuleKind, std::vector<Slot>>& productions() {
  static const std::map<RuleKind, std::vector<Slot>> table = {
      {RuleKind::astmt, {kA}},
      {RuleKind::bstmt, {kB}},
      {RuleKind::cstmt, {kC}},
      {RuleKind::stmt1, {kA, kB, kC}},
      {RuleKind::stmt2, {kB, kC}},
      {RuleKind::condbt, {kA, kB, kC, kW, kBt, kValue, kAnd, kValue}},
      {RuleKind::condeq, {kA, kB, kC, kEq, kValue}},
      {RuleKind::condweq, {kA, kB, kC, kW, kEq}},
      {RuleKind::condeqbt, {kA, kB, kC, kW, kEq, kBt, kValue, kAnd, kValue}},
  };
  return table;
}

// Productions that match tokens[start, start+len) exactly, longest first,
// plus the furthest failure seen while trying.
struct Candidates {
  std::vector<RuleKind> rules;
  ParseFailure failure;
};

Candidates match_at(std::span<const Token> tokens, std::size_t start) {
  Candidates out;
  std::vector<RuleKind> viable(kAllRules.begin(), kAllRules.end());
  std::size_t offset = 0;
  while (true) {
    const std::size_t pos = start + offset;
    ParseFailure here{pos, {}, false};
    std::vector<RuleKind> next;
    for (RuleKind r : viable) {
      const auto& body = productions().at(r);
      if (body.size() == offset) {
        out.rules.push_back(r);
        here.end_ok = true;
      } else {
        here.expected.insert(body[offset].begin(), body[offset].end());
        if (pos < tokens.size() && body[offset].count(tokens[pos].cls)) next.push_back(r);
      }
    }
    if (next.empty()) {
      out.failure = here;
      break;
    }
    viable = std::move(next);
    ++offset;
  }
  std::reverse(out.rules.begin(), out.rules.end());
  return out;
}

Statement bind_slots(RuleKind rule, std::span<const Token> tokens, std::size_t start) {
  const std::size_t n = productions().at(rule).size();
  Statement s;
  s.rule = rule;
  s.first_token = start;
  s.token_count = n;
  s.span = {tokens[start].span.begin, tokens[start + n - 1].span.end};
  for (std::size_t i = start; i < start + n; ++i) {
    const Token& t = tokens[i];
    const std::size_t at = i - start;
    // Direct productions never reach position 3; the first three positions of
    // every conditional production are A B C.
    if (t.cls == TC::A && !s.subject) {
      s.subject = t;
    } else if (t.cls == TC::B && !s.verb) {
      s.verb = t;
    } else if (t.cls == TC::C && !s.concept_ && at < 3) {
      s.concept_ = t;
    } else {
      s.cond_tokens.push_back(t);
    }
  }
  return s;
}

[[noreturn]] void throw_no_match(const ParseFailure& f, std::span<const Token> tokens) {
  nlohmann::json expected = nlohmann::json::array();
  for (TokenClass c : f.expected) expected.push_back(std::string(to_string(c)));
  std::string found = f.position < tokens.size()
                          ? std::string(to_string(tokens[f.position].cls)) + " '" + tokens[f.position].lexeme + "'"
                          : "end of input";
  std::string msg = "no rule matches at token " + std::to_string(f.position) + " (found " + found + ", expected ";
  if (f.expected.empty()) {
    msg += "end of input)";
  } else {
    msg += expected.dump();
    if (f.end_ok) msg += " or end of statement";
    msg += ")";
  }
  nlohmann::json detail = {{"position", f.position}, {"expected", expected}, {"end_ok", f.end_ok}};
  if (f.position < tokens.size()) {
    detail["found"] = std::string(to_string(tokens[f.position].cls));
    detail["offset"] = tokens[f.position].span.begin;
  }
  throw Error(ErrorCode::NoRuleMatches, msg, detail);
}

}  // namespace

std::string_view to_string(RuleKind r) {
  switch (r) {
    case RuleKind::astmt: return "astmt";
    case RuleKind::bstmt: return "bstmt";
    case RuleKind::cstmt: return "cstmt";
    case RuleKind::stmt1: return "stmt1";
    case RuleKind::stmt2: return "stmt2";
    case RuleKind::condbt: return "condbt";
    case RuleKind::condeq: return "condeq";
    case RuleKind::condweq: return "condweq";
    case RuleKind::condeqbt: return "condeqbt";
  }
  return "?";
}

std::optional<RuleKind> rule_from_string(std::string_view s) {
  for (RuleKind r : kAllRules) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

bool is_conditional(RuleKind r) {
  return r == RuleKind::condbt || r == RuleKind::condeq || r == RuleKind::condweq || r == RuleKind::condeqbt;
}

const std::vector<Slot>& production(RuleKind r) { return productions().at(r); }

Statement parse(const TokenStream& ts) {
  if (ts.empty()) throw Error(ErrorCode::EmptyInput, "nothing to parse");
  const std::span<const Token> tokens(ts.tokens);
  Candidates c = match_at(tokens, 0);
  for (RuleKind r : c.rules) {
    if (production(r).size() == tokens.size()) return bind_slots(r, tokens, 0);
  }
  throw_no_match(c.failure, tokens);
}

std::vector<Statement> parse_many(const TokenStream& ts) {
  if (ts.empty()) throw Error(ErrorCode::EmptyInput, "nothing to parse");
  const std::span<const Token> tokens(ts.tokens);

  std::optional<ParseFailure> worst;
  auto note = [&](const ParseFailure& f) {
    if (!worst || f.position > worst->position) worst = f;
  };

  // Depth-first over boundaries; `dead` memoizes starts known to fail.
  std::vector<bool> dead(tokens.size(), false);
  std::vector<Statement> out;
  auto search = [&](auto&& self, std::size_t start) -> bool {
    if (start == tokens.size()) return true;
    if (dead[start]) return false;
    Candidates c = match_at(tokens, start);
    note(c.failure);
    for (RuleKind r : c.rules) {
      out.push_back(bind_slots(r, tokens, start));
      if (self(self, start + production(r).size())) return true;
      out.pop_back();
    }
    dead[start] = true;
    return false;
  };
  if (search(search, 0)) return out;
  throw_no_match(*worst, tokens);
}

}  // namespace isoas
