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

#include "isoas/sql.hpp"

#include <set>

#include "isoas/error.hpp"
#include "isoas/text.hpp"

namespace isoas {

namespace {

struct SqlToken {
  enum Kind { Word, Number, String, Punct, End } kind;
  std::string text;  // words uppercased; strings unescaped
  std::size_t offset;
};

[[noreturn]] void syntax_error(std::size_t offset, std::string_view expected) {
  throw Error(ErrorCode::SqlSyntaxError,
              "syntax error at offset " + std::to_string(offset) + ": expected " + std::string(expected),
              {{"offset", offset}, {"expected", std::string(expected)}});
}

bool is_word_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_word_char(char c) { return is_word_start(c) || is_digit(c); }

std::vector<SqlToken> lex(std::string_view s) {
  std::vector<SqlToken> out;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    const std::size_t start = i;
    const char c = s[i];
    if (is_word_start(c)) {
      while (i < s.size() && is_word_char(s[i])) ++i;
      out.push_back({SqlToken::Word, ascii_upper(s.substr(start, i - start)), start});
    } else if (is_digit(c) || (c == '-' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      ++i;
      while (i < s.size() && (is_digit(s[i]) || s[i] == '.' || s[i] == 'e' || s[i] == 'E' ||
                              ((s[i] == '+' || s[i] == '-') && (s[i - 1] == 'e' || s[i - 1] == 'E')))) {
        ++i;
      }
      std::string_view num = s.substr(start, i - start);
      if (!looks_numeric(num)) syntax_error(start, "a number");
      out.push_back({SqlToken::Number, std::string(num), start});
    } else if (c == '\'') {
      std::string text;
      ++i;
      while (true) {
        if (i == s.size()) syntax_error(start, "closing quote");
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            text.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        text.push_back(s[i++]);
      }
      out.push_back({SqlToken::String, std::move(text), start});
    } else if ((c == '<' || c == '>') && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({SqlToken::Punct, std::string(s.substr(i, 2)), start});
      i += 2;
    } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == '<' || c == '>' || c == ';') {
      out.push_back({SqlToken::Punct, std::string(1, c), start});
      ++i;
    } else {
      syntax_error(start, "a keyword, literal, or punctuation");
    }
  }
  out.push_back({SqlToken::End, "", s.size()});
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<SqlToken> toks) : toks_(std::move(toks)) {}

  const SqlToken& peek() const { return toks_[pos_]; }

  bool accept_word(std::string_view w) {
    if (peek().kind == SqlToken::Word && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_punct(std::string_view p) {
    if (peek().kind == SqlToken::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void word(std::string_view w) {
    if (!accept_word(w)) syntax_error(peek().offset, w);
  }
  void punct(std::string_view p) {
    if (!accept_punct(p)) syntax_error(peek().offset, "'" + std::string(p) + "'");
  }
  std::string string_literal() {
    if (peek().kind != SqlToken::String) syntax_error(peek().offset, "a quoted string");
    return toks_[pos_++].text;
  }
  Literal literal() {
    const SqlToken& t = peek();
    if (t.kind == SqlToken::Number) {
      ++pos_;
      auto x = parse_number(t.text);
      if (!x) syntax_error(t.offset, "a finite number");
      return Literal::of(*x);
    }
    if (t.kind == SqlToken::String) {
      ++pos_;
      return Literal::string(t.text);
    }
    syntax_error(t.offset, "a number or quoted string");
  }
  std::optional<CompareOp> compare_op() {
    if (peek().kind != SqlToken::Punct) return std::nullopt;
    auto op = op_from_symbol(peek().text);
    if (op) ++pos_;
    return op;
  }

 private:
  std::vector<SqlToken> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

StructuredQuery parse_sql(std::string_view sql, std::string_view store) {
  Reader r(lex(sql));
  r.word("SELECT");
  r.word("ID");
  r.punct(",");
  r.word("NAME");
  r.punct(",");
  r.word("KIND");
  r.punct(",");
  r.word("VALUE");
  r.word("FROM");
  r.word("RECORDS");
  r.word("WHERE");
  r.punct("(");

  std::set<std::string> concepts;
  do {
    r.word("KIND");
    r.punct("=");
    concepts.insert(r.string_literal());
  } while (r.accept_word("OR"));
  r.punct(")");

  std::vector<Filter> leaves;
  while (r.accept_word("AND")) {
    r.word("VALUE");
    if (r.accept_word("BETWEEN")) {
      Literal lo = r.literal();
      r.word("AND");
      Literal hi = r.literal();
      leaves.push_back(Filter{BetweenLeaf{std::move(lo), std::move(hi)}});
    } else if (auto op = r.compare_op()) {
      leaves.push_back(Filter{CompareLeaf{*op, r.literal()}});
    } else {
      syntax_error(r.peek().offset, "BETWEEN or a comparison operator");
    }
  }
  r.accept_punct(";");
  if (r.peek().kind != SqlToken::End) syntax_error(r.peek().offset, "AND or end of statement");

  StructuredQuery q;
  q.store = std::string(store);
  q.concepts.assign(concepts.begin(), concepts.end());
  if (leaves.size() == 1) {
    q.filter = std::move(leaves.front());
  } else if (!leaves.empty()) {
    q.filter = Filter{AndNode{std::move(leaves)}};
  }
  validate(q);
  return q;
}

}  // namespace isoas
