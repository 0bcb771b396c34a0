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

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "isoas/lexicon.hpp"
#include "isoas/parser.hpp"

namespace isoas {

enum class Intent { DirectSearch, ConditionalSearch, SubjectOnly, VerbOnly, ConceptOnly };

std::string_view to_string(Intent i);
Intent intent_for(RuleKind r);

// A condition value. Numeric literals carry their parsed value and a
// canonical text form; anything else is kept as text.
struct Literal {
  std::string text;
  std::optional<double> number;

  bool numeric() const { return number.has_value(); }

  static Literal from_text(std::string_view s);  // numeric when it parses as one
  static Literal of(double x);
  static Literal string(std::string s) { return {std::move(s), std::nullopt}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct ConditionSpec {
  enum class Kind { Between, Compare, CompareHole };
  Kind kind;
  std::optional<std::string> op;  // Eq lexeme
  std::optional<Literal> lo, hi;
  std::optional<Literal> value;
};

std::string_view to_string(ConditionSpec::Kind k);

struct AgreementResult {
  struct Violation {
    std::string subject;
    std::string copula;
    std::set<std::string> expected;
  };
  bool ok = true;
  std::optional<Violation> violation;
};

struct SemanticModel {
  Intent intent;
  std::optional<std::string> subject;
  std::optional<std::string> predicate;
  std::optional<std::string> concept_;
  bool free_identifier = false;  // concept was not a listed keyword
  std::optional<ConditionSpec> condition;
  RuleKind rule;  // provenance
  Span span;
};

// Copular predicates (is/am/are ...) must agree with the subject; any other
// predicate passes. Throws UnknownPhrase when either side is not in the
// lexicon under the expected class.
AgreementResult check_agreement(std::string_view subject, std::string_view predicate, const Lexicon& lexicon,
                                const AgreementTable& table);

// Throws AgreementViolation or CompositionViolation.
SemanticModel build_model(const Statement& s, const KnowledgeBase& kb);

}  // namespace isoas
