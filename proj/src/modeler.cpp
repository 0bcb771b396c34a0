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

#include "isoas/modeler.hpp"

#include <algorithm>

#include "isoas/error.hpp"
#include "isoas/text.hpp"

namespace isoas {

std::string_view to_string(Intent i) {
  switch (i) {
    case Intent::DirectSearch: return "DirectSearch";
    case Intent::ConditionalSearch: return "ConditionalSearch";
    case Intent::SubjectOnly: return "SubjectOnly";
    case Intent::VerbOnly: return "VerbOnly";
    case Intent::ConceptOnly: return "ConceptOnly";
  }
  return "?";
}

Intent intent_for(RuleKind r) {
  switch (r) {
    case RuleKind::astmt: return Intent::SubjectOnly;
    case RuleKind::bstmt: return Intent::VerbOnly;
    case RuleKind::cstmt: return Intent::ConceptOnly;
    case RuleKind::stmt1:
    case RuleKind::stmt2: return Intent::DirectSearch;
    case RuleKind::condbt:
    case RuleKind::condeq:
    case RuleKind::condweq:
    case RuleKind::condeqbt: return Intent::ConditionalSearch;
  }
  return Intent::SubjectOnly;
}

std::string_view to_string(ConditionSpec::Kind k) {
  switch (k) {
    case ConditionSpec::Kind::Between: return "Between";
    case ConditionSpec::Kind::Compare: return "Compare";
    case ConditionSpec::Kind::CompareHole: return "CompareHole";
  }
  return "?";
}

Literal Literal::from_text(std::string_view s) {
  if (auto x = parse_number(s)) return of(*x);
  return string(std::string(s));
}

Literal Literal::of(double x) { return {format_number(x), x}; }

AgreementResult check_agreement(std::string_view subject, std::string_view predicate, const Lexicon& lexicon,
                                const AgreementTable& table) {
  const std::string subj = normalize_phrase(subject);
  const std::string pred = normalize_phrase(predicate);
  if (!lexicon.contains(TokenClass::A, subj)) {
    throw Error(ErrorCode::UnknownPhrase, "'" + subj + "' is not a subject phrase", {{"phrase", subj}});
  }
  if (!lexicon.contains(TokenClass::B, pred)) {
    throw Error(ErrorCode::UnknownPhrase, "'" + pred + "' is not a verb phrase", {{"phrase", pred}});
  }
  const std::string first = pred.substr(0, pred.find(' '));
  const bool copular = std::find(kCopulas.begin(), kCopulas.end(), first) != kCopulas.end();
  if (!copular || table.allows(subj, first)) return {};
  return {false, AgreementResult::Violation{subj, first, table.copulas_for(subj)}};
}

namespace {

nlohmann::json violation_json(const AgreementResult::Violation& v) {
  return {{"subject", v.subject}, {"copula", v.copula}, {"expected", v.expected}};
}

Literal value_of(const Token& t) {
  if (t.cls == TokenClass::Number) return Literal::from_text(t.lexeme);
  return Literal::string(t.lexeme);
}

void check_composition(const Statement& s, const Ontology& o) {
  const auto& cond = s.cond_tokens;
  for (std::size_t i = 0; i + 1 < cond.size(); ++i) {
    if (cond[i].cls != TokenClass::W) continue;
    const TokenClass next = cond[i + 1].cls;
    const char* target = next == TokenClass::Bt ? "between" : next == TokenClass::Eq ? "equal" : nullptr;
    bool ok = false;
    if (target) {
      try {
        ok = o.related("where", target);
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::CompositionViolation,
                  "the ontology does not relate 'where' with '" + std::string(target ? target : cond[i + 1].lexeme) + "'",
                  {{"from", "where"},
                   {"to", target ? target : cond[i + 1].lexeme},
                   {"offset", cond[i + 1].span.begin}});
    }
  }
}

}  // namespace

SemanticModel build_model(const Statement& s, const KnowledgeBase& kb) {
  SemanticModel m;
  m.intent = intent_for(s.rule);
  m.rule = s.rule;
  m.span = s.span;
  if (s.subject) m.subject = s.subject->lexeme;
  if (s.verb) m.predicate = s.verb->lexeme;
  if (s.concept_) {
    m.concept_ = s.concept_->lexeme;
    m.free_identifier = s.concept_->free_identifier;
  }

  if (s.subject && s.verb) {
    AgreementResult r = check_agreement(s.subject->lexeme, s.verb->lexeme, kb.lexicon, kb.agreement);
    if (!r.ok) {
      const auto& v = *r.violation;
      std::string expected;
      for (const auto& e : v.expected) expected += (expected.empty() ? "" : "/") + e;
      nlohmann::json detail = violation_json(v);
      detail["offset"] = s.verb->span.begin;
      throw Error(ErrorCode::AgreementViolation,
                  "'" + v.subject + "' does not agree with '" + v.copula + "'" +
                      (expected.empty() ? std::string() : " (expected " + expected + ")"),
                  detail);
    }
  }

  if (!is_conditional(s.rule)) return m;

  check_composition(s, kb.ontology);
  const auto& c = s.cond_tokens;
  ConditionSpec spec;
  switch (s.rule) {
    case RuleKind::condbt:  // W Bt V And V
      spec.kind = ConditionSpec::Kind::Between;
      spec.lo = value_of(c[2]);
      spec.hi = value_of(c[4]);
      break;
    case RuleKind::condeq:  // Eq V
      spec.kind = ConditionSpec::Kind::Compare;
      spec.op = c[0].lexeme;
      spec.value = value_of(c[1]);
      break;
    case RuleKind::condweq:  // W Eq
      spec.kind = ConditionSpec::Kind::CompareHole;
      spec.op = c[1].lexeme;
      break;
    case RuleKind::condeqbt:  // W Eq Bt V And V
      spec.kind = ConditionSpec::Kind::Between;
      spec.op = c[1].lexeme;
      spec.lo = value_of(c[3]);
      spec.hi = value_of(c[5]);
      break;
    default:
      break;
  }
  m.condition = std::move(spec);
  return m;
}

}  // namespace isoas
