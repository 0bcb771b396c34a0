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

#include <doctest.h>

#include <algorithm>
#include <string>

#include "isoas/error.hpp"
#include "isoas/modeler.hpp"
#include "support/oracles.hpp"

using namespace isoas;

namespace {

const KnowledgeBase& kb() {
  static const KnowledgeBase k = KnowledgeBase::defaults();
  return k;
}

SemanticModel model(const std::string& text) { return build_model(parse(tokenize(text, kb().lexicon)), kb()); }

ErrorCode failure(const std::string& text) {
  try {
    model(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

const std::vector<std::string> kCopularTails = {"looking for", "searching", "asking for", "seeking", "in search of"};

}  // namespace

TEST_SUITE("modeler") {

TEST_CASE("agreement examples") {
  const auto& lex = kb().lexicon;
  const auto& t = kb().agreement;
  CHECK(check_agreement("they", "are searching", lex, t).ok);
  CHECK(check_agreement("I", "am looking for", lex, t).ok);
  CHECK(check_agreement("she", "is seeking", lex, t).ok);
  CHECK(check_agreement("they", "need", lex, t).ok);

  AgreementResult bad = check_agreement("they", "is searching", lex, t);
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.violation->subject == "they");
  CHECK(bad.violation->copula == "is");
  CHECK(bad.violation->expected == std::set<std::string>{"are"});

  CHECK_THROWS_AS(check_agreement("document", "need", lex, t), Error);
  CHECK_THROWS_AS(check_agreement("they", "document", lex, t), Error);
}

TEST_CASE("agreement matrix: every subject against every copular predicate") {
  int checked = 0;
  for (const auto& subject : oracle::kSubjects) {
    for (const std::string copula : {"am", "is", "are"}) {
      for (const auto& tail : kCopularTails) {
        const std::string pred = copula + " " + tail;
        REQUIRE(std::find(oracle::kVerbs.begin(), oracle::kVerbs.end(), pred) != oracle::kVerbs.end());
        const bool expected = std::find(oracle::kAgreement.begin(), oracle::kAgreement.end(),
                                        std::pair<std::string, std::string>{subject, copula}) !=
                              oracle::kAgreement.end();
        INFO(subject << " / " << pred);
        CHECK(check_agreement(subject, pred, kb().lexicon, kb().agreement).ok == expected);
        CHECK((failure(subject + " " + pred + " music") == ErrorCode::AgreementViolation) == !expected);
        ++checked;
      }
    }
  }
  CHECK(checked == 135);
}

TEST_CASE("non-copular predicates agree with every subject") {
  for (const auto& subject : oracle::kSubjects) {
    for (const auto& verb : oracle::kVerbs) {
      const std::string first = verb.substr(0, verb.find(' '));
      if (first == "am" || first == "is" || first == "are") continue;
      CHECK(check_agreement(subject, verb, kb().lexicon, kb().agreement).ok);
    }
  }
}

TEST_CASE("intent follows the rule") {
  CHECK(intent_for(RuleKind::astmt) == Intent::SubjectOnly);
  CHECK(intent_for(RuleKind::bstmt) == Intent::VerbOnly);
  CHECK(intent_for(RuleKind::cstmt) == Intent::ConceptOnly);
  CHECK(intent_for(RuleKind::stmt1) == Intent::DirectSearch);
  CHECK(intent_for(RuleKind::stmt2) == Intent::DirectSearch);
  for (RuleKind r : {RuleKind::condbt, RuleKind::condeq, RuleKind::condweq, RuleKind::condeqbt}) {
    CHECK(intent_for(r) == Intent::ConditionalSearch);
  }
}

TEST_CASE("build_model examples") {
  SemanticModel m = model("I need document");
  CHECK(m.intent == Intent::DirectSearch);
  CHECK(m.subject == "i");
  CHECK(m.predicate == "need");
  CHECK(m.concept_ == "document");
  CHECK_FALSE(m.free_identifier);
  CHECK_FALSE(m.condition);

  SemanticModel free = model("find widgets");
  CHECK(free.concept_ == "widgets");
  CHECK(free.free_identifier);
  CHECK_FALSE(free.subject);

  SemanticModel bt = model("we need document where between 2 and 8");
  REQUIRE(bt.condition);
  CHECK(bt.condition->kind == ConditionSpec::Kind::Between);
  CHECK(bt.condition->lo == Literal::of(2));
  CHECK(bt.condition->hi == Literal::of(8));
  CHECK_FALSE(bt.condition->op);

  SemanticModel eq = model("I want cad less than 5");
  REQUIRE(eq.condition);
  CHECK(eq.condition->kind == ConditionSpec::Kind::Compare);
  CHECK(eq.condition->op == "less than");
  CHECK(eq.condition->value == Literal::of(5));

  SemanticModel hole = model("I want cad where greater than");
  REQUIRE(hole.condition);
  CHECK(hole.condition->kind == ConditionSpec::Kind::CompareHole);
  CHECK(hole.condition->op == "greater than");
  CHECK_FALSE(hole.condition->value);

  SemanticModel both = model("they are searching music where <= between 1 and 4");
  REQUIRE(both.condition);
  CHECK(both.condition->kind == ConditionSpec::Kind::Between);
  CHECK(both.condition->op == "<=");

  SemanticModel word = model("I need document with shoes");
  CHECK(word.condition->value == Literal::string("shoes"));
  CHECK_FALSE(word.condition->value->numeric());
}

TEST_CASE("fragments model without a search") {
  CHECK(model("they").intent == Intent::SubjectOnly);
  CHECK(model("need").intent == Intent::VerbOnly);
  CHECK(model("music").intent == Intent::ConceptOnly);
}

TEST_CASE("agreement violation detail") {
  try {
    model("They is searching music");
    FAIL("expected AgreementViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AgreementViolation);
    CHECK(e.detail().at("subject") == "they");
    CHECK(e.detail().at("copula") == "is");
    CHECK(e.detail().at("expected") == nlohmann::json{"are"});
    CHECK(e.detail().at("offset") == 5);
  }
}

TEST_CASE("composition is checked against the ontology") {
  std::string onto(default_ontology_text());
  const std::string edge = "rel where between composition\n";
  auto at = onto.find(edge);
  REQUIRE(at != std::string::npos);
  onto.erase(at, edge.size());
  const KnowledgeBase custom = KnowledgeBase::from_text(default_lexicon_text(), onto);

  auto run = [&](const std::string& text) { return build_model(parse(tokenize(text, custom.lexicon)), custom); };
  CHECK_NOTHROW(run("I need document < 3"));
  CHECK_NOTHROW(run("I need document less than 3"));
  try {
    run("I need document where between 1 and 3");
    FAIL("expected CompositionViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CompositionViolation);
    CHECK(e.detail().at("to") == "between");
  }
  CHECK(failure("I need document where between 1 and 3") == ErrorCode::Ok);
}

TEST_CASE("models are deterministic") {
  for (const std::string text : {"I need document", "we want cad where between 1 and 2", "you find x with 4"}) {
    SemanticModel a = model(text), b = model(text);
    CHECK(a.concept_ == b.concept_);
    CHECK(a.subject == b.subject);
    CHECK(a.rule == b.rule);
    CHECK(a.span.begin == b.span.begin);
    CHECK(a.span.end == b.span.end);
  }
}

TEST_CASE("literal canonical text") {
  CHECK(Literal::from_text("007").text == "7");
  CHECK(Literal::from_text("7").numeric());
  CHECK_FALSE(Literal::from_text("seven").numeric());
  CHECK(Literal::of(2.5).text == "2.5");
  CHECK(Literal::of(0).text == "0");
}

}  // TEST_SUITE
