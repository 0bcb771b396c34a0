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

#include <random>

#include "isoas/error.hpp"
#include "isoas/lexicon.hpp"
#include "support/oracles.hpp"

using namespace isoas;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

}  // namespace

TEST_SUITE("lexicon") {

TEST_CASE("load_lexicon reads CLASS: phrase lines") {
  Lexicon lex = load_lexicon("B: am looking for\n");
  CHECK(lex.contains(TokenClass::B, "am looking for"));
  CHECK(lex.lookup("am looking for") == TokenClass::B);
}

TEST_CASE("empty lexicon file has empty classes") {
  Lexicon lex = load_lexicon("");
  for (TokenClass c : kPhraseClasses) CHECK(lex.phrases(c).empty());
  CHECK(lex.size() == 0);
}

TEST_CASE("a phrase under two classes is rejected") {
  CHECK(code_of([] { load_lexicon("B: need\nC: need\n"); }) == ErrorCode::DuplicatePhrase);
}

TEST_CASE("case, comments and spacing are normalized") {
  Lexicon lex = load_lexicon("# header\n\n  eq :  Less   THAN  # trailing\nbt: Between\n");
  CHECK(lex.phrases(TokenClass::Eq) == std::vector<std::string>{"less than"});
  CHECK(lex.phrases(TokenClass::Bt) == std::vector<std::string>{"between"});
}

TEST_CASE("malformed lines report their line number") {
  try {
    load_lexicon("A: i\nthis line has no colon\n");
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
    CHECK(e.detail().at("line") == 2);
  }
  CHECK(code_of([] { load_lexicon("X: foo\n"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { load_lexicon("NUMBER: 5\n"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { load_lexicon("C:\n"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { load_lexicon("C: one two three four five six\n"); }) == ErrorCode::FormatError);
}

TEST_CASE("default lexicon holds the reference lists plus two spelling aliases") {
  const Lexicon& lex = default_lexicon();
  CHECK(lex.phrases(TokenClass::A).size() == 9);
  CHECK(lex.phrases(TokenClass::B).size() == 37 + 1);
  CHECK(lex.phrases(TokenClass::C).size() == 51 + 1);
  CHECK(lex.phrases(TokenClass::W).size() == 1);
  CHECK(lex.phrases(TokenClass::Bt).size() == 1);
  CHECK(lex.phrases(TokenClass::Eq).size() == 10);
  CHECK(lex.phrases(TokenClass::And).size() == 1);

  for (const auto& [cls, list] : oracle::kLiteralClasses) {
    for (const auto& p : *list) {
      INFO(cls << ": " << p);
      auto found = lex.lookup(p);
      REQUIRE(found);
      CHECK(std::string(to_string(*found)) == cls);
    }
  }
  CHECK(lex.contains(TokenClass::B, "searches"));
  CHECK(lex.contains(TokenClass::B, "seraches"));
  CHECK(lex.contains(TokenClass::C, "city"));
  CHECK(lex.contains(TokenClass::C, "sity"));
  CHECK(lex.free_identifier_classes() == std::set<TokenClass>{TokenClass::C});
  CHECK(lex.longest_phrase_words() == 5);
}

TEST_CASE("serialize/load round-trips random lexicons") {
  std::mt19937 rng(7);
  const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon lex;
    std::uniform_int_distribution<int> n_phrases(0, 20), n_words(1, 5), word(0, static_cast<int>(pool.size()) - 1),
        cls(0, static_cast<int>(kPhraseClasses.size()) - 1);
    const int n = n_phrases(rng);
    for (int i = 0; i < n; ++i) {
      std::string p;
      for (int w = n_words(rng); w > 0; --w) p += (p.empty() ? "" : " ") + pool[word(rng)];
      try {
        lex.add(kPhraseClasses[cls(rng)], p);
      } catch (const Error&) {
        // collided with another class; skip
      }
    }
    CHECK(load_lexicon(serialize(lex)) == lex);
  }
  CHECK(load_lexicon(serialize(default_lexicon())) == default_lexicon());
}

TEST_CASE("load_ontology builds isa chains") {
  Ontology o = load_ontology("isa A ISOAS\nisa B ISOAS\nisa D B\nisa looking D\n");
  CHECK(o.isa("A", "ISOAS"));
  CHECK(o.isa("looking", "B"));
  CHECK(o.isa("looking", "D"));
  CHECK_FALSE(o.isa("A", "B"));
  CHECK(o.parents().at("looking") == "d");
}

TEST_CASE("ontology errors") {
  CHECK(code_of([] { load_ontology("isa X Y\nisa Y X\n"); }) == ErrorCode::CyclicHierarchy);
  CHECK(code_of([] { load_ontology("isa X X\n"); }) == ErrorCode::CyclicHierarchy);
  CHECK(code_of([] { load_ontology("isa A Missing\n"); }) == ErrorCode::UnknownNode);
  CHECK(code_of([] { load_ontology("isa A ISOAS\nrel A ghost label\n"); }) == ErrorCode::UnknownNode);
  CHECK(code_of([] { load_ontology("isa A ISOAS\nisa B ISOAS\nisa K A\nisa K B\n"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { load_ontology("rel only two\n"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { load_ontology("isa ISOAS A\nisa A ISOAS\n"); }) == ErrorCode::FormatError);
}

TEST_CASE("default ontology: isa and related") {
  const Ontology& o = default_ontology();
  CHECK(o.isa("looking", "B"));
  CHECK(o.isa("K", "K"));
  CHECK_FALSE(o.isa("K", "A"));
  CHECK(o.isa("K", "C"));
  CHECK(o.related("where", "between"));
  CHECK(o.related("between", "where"));
  CHECK(o.related("need", "K"));
  CHECK(o.related("I", "am"));
  CHECK_FALSE(o.related("I", "are"));
  CHECK(code_of([&] { o.isa("nosuch", "A"); }) == ErrorCode::UnknownNode);
  CHECK(code_of([&] { o.related("where", "nosuch"); }) == ErrorCode::UnknownNode);
  // every node reaches the root
  for (const auto& n : o.nodes()) CHECK(o.isa(n, "isoas"));
}

TEST_CASE("isa is a partial order on random forests") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> size(1, 25);
    const int n = size(rng);
    std::string text;
    std::vector<std::string> names{"isoas"};
    for (int i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
      const std::string name = "n" + std::to_string(i);
      text += "isa " + name + " " + names[pick(rng)] + "\n";
      names.push_back(name);
    }
    Ontology o = load_ontology(text);
    for (const auto& a : names) {
      CHECK(o.isa(a, a));
      for (const auto& b : names) {
        if (a != b && o.isa(a, b)) CHECK_FALSE(o.isa(b, a));
        for (const auto& c : names) {
          if (o.isa(a, b) && o.isa(b, c)) CHECK(o.isa(a, c));
        }
      }
    }
  }
}

TEST_CASE("default agreement table is the nine subject/copula pairs") {
  const AgreementTable t = agreement_table_from(default_ontology());
  std::set<std::pair<std::string, std::string>> expected(oracle::kAgreement.begin(), oracle::kAgreement.end());
  CHECK(t.pairs() == expected);
  CHECK(t.copulas_for("they") == std::set<std::string>{"are"});
}

}  // TEST_SUITE
