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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace isoas {

// Terminal categories of the search grammar. Whitespace is consumed by the
// lexer and never becomes a token.
enum class TokenClass { A, B, C, W, Bt, Eq, And, Number };

inline constexpr std::array<TokenClass, 8> kAllTokenClasses = {
    TokenClass::A,  TokenClass::B,  TokenClass::C,   TokenClass::W,
    TokenClass::Bt, TokenClass::Eq, TokenClass::And, TokenClass::Number};

// Classes that may carry phrases in a lexicon file (NUMBER is structural).
inline constexpr std::array<TokenClass, 7> kPhraseClasses = {
    TokenClass::A, TokenClass::B, TokenClass::C, TokenClass::W, TokenClass::Bt, TokenClass::Eq, TokenClass::And};

// "A", "B", "C", "W", "Bt", "Eq", "And", "NUMBER".
std::string_view to_string(TokenClass c);
std::optional<TokenClass> token_class_from_string(std::string_view s);

inline constexpr std::size_t kMaxPhraseWords = 5;

// Lowercases ASCII, trims, and collapses whitespace runs to one space.
std::string normalize_phrase(std::string_view text);

class Lexicon {
 public:
  Lexicon();

  // Adds a phrase (normalized). Re-adding under the same class is a no-op;
  // adding under a different class throws DuplicatePhrase.
  void add(TokenClass c, std::string_view phrase);

  const std::vector<std::string>& phrases(TokenClass c) const;
  std::optional<TokenClass> lookup(std::string_view normalized_phrase) const;
  bool contains(TokenClass c, std::string_view phrase) const;
  std::size_t size() const { return index_.size(); }
  std::size_t longest_phrase_words() const { return longest_; }

  const std::set<TokenClass>& free_identifier_classes() const { return free_classes_; }
  void set_free_identifier_classes(std::set<TokenClass> classes) { free_classes_ = std::move(classes); }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.entries_ == b.entries_ && a.free_classes_ == b.free_classes_;
  }

 private:
  std::map<TokenClass, std::vector<std::string>> entries_;
  std::unordered_map<std::string, TokenClass> index_;
  std::set<TokenClass> free_classes_;
  std::size_t longest_ = 0;
};

Lexicon load_lexicon(std::string_view text);
std::string serialize(const Lexicon& lexicon);

// Ontology: isa forest rooted at "isoas" plus labelled, unordered relation
// edges. All names are stored lowercase.
class Ontology {
 public:
  struct Relation {
    std::string a;
    std::string b;
    std::string label;
  };

  static constexpr std::string_view kRoot = "isoas";

  bool has_node(std::string_view name) const;
  const std::set<std::string>& nodes() const { return nodes_; }
  const std::map<std::string, std::string>& parents() const { return parent_; }
  const std::vector<Relation>& relations() const { return relations_; }

  bool isa(std::string_view child, std::string_view ancestor) const;
  bool related(std::string_view a, std::string_view b) const;

 private:
  friend Ontology load_ontology(std::string_view text);

  std::string require(std::string_view name) const;

  std::set<std::string> nodes_;
  std::map<std::string, std::string> parent_;
  std::vector<Relation> relations_;
  std::set<std::pair<std::string, std::string>> related_;
};

Ontology load_ontology(std::string_view text);

inline constexpr std::array<std::string_view, 3> kCopulas = {"is", "am", "are"};

// Subject/copula pairs that agree, e.g. (i, am) and (they, are).
class AgreementTable {
 public:
  AgreementTable() = default;
  explicit AgreementTable(std::set<std::pair<std::string, std::string>> pairs);

  bool allows(std::string_view subject, std::string_view copula) const;
  std::set<std::string> copulas_for(std::string_view subject) const;
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

// Collects `agreement`-labelled relations joining a node under class A with
// one of the copulas.
AgreementTable agreement_table_from(const Ontology& ontology);

// Built-in defaults (the contents of data/lexicon.txt and data/ontology.txt).
std::string_view default_lexicon_text();
std::string_view default_ontology_text();
const Lexicon& default_lexicon();
const Ontology& default_ontology();

// Shared, immutable knowledge base consulted while modeling.
struct KnowledgeBase {
  Lexicon lexicon;
  Ontology ontology;
  AgreementTable agreement;

  static KnowledgeBase defaults();
  static KnowledgeBase from_text(std::string_view lexicon_text, std::string_view ontology_text);
};

}  // namespace isoas
