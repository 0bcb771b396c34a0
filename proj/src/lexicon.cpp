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

#include "isoas/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "isoas/error.hpp"
#include "isoas/text.hpp"

namespace isoas {

namespace {

std::size_t word_count(std::string_view normalized) {
  if (normalized.empty()) return 0;
  return static_cast<std::size_t>(std::count(normalized.begin(), normalized.end(), ' ')) + 1;
}

std::string_view file_class_name(TokenClass c) {
  switch (c) {
    case TokenClass::A: return "A";
    case TokenClass::B: return "B";
    case TokenClass::C: return "C";
    case TokenClass::W: return "W";
    case TokenClass::Bt: return "BT";
    case TokenClass::Eq: return "EQ";
    case TokenClass::And: return "AND";
    case TokenClass::Number: break;
  }
  return "NUMBER";
}

Error format_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::FormatError, "line " + std::to_string(line) + ": " + what, {{"line", line}});
}

}  // namespace

std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::A: return "A";
    case TokenClass::B: return "B";
    case TokenClass::C: return "C";
    case TokenClass::W: return "W";
    case TokenClass::Bt: return "Bt";
    case TokenClass::Eq: return "Eq";
    case TokenClass::And: return "And";
    case TokenClass::Number: return "NUMBER";
  }
  return "?";
}

std::optional<TokenClass> token_class_from_string(std::string_view s) {
  const std::string lower = ascii_lower(s);
  for (TokenClass c : kAllTokenClasses) {
    if (ascii_lower(to_string(c)) == lower) return c;
  }
  return std::nullopt;
}

std::string normalize_phrase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    if (is_space(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

Lexicon::Lexicon() : free_classes_{TokenClass::C} {
  for (TokenClass c : kPhraseClasses) entries_[c];
}

void Lexicon::add(TokenClass c, std::string_view phrase) {
  if (c == TokenClass::Number) {
    throw Error(ErrorCode::FormatError, "NUMBER cannot carry phrases");
  }
  std::string norm = normalize_phrase(phrase);
  const std::size_t words = word_count(norm);
  if (words == 0) throw Error(ErrorCode::FormatError, "empty phrase");
  if (words > kMaxPhraseWords) {
    throw Error(ErrorCode::FormatError, "phrase longer than 5 words: '" + norm + "'");
  }
  if (auto it = index_.find(norm); it != index_.end()) {
    if (it->second == c) return;
    throw Error(ErrorCode::DuplicatePhrase,
                "phrase '" + norm + "' listed under both " + std::string(to_string(it->second)) + " and " +
                    std::string(to_string(c)),
                {{"phrase", norm},
                 {"classes", {std::string(to_string(it->second)), std::string(to_string(c))}}});
  }
  index_.emplace(norm, c);
  entries_[c].push_back(std::move(norm));
  longest_ = std::max(longest_, words);
}

const std::vector<std::string>& Lexicon::phrases(TokenClass c) const {
  static const std::vector<std::string> kNone;
  auto it = entries_.find(c);
  return it == entries_.end() ? kNone : it->second;
}

std::optional<TokenClass> Lexicon::lookup(std::string_view normalized_phrase) const {
  auto it = index_.find(std::string(normalized_phrase));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Lexicon::contains(TokenClass c, std::string_view phrase) const {
  auto found = lookup(normalize_phrase(phrase));
  return found && *found == c;
}

Lexicon load_lexicon(std::string_view text) {
  Lexicon lex;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw format_error(line_no, "expected 'CLASS: phrase'");
    const std::string cls = ascii_upper(trim(line.substr(0, colon)));
    const std::string_view phrase = trim(line.substr(colon + 1));

    std::optional<TokenClass> c;
    for (TokenClass k : kPhraseClasses) {
      if (file_class_name(k) == cls) c = k;
    }
    if (!c) throw format_error(line_no, "unknown class '" + cls + "'");
    if (phrase.empty()) throw format_error(line_no, "empty phrase");
    try {
      lex.add(*c, phrase);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FormatError) throw format_error(line_no, e.what());
      nlohmann::json detail = e.detail();
      detail["line"] = line_no;
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what(), detail);
    }
  }
  return lex;
}

std::string serialize(const Lexicon& lexicon) {
  std::ostringstream out;
  for (TokenClass c : kPhraseClasses) {
    for (const auto& p : lexicon.phrases(c)) out << file_class_name(c) << ": " << p << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

bool Ontology::has_node(std::string_view name) const { return nodes_.count(ascii_lower(name)) > 0; }

std::string Ontology::require(std::string_view name) const {
  std::string key = ascii_lower(name);
  if (!nodes_.count(key)) {
    throw Error(ErrorCode::UnknownNode, "unknown ontology node '" + std::string(name) + "'",
                {{"node", std::string(name)}});
  }
  return key;
}

bool Ontology::isa(std::string_view child, std::string_view ancestor) const {
  std::string cur = require(child);
  const std::string target = require(ancestor);
  // Loaded forests are acyclic, so this walk terminates at the root.
  while (true) {
    if (cur == target) return true;
    auto it = parent_.find(cur);
    if (it == parent_.end()) return false;
    cur = it->second;
  }
}

bool Ontology::related(std::string_view a, std::string_view b) const {
  return related_.count({require(a), require(b)}) > 0;
}

Ontology load_ontology(std::string_view text) {
  struct IsaLine {
    std::string child, parent;
    std::size_t line;
  };
  struct RelLine {
    Ontology::Relation rel;
    std::size_t line;
  };
  std::vector<IsaLine> isa_lines;
  std::vector<RelLine> rel_lines;

  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> f = split_words(line);
    if (f.empty()) continue;
    const std::string kw = ascii_lower(f[0]);
    if (kw == "isa" && f.size() == 3) {
      isa_lines.push_back({ascii_lower(f[1]), ascii_lower(f[2]), line_no});
    } else if (kw == "rel" && f.size() == 4) {
      rel_lines.push_back({{ascii_lower(f[1]), ascii_lower(f[2]), ascii_lower(f[3])}, line_no});
    } else {
      throw format_error(line_no, "expected 'isa <child> <parent>' or 'rel <a> <b> <label>'");
    }
  }

  Ontology o;
  o.nodes_.insert(std::string(Ontology::kRoot));
  for (const auto& l : isa_lines) {
    if (l.child == Ontology::kRoot) throw format_error(l.line, "the root cannot have a parent");
    auto [it, inserted] = o.parent_.emplace(l.child, l.parent);
    if (!inserted && it->second != l.parent) {
      throw format_error(l.line, "'" + l.child + "' already has parent '" + it->second + "'");
    }
    o.nodes_.insert(l.child);
  }

  auto unknown = [](const std::string& name, std::size_t line) {
    return Error(ErrorCode::UnknownNode,
                 "line " + std::to_string(line) + ": undeclared node '" + name + "'",
                 {{"node", name}, {"line", line}});
  };

  for (const auto& [child, parent] : o.parent_) {
    std::set<std::string> seen{child};
    std::string cur = parent;
    while (o.parent_.count(cur)) {
      if (!seen.insert(cur).second) {
        throw Error(ErrorCode::CyclicHierarchy, "isa cycle through '" + cur + "'", {{"node", cur}});
      }
      cur = o.parent_.at(cur);
    }
  }
  for (const auto& l : isa_lines) {
    if (!o.nodes_.count(l.parent)) throw unknown(l.parent, l.line);
  }
  for (auto& l : rel_lines) {
    for (const auto* end : {&l.rel.a, &l.rel.b}) {
      if (!o.nodes_.count(*end)) throw unknown(*end, l.line);
    }
    o.related_.insert({l.rel.a, l.rel.b});
    o.related_.insert({l.rel.b, l.rel.a});
    o.relations_.push_back(std::move(l.rel));
  }
  return o;
}

// ---------------------------------------------------------------------------

AgreementTable::AgreementTable(std::set<std::pair<std::string, std::string>> pairs) : pairs_(std::move(pairs)) {}

bool AgreementTable::allows(std::string_view subject, std::string_view copula) const {
  return pairs_.count({ascii_lower(subject), ascii_lower(copula)}) > 0;
}

std::set<std::string> AgreementTable::copulas_for(std::string_view subject) const {
  std::set<std::string> out;
  const std::string s = ascii_lower(subject);
  for (const auto& [subj, cop] : pairs_) {
    if (subj == s) out.insert(cop);
  }
  return out;
}

AgreementTable agreement_table_from(const Ontology& ontology) {
  auto is_copula = [](const std::string& n) {
    return std::find(kCopulas.begin(), kCopulas.end(), n) != kCopulas.end();
  };
  auto is_subject = [&](const std::string& n) { return ontology.has_node("a") && ontology.isa(n, "a") && n != "a"; };

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& r : ontology.relations()) {
    if (r.label != "agreement") continue;
    if (is_subject(r.a) && is_copula(r.b)) pairs.insert({r.a, r.b});
    if (is_subject(r.b) && is_copula(r.a)) pairs.insert({r.b, r.a});
  }
  return AgreementTable(std::move(pairs));
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = load_lexicon(default_lexicon_text());
  return lex;
}

const Ontology& default_ontology() {
  static const Ontology o = load_ontology(default_ontology_text());
  return o;
}

KnowledgeBase KnowledgeBase::defaults() {
  return {default_lexicon(), default_ontology(), agreement_table_from(default_ontology())};
}

KnowledgeBase KnowledgeBase::from_text(std::string_view lexicon_text, std::string_view ontology_text) {
  KnowledgeBase kb{load_lexicon(lexicon_text), load_ontology(ontology_text), {}};
  kb.agreement = agreement_table_from(kb.ontology);
  return kb;
}

}  // namespace isoas
