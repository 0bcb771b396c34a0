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

#include "isoas/serialize.hpp"

#include <cmath>
#include <set>

#include "isoas/error.hpp"

namespace isoas {

namespace {

[[noreturn]] void shape_error(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, "malformed JSON: " + what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) shape_error(std::string("missing '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) shape_error(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

CompareOp op_field(const json& j) {
  auto op = op_from_symbol(string_field(j, "op"));
  if (!op) shape_error("unknown operator '" + string_field(j, "op") + "'");
  return *op;
}

json span_json(const Span& s) { return json::array({s.begin, s.end}); }

}  // namespace

json number_json(double x) {
  constexpr double kExact = 9007199254740992.0;  // 2^53
  if (std::isfinite(x) && std::trunc(x) == x && std::fabs(x) <= kExact) {
    return static_cast<std::int64_t>(x);
  }
  return x;
}

json to_json(const Token& t) {
  json j = {{"class", std::string(to_string(t.cls))},
            {"lexeme", t.lexeme},
            {"surface", t.surface},
            {"span", span_json(t.span)}};
  if (t.free_identifier) j["free"] = true;
  return j;
}

json to_json(const TokenStream& ts) {
  json arr = json::array();
  for (const auto& t : ts.tokens) arr.push_back(to_json(t));
  return arr;
}

json to_json(const Statement& s) {
  json j = {{"rule", std::string(to_string(s.rule))}, {"span", span_json(s.span)}};
  if (s.subject) j["subject"] = to_json(*s.subject);
  if (s.verb) j["verb"] = to_json(*s.verb);
  if (s.concept_) j["concept"] = to_json(*s.concept_);
  json cond = json::array();
  for (const auto& t : s.cond_tokens) cond.push_back(to_json(t));
  j["cond"] = std::move(cond);
  return j;
}

json to_json(const Literal& l) {
  if (l.numeric()) return number_json(*l.number);
  return l.text;
}

Literal literal_from_json(const json& j) {
  if (j.is_number()) return Literal::of(j.get<double>());
  if (j.is_string()) return Literal::string(j.get<std::string>());
  shape_error("literal must be a number or string");
}

json to_json(const ConditionSpec& c) {
  json j = {{"kind", std::string(to_string(c.kind))}};
  if (c.op) j["op"] = *c.op;
  if (c.lo) j["lo"] = to_json(*c.lo);
  if (c.hi) j["hi"] = to_json(*c.hi);
  if (c.value) j["value"] = to_json(*c.value);
  return j;
}

json to_json(const SemanticModel& m) {
  json j = {{"intent", std::string(to_string(m.intent))}};
  if (m.subject) j["subject"] = *m.subject;
  if (m.predicate) j["predicate"] = *m.predicate;
  if (m.concept_) j["concept"] = *m.concept_;
  if (m.free_identifier) j["free_identifier"] = true;
  if (m.condition) j["condition"] = to_json(*m.condition);
  j["provenance"] = {{"rule", std::string(to_string(m.rule))}, {"span", span_json(m.span)}};
  return j;
}

json to_json(const Filter& f) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CompareLeaf>) {
          return {{"type", "compare"}, {"op", std::string(symbol(n.op))}, {"value", to_json(n.value)}};
        } else if constexpr (std::is_same_v<T, BetweenLeaf>) {
          return {{"type", "between"}, {"lo", to_json(n.lo)}, {"hi", to_json(n.hi)}};
        } else if constexpr (std::is_same_v<T, HoleLeaf>) {
          return {{"type", "hole"}, {"op", std::string(symbol(n.op))}};
        } else {
          json children = json::array();
          for (const auto& c : n.children) children.push_back(to_json(c));
          return {{"type", "and"}, {"children", children}};
        }
      },
      f.node);
}

Filter filter_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  if (type == "compare") return Filter{CompareLeaf{op_field(j), literal_from_json(field(j, "value"))}};
  if (type == "between") {
    return Filter{BetweenLeaf{literal_from_json(field(j, "lo")), literal_from_json(field(j, "hi"))}};
  }
  if (type == "hole") return Filter{HoleLeaf{op_field(j)}};
  if (type == "and") {
    const json& children = field(j, "children");
    if (!children.is_array() || children.empty()) shape_error("'children' must be a non-empty array");
    AndNode node;
    for (const auto& c : children) node.children.push_back(filter_from_json(c));
    return Filter{std::move(node)};
  }
  shape_error("unknown filter type '" + type + "'");
}

json to_json(const StructuredQuery& q) {
  json params = json::array();
  for (const auto& p : q.params) params.push_back({{"name", p.name}, {"op", std::string(symbol(p.op))}});
  json j = {{"store", q.store},
            {"concepts", q.concepts},
            {"filter", q.filter ? to_json(*q.filter) : json(nullptr)},
            {"params", params}};
  if (!q.notes.empty()) j["notes"] = q.notes;
  return j;
}

StructuredQuery query_from_json(const json& j) {
  StructuredQuery q;
  q.store = string_field(j, "store");
  const json& concepts = field(j, "concepts");
  if (!concepts.is_array() || concepts.empty()) shape_error("'concepts' must be a non-empty array");
  std::set<std::string> unique;
  for (const auto& c : concepts) {
    if (!c.is_string() || c.get<std::string>().empty()) shape_error("concepts must be non-empty strings");
    unique.insert(c.get<std::string>());
  }
  q.concepts.assign(unique.begin(), unique.end());
  if (j.contains("filter") && !j.at("filter").is_null()) q.filter = filter_from_json(j.at("filter"));
  // Params are derived from the holes so hand-edited bodies stay consistent.
  if (q.filter) {
    for (const auto& leaf : leaves(*q.filter)) {
      if (const auto* h = std::get_if<HoleLeaf>(&leaf)) q.params.push_back({std::string(kValueAttribute), h->op});
    }
  }
  if (j.contains("notes")) {
    for (const auto& n : j.at("notes")) {
      if (!n.is_string()) shape_error("notes must be strings");
      q.notes.push_back(n.get<std::string>());
    }
  }
  validate(q);
  return q;
}

json to_json(const Record& r) {
  return {{"id", r.id}, {"name", r.name}, {"kind", r.kind}, {"description", r.description},
          {"value", number_json(r.value)}};
}

Record record_from_json(const json& j) {
  Record r;
  const json& id = field(j, "id");
  if (!id.is_number_integer()) shape_error("'id' must be an integer");
  r.id = id.get<std::int64_t>();
  r.name = string_field(j, "name");
  r.kind = string_field(j, "kind");
  r.description = string_field(j, "description");
  const json& v = field(j, "value");
  if (!v.is_number()) shape_error("'value' must be a number");
  r.value = v.get<double>();
  return r;
}

json to_json(const ResultSet& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return arr;
}

json to_json(const StoreInfo& s) {
  json j = {{"name", s.name}, {"state", std::string(to_string(s.state))}};
  if (s.size) j["records"] = *s.size;
  return j;
}

json to_json(const LedgerEntry& e) {
  return {{"input_id", e.input_id},
          {"session", e.session},
          {"stage", std::string(to_string(e.stage))},
          {"payload", e.payload},
          {"timestamp", e.timestamp}};
}

LedgerEntry ledger_entry_from_json(const json& j) {
  LedgerEntry e;
  const json& id = field(j, "input_id");
  if (!id.is_number_unsigned() && !id.is_number_integer()) shape_error("'input_id' must be an integer");
  e.input_id = id.get<std::uint64_t>();
  e.session = string_field(j, "session");
  auto stage = stage_from_string(string_field(j, "stage"));
  if (!stage) shape_error("unknown stage");
  e.stage = *stage;
  e.payload = j.value("payload", json());
  e.timestamp = j.value("timestamp", "");
  return e;
}

json to_json(const SavedQuery& q) {
  return {{"name", q.name},
          {"kind", std::string(to_string(q.kind))},
          {"body", q.body},
          {"created", q.created},
          {"modified", q.modified}};
}

SavedQuery saved_query_from_json(const json& j) {
  SavedQuery q;
  q.name = string_field(j, "name");
  auto kind = saved_kind_from_string(string_field(j, "kind"));
  if (!kind) shape_error("kind must be 'ir' or 'sql'");
  q.kind = *kind;
  q.body = string_field(j, "body");
  q.created = j.value("created", "");
  q.modified = j.value("modified", "");
  return q;
}

}  // namespace isoas
