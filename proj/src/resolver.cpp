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

#include "isoas/resolver.hpp"

#include <algorithm>
#include <set>

#include "isoas/error.hpp"

namespace isoas {

bool operator==(const AndNode& a, const AndNode& b) { return a.children == b.children; }

std::string_view symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

std::optional<CompareOp> op_from_symbol(std::string_view s) {
  for (CompareOp op : {CompareOp::Eq, CompareOp::Lt, CompareOp::Gt, CompareOp::Le, CompareOp::Ge}) {
    if (symbol(op) == s) return op;
  }
  return std::nullopt;
}

std::optional<CompareOp> op_from_eq_lexeme(std::string_view lexeme) {
  if (lexeme == "equal to" || lexeme == "with") return CompareOp::Eq;
  if (lexeme == "less than") return CompareOp::Lt;
  if (lexeme == "greater than") return CompareOp::Gt;
  if (lexeme == "less than and equal to") return CompareOp::Le;
  if (lexeme == "greater than and equal to") return CompareOp::Ge;
  if (lexeme == "=") return std::nullopt;  // not an Eq lexeme
  return op_from_symbol(lexeme);
}

namespace {

void collect(const Filter& f, std::vector<FilterLeaf>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AndNode>) {
          for (const auto& c : n.children) collect(c, out);
        } else {
          out.push_back(n);
        }
      },
      f.node);
}

CompareOp require_op(const std::optional<std::string>& lexeme) {
  auto op = lexeme ? op_from_eq_lexeme(*lexeme) : std::nullopt;
  if (!op) throw Error(ErrorCode::Unresolvable, "unknown comparison '" + lexeme.value_or("") + "'");
  return *op;
}

std::string sql_literal(const Literal& l) {
  if (l.numeric()) return l.text;
  std::string out = "'";
  for (char c : l.text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

Filter and_of(std::vector<Filter> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return Filter{AndNode{std::move(parts)}};
}

Filter fill_holes(const Filter& f, const std::vector<Literal>& values, std::size_t& next) {
  return std::visit(
      [&](const auto& n) -> Filter {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AndNode>) {
          AndNode out;
          for (const auto& c : n.children) out.children.push_back(fill_holes(c, values, next));
          return Filter{std::move(out)};
        } else if constexpr (std::is_same_v<T, HoleLeaf>) {
          return Filter{CompareLeaf{n.op, values[next++]}};
        } else {
          return Filter{n};
        }
      },
      f.node);
}

}  // namespace

std::vector<FilterLeaf> leaves(const Filter& f) {
  std::vector<FilterLeaf> out;
  collect(f, out);
  return out;
}

void validate(const StructuredQuery& q) {
  std::vector<QueryParam> holes;
  if (q.filter) {
    for (const auto& leaf : leaves(*q.filter)) {
      if (const auto* b = std::get_if<BetweenLeaf>(&leaf)) {
        if (b->lo.numeric() && b->hi.numeric() && *b->lo.number > *b->hi.number) {
          throw Error(ErrorCode::InvalidRange, "range " + b->lo.text + " .. " + b->hi.text + " is empty",
                      {{"lo", b->lo.text}, {"hi", b->hi.text}});
        }
      } else if (const auto* h = std::get_if<HoleLeaf>(&leaf)) {
        holes.push_back({std::string(kValueAttribute), h->op});
      }
    }
  }
  if (holes != q.params) {
    throw Error(ErrorCode::InvalidArgument, "query params do not match the filter's holes");
  }
}

StructuredQuery resolve(const SemanticModel& m, std::string_view store) {
  if (m.intent != Intent::DirectSearch && m.intent != Intent::ConditionalSearch) {
    throw Error(ErrorCode::Unresolvable,
                "a " + std::string(to_string(m.intent)) + " fragment is not a complete search request",
                {{"intent", std::string(to_string(m.intent))}, {"rule", std::string(to_string(m.rule))}});
  }
  StructuredQuery q;
  q.store = std::string(store);
  if (m.concept_) q.concepts.push_back(*m.concept_);

  if (m.condition) {
    const ConditionSpec& c = *m.condition;
    switch (c.kind) {
      case ConditionSpec::Kind::Between:
        q.filter = Filter{BetweenLeaf{*c.lo, *c.hi}};
        if (c.op) {
          q.notes.push_back("comparison '" + *c.op + "' (" + std::string(symbol(require_op(c.op))) +
                            ") accompanies the range; the range is applied");
        }
        break;
      case ConditionSpec::Kind::Compare:
        q.filter = Filter{CompareLeaf{require_op(c.op), *c.value}};
        break;
      case ConditionSpec::Kind::CompareHole: {
        const CompareOp op = require_op(c.op);
        q.filter = Filter{HoleLeaf{op}};
        q.params.push_back({std::string(kValueAttribute), op});
        break;
      }
    }
  }
  validate(q);
  return q;
}

StructuredQuery integrate(const std::vector<StructuredQuery>& qs) {
  if (qs.empty()) throw Error(ErrorCode::EmptyList, "no queries to integrate");
  if (qs.size() == 1) return qs.front();

  StructuredQuery out;
  out.store = qs.front().store;
  std::set<std::string> concepts;
  std::vector<Filter> filters;
  for (const auto& q : qs) {
    if (q.store != out.store) {
      throw Error(ErrorCode::MixedStores, "cannot integrate queries over '" + out.store + "' and '" + q.store + "'",
                  {{"stores", {out.store, q.store}}});
    }
    concepts.insert(q.concepts.begin(), q.concepts.end());
    if (q.filter) filters.push_back(*q.filter);
    out.params.insert(out.params.end(), q.params.begin(), q.params.end());
    out.notes.insert(out.notes.end(), q.notes.begin(), q.notes.end());
  }
  out.concepts.assign(concepts.begin(), concepts.end());
  if (!filters.empty()) out.filter = and_of(std::move(filters));
  return out;
}

std::string render_sql(const StructuredQuery& q) {
  if (!q.params.empty()) {
    nlohmann::json holes = nlohmann::json::array();
    for (const auto& p : q.params) holes.push_back({{"name", p.name}, {"op", std::string(symbol(p.op))}});
    throw Error(ErrorCode::UnboundParameter, std::to_string(q.params.size()) + " unbound parameter(s)",
                {{"params", holes}});
  }
  std::vector<std::string> concepts = q.concepts;
  std::sort(concepts.begin(), concepts.end());
  concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());

  std::string sql = "SELECT id, name, kind, value FROM records WHERE (";
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (i) sql += " OR ";
    sql += "kind = " + sql_literal(Literal::string(concepts[i]));
  }
  sql += ")";
  if (q.filter) {
    for (const auto& leaf : leaves(*q.filter)) {
      if (const auto* c = std::get_if<CompareLeaf>(&leaf)) {
        sql += " AND value " + std::string(symbol(c->op)) + " " + sql_literal(c->value);
      } else if (const auto* b = std::get_if<BetweenLeaf>(&leaf)) {
        sql += " AND value BETWEEN " + sql_literal(b->lo) + " AND " + sql_literal(b->hi);
      }
    }
  }
  return sql;
}

StructuredQuery bind(const StructuredQuery& q, const std::vector<Literal>& values) {
  if (values.size() != q.params.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "expected " + std::to_string(q.params.size()) + " binding(s), got " + std::to_string(values.size()),
                {{"expected", q.params.size()}, {"got", values.size()}});
  }
  StructuredQuery out = q;
  if (q.filter) {
    std::size_t next = 0;
    out.filter = fill_holes(*q.filter, values, next);
  }
  out.params.clear();
  validate(out);
  return out;
}

}  // namespace isoas
