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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "isoas/modeler.hpp"

namespace isoas {

enum class CompareOp { Eq, Lt, Gt, Le, Ge };

std::string_view symbol(CompareOp op);  // "=", "<", ">", "<=", ">="
std::optional<CompareOp> op_from_symbol(std::string_view s);

// Maps an Eq lexeme to its operator: word forms ("less than", "with", ...)
// and the four symbol forms.
std::optional<CompareOp> op_from_eq_lexeme(std::string_view lexeme);

struct Filter;

struct CompareLeaf {
  CompareOp op;
  Literal value;
  friend bool operator==(const CompareLeaf&, const CompareLeaf&) = default;
};

struct BetweenLeaf {
  Literal lo;
  Literal hi;
  friend bool operator==(const BetweenLeaf&, const BetweenLeaf&) = default;
};

struct HoleLeaf {
  CompareOp op;
  friend bool operator==(const HoleLeaf&, const HoleLeaf&) = default;
};

struct AndNode {
  std::vector<Filter> children;
  friend bool operator==(const AndNode&, const AndNode&);
};

struct Filter {
  std::variant<CompareLeaf, BetweenLeaf, HoleLeaf, AndNode> node;
  friend bool operator==(const Filter&, const Filter&) = default;
};

using FilterLeaf = std::variant<CompareLeaf, BetweenLeaf, HoleLeaf>;

// Leaves in depth-first order.
std::vector<FilterLeaf> leaves(const Filter& f);

struct QueryParam {
  std::string name;  // record attribute
  CompareOp op;
  friend bool operator==(const QueryParam&, const QueryParam&) = default;
};

inline constexpr std::string_view kValueAttribute = "value";

struct StructuredQuery {
  std::string store;
  std::vector<std::string> concepts;  // sorted, unique
  std::optional<Filter> filter;
  std::vector<QueryParam> params;     // one per HoleLeaf, in leaf order
  std::vector<std::string> notes;     // provenance (e.g. an Eq kept beside a range)

  friend bool operator==(const StructuredQuery&, const StructuredQuery&) = default;
};

// Throws Unresolvable for fragment intents and InvalidRange for lo > hi.
StructuredQuery resolve(const SemanticModel& m, std::string_view store);

// OR over concepts, AND over filters. Throws EmptyList / MixedStores.
StructuredQuery integrate(const std::vector<StructuredQuery>& qs);

// Throws UnboundParameter when holes remain.
std::string render_sql(const StructuredQuery& q);

// Fills holes in order; throws ArityMismatch.
StructuredQuery bind(const StructuredQuery& q, const std::vector<Literal>& values);

// Validates BetweenLeaf ordering and the params/holes correspondence.
void validate(const StructuredQuery& q);

}  // namespace isoas
