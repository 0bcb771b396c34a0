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

// JSON forms of pipeline artifacts. These are what the ledger stores, what
// the HTTP service returns, and what saved IR queries contain.

#include <nlohmann/json.hpp>

#include "isoas/lexer.hpp"
#include "isoas/modeler.hpp"
#include "isoas/parser.hpp"
#include "isoas/repository.hpp"
#include "isoas/resolver.hpp"

namespace isoas {

using nlohmann::json;

// Integral values inside the exactly-representable range serialize as JSON
// integers; everything else as doubles.
json number_json(double x);

json to_json(const Token& t);
json to_json(const TokenStream& ts);
json to_json(const Statement& s);
json to_json(const Literal& l);
json to_json(const ConditionSpec& c);
json to_json(const SemanticModel& m);
json to_json(const Filter& f);
json to_json(const StructuredQuery& q);
json to_json(const Record& r);
json to_json(const ResultSet& rows);
json to_json(const StoreInfo& s);
json to_json(const LedgerEntry& e);
json to_json(const SavedQuery& q);

// Throws InvalidArgument on shape errors.
Literal literal_from_json(const json& j);
Filter filter_from_json(const json& j);
StructuredQuery query_from_json(const json& j);
LedgerEntry ledger_entry_from_json(const json& j);
SavedQuery saved_query_from_json(const json& j);
Record record_from_json(const json& j);

}  // namespace isoas
