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

#include <string_view>

#include "isoas/resolver.hpp"

namespace isoas {

// Reads the restricted SQL dialect produced by render_sql:
//
//   SELECT id, name, kind, value FROM records
//   WHERE (kind = '<str>' [OR kind = '<str>']*)
//   [AND value <op> <lit> | AND value BETWEEN <lit> AND <lit>]* [;]
//
// Keywords are case-insensitive. Throws SqlSyntaxError with the byte offset
// and a description of what was expected there.
StructuredQuery parse_sql(std::string_view sql, std::string_view store);

}  // namespace isoas
