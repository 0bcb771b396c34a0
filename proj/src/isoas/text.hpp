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

// Small ASCII/UTF-8 text helpers shared by the loaders, lexer, and SQL reader.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isoas {

// Lexer whitespace: space, tab, CR, LF, form feed.
constexpr bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f'; }
constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on '\n' (a trailing '\r' is dropped from each line).
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string> split_words(std::string_view text);

// Returns the byte offset of the first invalid sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

// Numeric literal text: -?digits(.digits)?([eE][+-]?digits)?
bool looks_numeric(std::string_view s);
std::optional<double> parse_number(std::string_view s);
// Shortest text that round-trips to `x` ("5", "1.5", "1e+20").
std::string format_number(double x);

// UTC, ISO-8601 with milliseconds.
std::string now_iso8601();

}  // namespace isoas
