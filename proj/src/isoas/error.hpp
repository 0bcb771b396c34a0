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

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace isoas {

// Every failure the engine can report. The numeric values are part of the
// C API (see isoas.h) and must stay stable.
enum class ErrorCode : int {
  Ok = 0,
  // lexicon / ontology
  DuplicatePhrase = 10,
  FormatError = 11,
  CyclicHierarchy = 12,
  UnknownNode = 13,
  UnknownPhrase = 14,
  // lexer / parser
  EncodingError = 20,
  EmptyInput = 21,
  NoRuleMatches = 22,
  // modeler / resolver
  AgreementViolation = 30,
  CompositionViolation = 31,
  Unresolvable = 32,
  MixedStores = 33,
  EmptyList = 34,
  UnboundParameter = 35,
  ArityMismatch = 36,
  InvalidRange = 37,
  TypeMismatch = 38,
  // repository
  NameInUse = 40,
  UnknownStore = 41,
  WrongState = 42,
  StoreDetached = 43,
  DuplicateId = 44,
  MalformedRow = 45,
  SqlSyntaxError = 46,
  StageOrderViolation = 47,
  UnknownQuery = 48,
  IoFailure = 49,
  // service / api
  BindFailure = 60,
  InvalidArgument = 61,
  Internal = 99,
};

std::string_view to_string(ErrorCode code);

// Domain error. `detail` carries structured data (expected token classes,
// agreement violations, offsets) that front ends turn into hints.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, nlohmann::json detail = nlohmann::json::object())
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  nlohmann::json to_json() const;

 private:
  ErrorCode code_;
  nlohmann::json detail_;
};

}  // namespace isoas
