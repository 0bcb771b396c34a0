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

#include "isoas/error.hpp"

namespace isoas {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::DuplicatePhrase: return "DuplicatePhrase";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownPhrase: return "UnknownPhrase";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoRuleMatches: return "NoRuleMatches";
    case ErrorCode::AgreementViolation: return "AgreementViolation";
    case ErrorCode::CompositionViolation: return "CompositionViolation";
    case ErrorCode::Unresolvable: return "Unresolvable";
    case ErrorCode::MixedStores: return "MixedStores";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::UnboundParameter: return "UnboundParameter";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::NameInUse: return "NameInUse";
    case ErrorCode::UnknownStore: return "UnknownStore";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::StoreDetached: return "StoreDetached";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::SqlSyntaxError: return "SqlSyntaxError";
    case ErrorCode::StageOrderViolation: return "StageOrderViolation";
    case ErrorCode::UnknownQuery: return "UnknownQuery";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

nlohmann::json Error::to_json() const {
  nlohmann::json j = {{"code", std::string(to_string(code_))}, {"message", what()}};
  if (!detail_.empty()) j["detail"] = detail_;
  return j;
}

}  // namespace isoas
