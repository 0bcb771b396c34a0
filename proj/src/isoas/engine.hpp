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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isoas/error.hpp"
#include "isoas/lexicon.hpp"
#include "isoas/modeler.hpp"
#include "isoas/parser.hpp"
#include "isoas/repository.hpp"
#include "isoas/resolver.hpp"

namespace isoas {

struct Session {
  std::string id;
  std::string active_store;
  std::string created;
};

struct StageError {
  Stage stage;  // the first stage that did not complete
  Error error;
};

// Output of one run. Fields are filled stage by stage; when a stage fails,
// everything before it is still present and `error` names the failure.
struct PipelineResponse {
  std::optional<std::uint64_t> input_id;
  std::string session;
  std::string store;
  std::optional<TokenStream> tokens;
  std::optional<std::vector<Statement>> statements;
  std::optional<std::vector<SemanticModel>> models;
  std::optional<StructuredQuery> query;
  std::optional<std::string> sql;
  std::optional<ResultSet> results;
  std::vector<std::string> diagnostics;
  std::optional<StageError> error;

  bool ok() const { return !error.has_value(); }
};

nlohmann::json to_json(const PipelineResponse& r);

struct EngineOptions {
  std::filesystem::path home;
  std::optional<std::string> lexicon_text;   // defaults to the built-in lexicon
  std::optional<std::string> ontology_text;  // defaults to the built-in ontology
  std::string default_store = "default";
};

// Runs input -> lex -> parse -> model -> resolve -> execute, persisting each
// completed stage to the ledger.
class Engine {
 public:
  explicit Engine(EngineOptions options);

  const KnowledgeBase& knowledge() const { return kb_; }
  Repository& repository() { return repo_; }
  const Repository& repository() const { return repo_; }

  // Returns the named session, creating it on first use. A given store
  // becomes the active one. Throws UnknownStore.
  Session session(std::string_view id, std::optional<std::string_view> store = std::nullopt);

  PipelineResponse process(std::string_view text, const Session& session);

  // Lex/parse/model/resolve without touching the ledger or executing.
  StructuredQuery compile(std::string_view text, std::string_view store) const;

  // Saved IR queries are bound and executed against their own store; saved
  // SQL runs against the session's active store.
  PipelineResponse run_saved(std::string_view name, const std::vector<Literal>& bindings, const Session& session);

  PipelineResponse run_sql(std::string_view sql, const Session& session);

 private:
  KnowledgeBase kb_;
  Repository repo_;
  std::string default_store_;
  std::mutex sessions_mutex_;
  std::map<std::string, Session, std::less<>> sessions_;
};

}  // namespace isoas
