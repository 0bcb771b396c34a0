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

#include "isoas/engine.hpp"

#include "isoas/lexer.hpp"
#include "isoas/serialize.hpp"
#include "isoas/sql.hpp"
#include "isoas/text.hpp"

namespace isoas {

namespace {

KnowledgeBase load_knowledge(const EngineOptions& o) {
  if (!o.lexicon_text && !o.ontology_text) return KnowledgeBase::defaults();
  return KnowledgeBase::from_text(o.lexicon_text ? std::string_view(*o.lexicon_text) : default_lexicon_text(),
                                  o.ontology_text ? std::string_view(*o.ontology_text) : default_ontology_text());
}

// Continuation hints for statements that parse but are not searches.
nlohmann::json fragment_hint(Intent i) {
  switch (i) {
    case Intent::SubjectOnly: return {"B"};
    case Intent::VerbOnly: return {"C"};
    case Intent::ConceptOnly: return nlohmann::json::array();
    default: return nlohmann::json::array();
  }
}

void require_attached(const Repository& repo, const std::string& store) {
  if (repo.store_info(store).state != StoreState::Attached) {
    throw Error(ErrorCode::StoreDetached, "store '" + store + "' is detached", {{"store", store}});
  }
}

void add_execution_diagnostics(PipelineResponse& r, const Execution& ex, const StructuredQuery& q) {
  if (ex.fallback) {
    std::string list;
    for (const auto& c : q.concepts) list += (list.empty() ? "'" : ", '") + c + "'";
    r.diagnostics.push_back("no records of kind " + list + "; matched record names and descriptions instead");
  }
}

}  // namespace

nlohmann::json to_json(const PipelineResponse& r) {
  nlohmann::json j = nlohmann::json::object();
  if (r.input_id) j["input_id"] = *r.input_id;
  j["session"] = r.session;
  j["store"] = r.store;
  if (r.tokens) j["tokens"] = to_json(*r.tokens);
  if (r.statements) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : *r.statements) arr.push_back(to_json(s));
    j["statements"] = arr;
    if (!r.statements->empty()) j["rule"] = std::string(to_string(r.statements->front().rule));
  }
  if (r.models) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : *r.models) arr.push_back(to_json(m));
    j["models"] = arr;
    if (!r.models->empty()) j["model"] = arr.front();
  }
  if (r.query) j["query"] = to_json(*r.query);
  if (r.sql) j["sql"] = *r.sql;
  if (r.results) j["results"] = to_json(*r.results);
  j["diagnostics"] = r.diagnostics;
  if (r.error) {
    nlohmann::json e = r.error->error.to_json();
    e["stage"] = std::string(to_string(r.error->stage));
    j["error"] = std::move(e);
  }
  return j;
}

Engine::Engine(EngineOptions options)
    : kb_(load_knowledge(options)), repo_(options.home), default_store_(std::move(options.default_store)) {}

Session Engine::session(std::string_view id, std::optional<std::string_view> store) {
  if (id.empty()) throw Error(ErrorCode::InvalidArgument, "session id must not be empty");
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    it = sessions_.emplace(std::string(id), Session{std::string(id), default_store_, now_iso8601()}).first;
  }
  if (store) {
    if (!repo_.has_store(*store)) {
      throw Error(ErrorCode::UnknownStore, "no store named '" + std::string(*store) + "'",
                  {{"store", std::string(*store)}});
    }
    it->second.active_store = std::string(*store);
  }
  return it->second;
}

PipelineResponse Engine::process(std::string_view text, const Session& session) {
  PipelineResponse r;
  r.session = session.id;
  r.store = session.active_store;

  try {
    repo_.store_info(session.active_store);  // throws UnknownStore
    require_attached(repo_, session.active_store);
  } catch (const Error& e) {
    r.error = StageError{Stage::input, e};
    return r;
  }

  Stage stage = Stage::input;
  auto log = [&](Stage s, nlohmann::json payload) {
    repo_.log_stage({*r.input_id, session.id, s, std::move(payload), {}});
  };

  try {
    r.input_id = repo_.next_input_id();
    log(Stage::input, {{"text", std::string(text)}, {"store", session.active_store}});

    stage = Stage::lexed;
    TokenStream ts = tokenize(text, kb_.lexicon);
    if (ts.empty()) throw Error(ErrorCode::EmptyInput, "no words in the request");
    r.tokens = ts;
    for (const auto& t : ts.tokens) {
      if (t.free_identifier) {
        r.diagnostics.push_back("'" + t.lexeme + "' is not a listed keyword; treated as a free identifier");
      }
    }
    log(Stage::lexed, {{"tokens", to_json(ts)}});

    stage = Stage::parsed;
    std::vector<Statement> statements = parse_many(ts);
    r.statements = statements;
    nlohmann::json stmts = nlohmann::json::array();
    for (const auto& s : statements) stmts.push_back(to_json(s));
    log(Stage::parsed, {{"statements", stmts}});

    stage = Stage::modeled;
    std::vector<SemanticModel> models;
    for (const auto& s : statements) models.push_back(build_model(s, kb_));
    r.models = models;
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : models) ms.push_back(to_json(m));
    log(Stage::modeled, {{"models", ms}});

    stage = Stage::resolved;
    std::vector<StructuredQuery> queries;
    for (const auto& m : models) {
      try {
        queries.push_back(resolve(m, session.active_store));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unresolvable) throw;
        nlohmann::json detail = e.detail();
        detail["expected"] = fragment_hint(m.intent);
        throw Error(e.code(), e.what(), detail);
      }
    }
    StructuredQuery q = integrate(queries);
    r.query = q;
    for (const auto& n : q.notes) r.diagnostics.push_back(n);
    if (q.params.empty()) r.sql = render_sql(q);
    log(Stage::resolved, {{"query", to_json(q)}, {"sql", r.sql ? nlohmann::json(*r.sql) : nlohmann::json()}});

    stage = Stage::executed;
    Execution ex = repo_.execute(session.active_store, q);
    add_execution_diagnostics(r, ex, q);
    r.results = ex.rows;
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& rec : ex.rows) ids.push_back(rec.id);
    log(Stage::executed, {{"count", ex.rows.size()}, {"ids", ids}});
  } catch (const Error& e) {
    r.error = StageError{stage, e};
  } catch (const std::exception& e) {
    r.error = StageError{stage, Error(ErrorCode::Internal, e.what())};
  }
  return r;
}

StructuredQuery Engine::compile(std::string_view text, std::string_view store) const {
  TokenStream ts = tokenize(text, kb_.lexicon);
  std::vector<StructuredQuery> queries;
  for (const auto& s : parse_many(ts)) queries.push_back(resolve(build_model(s, kb_), store));
  return integrate(queries);
}

PipelineResponse Engine::run_saved(std::string_view name, const std::vector<Literal>& bindings,
                                   const Session& session) {
  PipelineResponse r;
  r.session = session.id;
  r.store = session.active_store;
  Stage stage = Stage::resolved;
  try {
    SavedQuery saved = repo_.load_query(name);
    if (saved.kind == SavedKind::sql) {
      if (!bindings.empty()) {
        throw Error(ErrorCode::ArityMismatch,
                    "expected 0 binding(s), got " + std::to_string(bindings.size()),
                    {{"expected", 0}, {"got", bindings.size()}});
      }
      r.query = parse_sql(saved.body, session.active_store);
    } else {
      StructuredQuery q = query_from_json(nlohmann::json::parse(saved.body));
      r.query = q;
      r.query = isoas::bind(q, bindings);
      r.store = r.query->store;
    }
    for (const auto& n : r.query->notes) r.diagnostics.push_back(n);
    r.sql = render_sql(*r.query);
    stage = Stage::executed;
    Execution ex = repo_.execute(r.store, *r.query);
    add_execution_diagnostics(r, ex, *r.query);
    r.results = ex.rows;
  } catch (const Error& e) {
    r.error = StageError{stage, e};
  } catch (const std::exception& e) {
    r.error = StageError{stage, Error(ErrorCode::Internal, e.what())};
  }
  return r;
}

PipelineResponse Engine::run_sql(std::string_view sql, const Session& session) {
  PipelineResponse r;
  r.session = session.id;
  r.store = session.active_store;
  Stage stage = Stage::resolved;
  try {
    StructuredQuery q = parse_sql(sql, session.active_store);
    r.query = q;
    r.sql = render_sql(q);
    stage = Stage::executed;
    Execution ex = repo_.execute(session.active_store, q);
    add_execution_diagnostics(r, ex, q);
    r.results = ex.rows;
  } catch (const Error& e) {
    r.error = StageError{stage, e};
  }
  return r;
}

}  // namespace isoas
