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

#include "isoas/isoas.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "isoas/engine.hpp"
#include "isoas/lexer.hpp"
#include "isoas/serialize.hpp"
#include "isoas/server.hpp"

struct isoas_engine {
  explicit isoas_engine(isoas::EngineOptions o) : engine(std::move(o)) {}
  isoas::Engine engine;
};

struct isoas_server {
  isoas_server(isoas::Engine& e, isoas::ServerConfig c) : server(e, std::move(c)) {}
  isoas::Server server;
};

namespace {

using isoas::Error;
using isoas::ErrorCode;

thread_local std::string g_last_error = "{}";

isoas_status status_of(ErrorCode c) { return static_cast<isoas_status>(static_cast<int>(c)); }

isoas_status fail(const Error& e) {
  g_last_error = e.to_json().dump();
  return status_of(e.code());
}

template <typename F>
isoas_status guarded(F&& f) {
  try {
    f();
    g_last_error = "{}";
    return ISOAS_OK;
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(Error(ErrorCode::Internal, e.what()));
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, std::string("cannot read ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

isoas::Session session_for(isoas_engine_t* e, const char* session, const char* store) {
  const std::string id = session && *session ? session : "default";
  if (store && *store) return e->engine.session(id, std::string_view(store));
  return e->engine.session(id);
}

// Responses carry their own error; surface it through the status as well.
isoas_status respond(const isoas::PipelineResponse& r, char** out_json) {
  *out_json = dup_string(to_json(r).dump());
  if (r.error) return fail(r.error->error);
  return ISOAS_OK;
}

}  // namespace

extern "C" {

const char* isoas_version(void) { return "1.0.0"; }

const char* isoas_status_name(isoas_status status) {
  static thread_local std::string name;
  name = std::string(isoas::to_string(static_cast<ErrorCode>(status)));
  return name.c_str();
}

const char* isoas_last_error(void) { return g_last_error.c_str(); }

void isoas_string_free(char* s) { std::free(s); }

isoas_status isoas_engine_open(const char* home, const char* lexicon_path, const char* ontology_path,
                               isoas_engine_t** out) {
  return guarded([&] {
    require(home, "home");
    require(out, "out");
    *out = nullptr;
    isoas::EngineOptions o;
    o.home = home;
    if (lexicon_path) o.lexicon_text = slurp(lexicon_path);
    if (ontology_path) o.ontology_text = slurp(ontology_path);
    *out = new isoas_engine(std::move(o));
  });
}

void isoas_engine_close(isoas_engine_t* engine) { delete engine; }

isoas_status isoas_query(isoas_engine_t* engine, const char* session, const char* store, const char* text,
                         char** out_json) {
  isoas::PipelineResponse r;
  isoas_status st = guarded([&] {
    require(engine, "engine");
    require(text, "text");
    require(out_json, "out_json");
    r = engine->engine.process(text, session_for(engine, session, store));
  });
  if (st != ISOAS_OK) return st;
  return respond(r, out_json);
}

isoas_status isoas_sql(isoas_engine_t* engine, const char* session, const char* store, const char* sql,
                       char** out_json) {
  isoas::PipelineResponse r;
  isoas_status st = guarded([&] {
    require(engine, "engine");
    require(sql, "sql");
    require(out_json, "out_json");
    r = engine->engine.run_sql(sql, session_for(engine, session, store));
  });
  if (st != ISOAS_OK) return st;
  return respond(r, out_json);
}

isoas_status isoas_compile(isoas_engine_t* engine, const char* store, const char* text, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(store, "store");
    require(text, "text");
    require(out_json, "out_json");
    *out_json = dup_string(isoas::to_json(engine->engine.compile(text, store)).dump());
  });
}

isoas_status isoas_tokenize(isoas_engine_t* engine, const char* text, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(text, "text");
    require(out_json, "out_json");
    *out_json = dup_string(isoas::to_json(isoas::tokenize(text, engine->engine.knowledge().lexicon)).dump());
  });
}

isoas_status isoas_store_create(isoas_engine_t* engine, const char* name) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    engine->engine.repository().create_store(name);
  });
}

isoas_status isoas_store_attach(isoas_engine_t* engine, const char* name) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    engine->engine.repository().attach_store(name);
  });
}

isoas_status isoas_store_detach(isoas_engine_t* engine, const char* name) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    engine->engine.repository().detach_store(name);
  });
}

isoas_status isoas_store_list(isoas_engine_t* engine, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : engine->engine.repository().list_stores()) arr.push_back(isoas::to_json(s));
    *out_json = dup_string(arr.dump());
  });
}

isoas_status isoas_ingest(isoas_engine_t* engine, const char* store, const char* csv, size_t* out_count) {
  return guarded([&] {
    require(engine, "engine");
    require(store, "store");
    require(csv, "csv");
    const std::size_t n = engine->engine.repository().ingest(store, csv);
    if (out_count) *out_count = n;
  });
}

isoas_status isoas_saved_save(isoas_engine_t* engine, const char* name, const char* kind, const char* body,
                              int overwrite) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    require(kind, "kind");
    require(body, "body");
    auto k = isoas::saved_kind_from_string(kind);
    if (!k) throw Error(ErrorCode::InvalidArgument, "kind must be 'ir' or 'sql'");
    isoas::SavedQuery q;
    q.name = name;
    q.kind = *k;
    q.body = body;
    engine->engine.repository().save_query(std::move(q), overwrite != 0);
  });
}

isoas_status isoas_saved_load(isoas_engine_t* engine, const char* name, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    require(out_json, "out_json");
    *out_json = dup_string(isoas::to_json(engine->engine.repository().load_query(name)).dump());
  });
}

isoas_status isoas_saved_list(isoas_engine_t* engine, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : engine->engine.repository().list_queries()) arr.push_back(isoas::to_json(q));
    *out_json = dup_string(arr.dump());
  });
}

isoas_status isoas_saved_delete(isoas_engine_t* engine, const char* name) {
  return guarded([&] {
    require(engine, "engine");
    require(name, "name");
    engine->engine.repository().delete_query(name);
  });
}

isoas_status isoas_saved_run(isoas_engine_t* engine, const char* session, const char* store, const char* name,
                             const char* bindings_json, char** out_json) {
  isoas::PipelineResponse r;
  isoas_status st = guarded([&] {
    require(engine, "engine");
    require(name, "name");
    require(out_json, "out_json");
    std::vector<isoas::Literal> bindings;
    if (bindings_json) {
      auto j = nlohmann::json::parse(bindings_json, nullptr, false);
      if (j.is_discarded() || !j.is_array()) {
        throw Error(ErrorCode::InvalidArgument, "bindings must be a JSON array");
      }
      for (const auto& b : j) {
        bindings.push_back(b.is_string() ? isoas::Literal::from_text(b.get<std::string>())
                                         : isoas::literal_from_json(b));
      }
    }
    r = engine->engine.run_saved(name, bindings, session_for(engine, session, store));
  });
  if (st != ISOAS_OK) return st;
  return respond(r, out_json);
}

isoas_status isoas_history(isoas_engine_t* engine, const char* session, char** out_json) {
  return guarded([&] {
    require(engine, "engine");
    require(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : engine->engine.repository().history(session && *session ? session : "default")) {
      arr.push_back(isoas::to_json(e));
    }
    *out_json = dup_string(arr.dump());
  });
}

isoas_status isoas_server_start(isoas_engine_t* engine, const char* host, int port, const char* static_dir,
                                isoas_server_t** out) {
  return guarded([&] {
    require(engine, "engine");
    require(out, "out");
    *out = nullptr;
    isoas::ServerConfig cfg;
    if (host) cfg.host = host;
    cfg.port = port;
    if (static_dir) cfg.static_dir = static_dir;
    auto s = std::make_unique<isoas_server>(engine->engine, cfg);
    s->server.start();
    *out = s.release();
  });
}

int isoas_server_port(const isoas_server_t* server) { return server ? server->server.port() : -1; }

void isoas_server_stop(isoas_server_t* server) {
  if (!server) return;
  server->server.stop();
  delete server;
}

}  // extern "C"
