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

#include "isoas/server.hpp"

#include <httplib.h>

#include "isoas/serialize.hpp"

namespace isoas {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

constexpr const char* kIndex =
    "isoas search service\n"
    "\n"
    "POST   /api/query              {text, session?, store?}\n"
    "POST   /api/sql                {sql, session?, store?}\n"
    "GET    /api/history?session=\n"
    "GET    /api/saved              GET/DELETE /api/saved/{name}\n"
    "POST   /api/saved              {name, kind, body, overwrite?}\n"
    "POST   /api/saved/{name}/run   {bindings, session?, store?}\n"
    "GET    /api/stores             POST /api/stores {name}\n"
    "POST   /api/stores/{name}/attach | /detach\n"
    "POST   /api/ingest             {store, csv}\n";

// Malformed request bodies.
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json body_of(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw BadRequest(std::string("'") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) throw BadRequest(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void send(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), kJson);
}

json error_body(const Error& e) { return {{"error", e.to_json()}}; }

// Runs a handler, mapping malformed input to 400 and domain errors to a 200
// body carrying `error`.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const BadRequest& e) {
      send(res, {{"error", {{"code", "BadRequest"}, {"message", e.what()}}}}, 400);
    } catch (const Error& e) {
      send(res, error_body(e));
    } catch (const std::exception& e) {
      send(res, {{"error", {{"code", "Internal"}, {"message", e.what()}}}}, 500);
    }
  };
}

}  // namespace

Server::Server(Engine& engine, ServerConfig config)
    : engine_(engine), config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
  // No SO_REUSEPORT: a port already in use must fail to bind.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  routes();
}

Server::~Server() { stop(); }

void Server::routes() {
  auto& http = *http_;

  auto session_for = [this](const json& body) {
    const std::string id = optional_string(body, "session").value_or(config_.default_session);
    auto store = optional_string(body, "store");
    return store ? engine_.session(id, std::string_view(*store)) : engine_.session(id);
  };

  http.Post("/api/query", guarded([this, session_for](const httplib::Request& req, httplib::Response& res) {
              const json body = body_of(req);
              const std::string text = required_string(body, "text");
              PipelineResponse r;
              try {
                r = engine_.process(text, session_for(body));
              } catch (const Error& e) {
                // Session/store selection failed before the pipeline ran.
                r.session = optional_string(body, "session").value_or(config_.default_session);
                r.store = optional_string(body, "store").value_or("");
                r.error = StageError{Stage::input, e};
              }
              send(res, to_json(r));
            }));

  http.Post("/api/sql", guarded([this, session_for](const httplib::Request& req, httplib::Response& res) {
              const json body = body_of(req);
              const std::string sql = required_string(body, "sql");
              send(res, to_json(engine_.run_sql(sql, session_for(body))));
            }));

  http.Get("/api/history", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string session =
                 req.has_param("session") ? req.get_param_value("session") : config_.default_session;
             json arr = json::array();
             for (const auto& e : engine_.repository().history(session)) arr.push_back(to_json(e));
             send(res, arr);
           }));

  http.Get("/api/saved", guarded([this](const httplib::Request&, httplib::Response& res) {
             json arr = json::array();
             for (const auto& q : engine_.repository().list_queries()) arr.push_back(to_json(q));
             send(res, arr);
           }));

  http.Post("/api/saved", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = body_of(req);
              SavedQuery q;
              q.name = required_string(body, "name");
              auto kind = saved_kind_from_string(required_string(body, "kind"));
              if (!kind) throw BadRequest("'kind' must be 'ir' or 'sql'");
              q.kind = *kind;
              // IR bodies may be sent as JSON objects or as JSON text.
              if (q.kind == SavedKind::ir && body.contains("body") && body.at("body").is_object()) {
                q.body = body.at("body").dump();
              } else {
                q.body = required_string(body, "body");
              }
              engine_.repository().save_query(q, body.value("overwrite", false));
              send(res, to_json(engine_.repository().load_query(q.name)));
            }));

  http.Get(R"(/api/saved/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             send(res, to_json(engine_.repository().load_query(req.matches[1].str())));
           }));

  http.Delete(R"(/api/saved/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                engine_.repository().delete_query(req.matches[1].str());
                send(res, {{"deleted", req.matches[1].str()}});
              }));

  http.Post(R"(/api/saved/([^/]+)/run)",
            guarded([this, session_for](const httplib::Request& req, httplib::Response& res) {
              const json body = req.body.empty() ? json::object() : body_of(req);
              std::vector<Literal> bindings;
              if (body.contains("bindings")) {
                if (!body.at("bindings").is_array()) throw BadRequest("'bindings' must be an array");
                for (const auto& b : body.at("bindings")) {
                  if (!b.is_number() && !b.is_string()) throw BadRequest("bindings must be numbers or strings");
                  bindings.push_back(b.is_string() ? Literal::from_text(b.get<std::string>()) : literal_from_json(b));
                }
              }
              send(res, to_json(engine_.run_saved(req.matches[1].str(), bindings, session_for(body))));
            }));

  http.Get("/api/stores", guarded([this](const httplib::Request&, httplib::Response& res) {
             json arr = json::array();
             for (const auto& s : engine_.repository().list_stores()) arr.push_back(to_json(s));
             send(res, arr);
           }));

  http.Post("/api/stores", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = body_of(req);
              send(res, to_json(engine_.repository().create_store(required_string(body, "name"))));
            }));

  http.Post(R"(/api/stores/([^/]+)/(attach|detach))",
            guarded([this](const httplib::Request& req, httplib::Response& res) {
              const std::string name = req.matches[1].str();
              if (req.matches[2].str() == "attach") {
                engine_.repository().attach_store(name);
              } else {
                engine_.repository().detach_store(name);
              }
              send(res, to_json(engine_.repository().store_info(name)));
            }));

  http.Post("/api/ingest", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const json body = body_of(req);
              const std::string store = required_string(body, "store");
              const std::size_t n = engine_.repository().ingest(store, required_string(body, "csv"));
              send(res, {{"store", store}, {"count", n}});
            }));

  if (!config_.static_dir.empty()) {
    if (!http.set_mount_point("/", config_.static_dir)) {
      throw Error(ErrorCode::InvalidArgument, "cannot serve static files from '" + config_.static_dir + "'");
    }
  } else {
    http.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndex, "text/plain"); });
  }
}

void Server::start() {
  if (config_.port == 0) {
    port_ = http_->bind_to_any_port(config_.host);
  } else {
    port_ = http_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::BindFailure,
                "cannot bind " + config_.host + ":" + std::to_string(config_.port),
                {{"host", config_.host}, {"port", config_.port}});
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
}

void Server::stop() {
  if (http_) http_->stop();
  wait();
}

void Server::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace isoas
