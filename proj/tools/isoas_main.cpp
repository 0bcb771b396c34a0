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

#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isoas/isoas.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Context {
  isoas_engine_t* engine = nullptr;
  std::string home;
  std::string lexicon;
  std::string ontology;
  std::string session = "cli";
  std::string store;
  bool json = false;
  bool in_repl = false;

  ~Context() { isoas_engine_close(engine); }
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

json take(char* s) {
  if (!s) return json();
  json j = json::parse(s, nullptr, false);
  isoas_string_free(s);
  return j;
}

int report_error(const json& err) {
  std::cerr << "error: " << err.value("message", "unknown error") << " [" << err.value("code", "?");
  if (err.contains("stage")) std::cerr << " at " << err.at("stage").get<std::string>();
  std::cerr << "]\n";
  return kDomainError;
}

int report_last_error() { return report_error(json::parse(isoas_last_error(), nullptr, false)); }

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void print_table(const json& rows) {
  static const std::vector<std::string> cols = {"id", "name", "kind", "value"};
  std::vector<std::size_t> width;
  for (const auto& c : cols) width.push_back(c.size());
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) width[i] = std::max(width[i], cell(r.at(cols[i])).size());
  }
  auto line = [&](auto&& value_of) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string v = value_of(i);
      out += v + std::string(width[i] - v.size() + (i + 1 < cols.size() ? 2 : 0), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    std::cout << out << "\n";
  };
  line([&](std::size_t i) { return cols[i]; });
  for (const auto& r : rows) line([&](std::size_t i) { return cell(r.at(cols[i])); });
}

// Prints a pipeline response and returns the exit code it implies.
int show_response(const Context& ctx, const json& r) {
  if (ctx.json) {
    std::cout << r.dump(2) << "\n";
    return r.contains("error") ? kDomainError : 0;
  }
  if (r.contains("sql")) std::cout << "sql: " << r.at("sql").get<std::string>() << "\n";
  for (const auto& d : r.value("diagnostics", json::array())) std::cout << "note: " << d.get<std::string>() << "\n";
  if (r.contains("results")) {
    const auto& rows = r.at("results");
    if (!rows.empty()) print_table(rows);
    std::cout << rows.size() << (rows.size() == 1 ? " record" : " records") << "\n";
  }
  if (r.contains("error")) return report_error(r.at("error"));
  return 0;
}

int show_json(const Context& ctx, const json& j, const std::function<void(const json&)>& human) {
  if (ctx.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    human(j);
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json binding_of(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) {
    if (x == static_cast<double>(static_cast<long long>(x))) return static_cast<long long>(x);
    return x;
  }
  return s;
}

int edit_in_editor(Context& ctx, const std::string& name) {
  char* out = nullptr;
  if (isoas_saved_load(ctx.engine, name.c_str(), &out) != ISOAS_OK) return report_last_error();
  const json saved = take(out);
  const std::string kind = saved.at("kind");
  const std::string editor = env_or("VISUAL", env_or("EDITOR", "vi"));

  const fs::path tmp = fs::temp_directory_path() / ("isoas-" + name + "-" + std::to_string(::getpid()) +
                                                    (kind == "sql" ? ".sql" : ".json"));
  std::string body = saved.at("body");
  if (kind == "ir") body = json::parse(body).dump(2);
  {
    std::ofstream f(tmp, std::ios::binary);
    f << body << "\n";
  }
  const int rc = std::system((editor + " '" + tmp.string() + "'").c_str());
  std::string edited = read_file(tmp.string());
  fs::remove(tmp);
  if (rc != 0) {
    std::cerr << "error: editor exited with status " << rc << "; '" << name << "' unchanged\n";
    return kDomainError;
  }
  while (!edited.empty() && (edited.back() == '\n' || edited.back() == ' ')) edited.pop_back();
  if (isoas_saved_save(ctx.engine, name.c_str(), kind.c_str(), edited.c_str(), 1) != ISOAS_OK) {
    return report_last_error();
  }
  std::cout << "saved '" << name << "'\n";
  return 0;
}

// Splits a REPL line into words, honouring single and double quotes.
std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < line.size()) {
        cur.push_back(line[++i]);
      } else {
        cur.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t') {
      if (in_word) out.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur.push_back(c);
      in_word = true;
    }
  }
  if (quote) throw CLI::ValidationError("unterminated quote");
  if (in_word) out.push_back(std::move(cur));
  return out;
}

int open_engine(Context& ctx) {
  if (ctx.engine) return 0;
  if (isoas_engine_open(ctx.home.c_str(), opt(ctx.lexicon), opt(ctx.ontology), &ctx.engine) != ISOAS_OK) {
    return report_last_error();
  }
  return 0;
}

int repl(Context& ctx);
int serve(Context& ctx, const std::string& host, int port, const std::string& console);

// Parses one command line (argv order, program name excluded) and runs it.
// The top level also accepts the global options and the repl/serve commands.
int dispatch(Context& ctx, std::vector<std::string> args, bool top_level) {
  CLI::App app{"Natural-language search over product-data records", "isoas"};
  app.fallthrough();
  app.require_subcommand(1);
  std::function<int()> action;

  if (top_level) {
    app.add_option("--home", ctx.home, "Engine home directory ($ISOAS_HOME, default ./.isoas)");
    app.add_option("--lexicon", ctx.lexicon, "Lexicon file replacing the built-in vocabulary");
    app.add_option("--ontology", ctx.ontology, "Ontology file replacing the built-in ontology");
    app.add_option("--session", ctx.session, "Session id recorded in the ledger")->capture_default_str();
    app.add_flag("--json", ctx.json, "Print raw JSON responses");
    app.set_version_flag("--version", isoas_version());
  }
  std::string store;
  auto store_opt = [&](CLI::App* sub) {
    sub->add_option("--store", store, "Store to query ($ISOAS_STORE, default 'default')");
  };
  auto store_or_default = [&] { return store.empty() ? ctx.store : store; };

  std::string text;
  auto* query = app.add_subcommand("query", "Run a natural-language query");
  query->add_option("text", text, "Request text")->required();
  store_opt(query);
  query->callback([&] {
    action = [&] {
      char* out = nullptr;
      isoas_query(ctx.engine, ctx.session.c_str(), store_or_default().c_str(), text.c_str(), &out);
      return show_response(ctx, take(out));
    };
  });

  std::string stmt;
  auto* sql = app.add_subcommand("sql", "Run a SQL statement");
  sql->add_option("statement", stmt, "SELECT statement")->required();
  store_opt(sql);
  sql->callback([&] {
    action = [&] {
      char* out = nullptr;
      isoas_sql(ctx.engine, ctx.session.c_str(), store_or_default().c_str(), stmt.c_str(), &out);
      return show_response(ctx, take(out));
    };
  });

  std::string name;
  auto* st = app.add_subcommand("store", "Create, attach, detach or list stores");
  st->require_subcommand(1);
  for (const char* verb : {"create", "attach", "detach"}) {
    auto* sub = st->add_subcommand(verb, std::string(verb) + " a store");
    sub->add_option("name", name, "Store name")->required();
    sub->callback([&, verb = std::string(verb)] {
      action = [&, verb] {
        isoas_status s = verb == "create"   ? isoas_store_create(ctx.engine, name.c_str())
                         : verb == "attach" ? isoas_store_attach(ctx.engine, name.c_str())
                                            : isoas_store_detach(ctx.engine, name.c_str());
        if (s != ISOAS_OK) return report_last_error();
        const char* past = verb == "create" ? "created" : verb == "attach" ? "attached" : "detached";
        if (ctx.json) {
          std::cout << json{{"store", name}, {"status", past}}.dump(2) << "\n";
        } else {
          std::cout << past << " store '" << name << "'\n";
        }
        return 0;
      };
    });
  }
  st->add_subcommand("list", "List stores")->callback([&] {
    action = [&] {
      char* out = nullptr;
      if (isoas_store_list(ctx.engine, &out) != ISOAS_OK) return report_last_error();
      return show_json(ctx, take(out), [](const json& stores) {
        for (const auto& s : stores) {
          std::cout << s.at("name").get<std::string>() << "  " << s.at("state").get<std::string>();
          if (s.contains("records")) std::cout << "  " << s.at("records") << " records";
          std::cout << "\n";
        }
      });
    };
  });

  std::string file;
  auto* ingest = app.add_subcommand("ingest", "Load records from CSV (id,name,kind,description,value)");
  ingest->add_option("file", file, "CSV file")->required();
  store_opt(ingest);
  ingest->callback([&] {
    action = [&] {
      const std::string csv = read_file(file);
      std::size_t n = 0;
      const std::string target = store_or_default();
      if (isoas_ingest(ctx.engine, target.c_str(), csv.c_str(), &n) != ISOAS_OK) return report_last_error();
      if (ctx.json) {
        std::cout << json{{"store", target}, {"count", n}}.dump(2) << "\n";
      } else {
        std::cout << "ingested " << n << (n == 1 ? " record" : " records") << " into '" << target << "'\n";
      }
      return 0;
    };
  });

  auto* saved = app.add_subcommand("saved", "Manage saved queries");
  saved->require_subcommand(1);
  std::string body_sql, body_ir, body_query;
  bool force = false;
  std::vector<std::string> binds;

  auto* save = saved->add_subcommand("save", "Save a query under a name");
  save->add_option("name", name, "Query name")->required();
  auto* o_sql = save->add_option("--sql", body_sql, "SQL body");
  auto* o_ir = save->add_option("--ir", body_ir, "Query IR as JSON");
  auto* o_query = save->add_option("--query", body_query, "Natural-language text compiled to IR");
  o_sql->excludes(o_ir)->excludes(o_query);
  o_ir->excludes(o_query);
  store_opt(save);
  save->add_flag("--force", force, "Replace an existing query");
  save->callback([&] {
    if (body_sql.empty() && body_ir.empty() && body_query.empty()) {
      throw CLI::ValidationError("saved save", "one of --sql, --ir or --query is required");
    }
    action = [&] {
      std::string kind = "sql";
      std::string body = body_sql;
      if (!body_ir.empty()) {
        kind = "ir";
        body = body_ir;
      } else if (!body_query.empty()) {
        char* out = nullptr;
        if (isoas_compile(ctx.engine, store_or_default().c_str(), body_query.c_str(), &out) != ISOAS_OK) {
          return report_last_error();
        }
        kind = "ir";
        body = take(out).dump();
      }
      if (isoas_saved_save(ctx.engine, name.c_str(), kind.c_str(), body.c_str(), force) != ISOAS_OK) {
        return report_last_error();
      }
      std::cout << (ctx.json ? json{{"saved", name}, {"kind", kind}}.dump(2) : "saved '" + name + "' (" + kind + ")")
                << "\n";
      return 0;
    };
  });

  auto* run = saved->add_subcommand("run", "Run a saved query");
  run->add_option("name", name, "Query name")->required();
  run->add_option("--bind", binds, "Value for the next parameter (repeatable)");
  store_opt(run);
  run->callback([&] {
    action = [&] {
      json b = json::array();
      for (const auto& v : binds) b.push_back(binding_of(v));
      char* out = nullptr;
      isoas_saved_run(ctx.engine, ctx.session.c_str(), store_or_default().c_str(), name.c_str(), b.dump().c_str(),
                      &out);
      json r = take(out);
      if (r.is_null()) return report_last_error();
      return show_response(ctx, r);
    };
  });

  saved->add_subcommand("list", "List saved queries")->callback([&] {
    action = [&] {
      char* out = nullptr;
      if (isoas_saved_list(ctx.engine, &out) != ISOAS_OK) return report_last_error();
      return show_json(ctx, take(out), [](const json& qs) {
        for (const auto& q : qs) {
          std::cout << q.at("name").get<std::string>() << "  " << q.at("kind").get<std::string>() << "  "
                    << q.at("modified").get<std::string>() << "\n";
        }
      });
    };
  });

  auto* show = saved->add_subcommand("show", "Print a saved query");
  show->add_option("name", name, "Query name")->required();
  show->callback([&] {
    action = [&] {
      char* out = nullptr;
      if (isoas_saved_load(ctx.engine, name.c_str(), &out) != ISOAS_OK) return report_last_error();
      return show_json(ctx, take(out), [](const json& q) {
        const std::string body = q.at("body");
        std::cout << (q.at("kind") == "ir" ? json::parse(body).dump(2) : body) << "\n";
      });
    };
  });

  auto* edit = saved->add_subcommand("edit", "Replace a saved query body, or open it in $EDITOR");
  edit->add_option("name", name, "Query name")->required();
  auto* e_sql = edit->add_option("--sql", body_sql, "New SQL body");
  edit->add_option("--ir", body_ir, "New IR body")->excludes(e_sql);
  edit->callback([&] {
    action = [&] {
      if (body_sql.empty() && body_ir.empty()) return edit_in_editor(ctx, name);
      char* out = nullptr;
      if (isoas_saved_load(ctx.engine, name.c_str(), &out) != ISOAS_OK) return report_last_error();
      take(out);
      const char* kind = body_sql.empty() ? "ir" : "sql";
      const std::string& body = body_sql.empty() ? body_ir : body_sql;
      if (isoas_saved_save(ctx.engine, name.c_str(), kind, body.c_str(), 1) != ISOAS_OK) return report_last_error();
      std::cout << (ctx.json ? json{{"saved", name}, {"kind", kind}}.dump(2) : "saved '" + name + "'") << "\n";
      return 0;
    };
  });

  auto* del = saved->add_subcommand("delete", "Delete a saved query");
  del->add_option("name", name, "Query name")->required();
  del->callback([&] {
    action = [&] {
      if (isoas_saved_delete(ctx.engine, name.c_str()) != ISOAS_OK) return report_last_error();
      std::cout << (ctx.json ? json{{"deleted", name}}.dump(2) : "deleted '" + name + "'") << "\n";
      return 0;
    };
  });

  app.add_subcommand("history", "Show this session's ledger")->callback([&] {
    action = [&] {
      char* out = nullptr;
      if (isoas_history(ctx.engine, ctx.session.c_str(), &out) != ISOAS_OK) return report_last_error();
      return show_json(ctx, take(out), [](const json& entries) {
        for (const auto& e : entries) {
          const std::string stage = e.at("stage");
          std::cout << "#" << e.at("input_id") << "  " << stage;
          const json& p = e.at("payload");
          if (stage == "input" && p.contains("text")) std::cout << "  \"" << p.at("text").get<std::string>() << "\"";
          if (stage == "executed" && p.contains("count")) std::cout << "  " << p.at("count") << " records";
          std::cout << "\n";
        }
      });
    };
  });

  std::string host = "127.0.0.1";
  std::string console;
  int port = 8080;
  if (top_level) {
    app.add_subcommand("repl", "Interactive session")->callback([&] { action = [&] { return repl(ctx); }; });
    auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
    srv->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
    srv->add_option("--host", host, "Listen address")->capture_default_str();
    srv->add_option("--console", console, "Directory served at /");
    srv->callback([&] { action = [&] { return serve(ctx, host, port, console); }; });
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }
  if (!action) return kUsageError;
  if (const int rc = open_engine(ctx)) return rc;
  try {
    return action();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

constexpr const char* kReplHelp =
    "Type a request in plain English to search, e.g. 'I need document'.\n"
    "Commands mirror the command line, prefixed with ':':\n"
    "  :sql \"SELECT ...\"          :store create|attach|detach|list [name]\n"
    "  :ingest FILE [--store S]   :saved save|run|list|show|edit|delete ...\n"
    "  :history                   :use STORE   (switch the active store)\n"
    "  :json                      toggle raw JSON output\n"
    "  :help  :quit\n";

int repl(Context& ctx) {
  const bool tty = ::isatty(STDIN_FILENO);
  if (tty) std::cout << "isoas " << isoas_version() << "  store '" << ctx.store << "'  (:help for commands)\n";
  int last = 0;
  for (std::string line;;) {
    if (tty) std::cout << "isoas> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();

    if (line[0] != ':') {
      char* out = nullptr;
      isoas_query(ctx.engine, ctx.session.c_str(), ctx.store.c_str(), line.c_str(), &out);
      last = show_response(ctx, take(out));
      continue;
    }
    std::vector<std::string> words;
    try {
      words = split_words(line.substr(1));
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      last = kUsageError;
      continue;
    }
    if (words.empty()) continue;
    const std::string cmd = words.front();
    if (cmd == "quit" || cmd == "q" || cmd == "exit") break;
    if (cmd == "help" || cmd == "h") {
      std::cout << kReplHelp;
      continue;
    }
    if (cmd == "json") {
      ctx.json = !ctx.json;
      std::cout << "json output " << (ctx.json ? "on" : "off") << "\n";
      continue;
    }
    if (cmd == "use") {
      if (words.size() != 2) {
        std::cerr << "usage: :use STORE\n";
        last = kUsageError;
        continue;
      }
      ctx.store = words[1];
      std::cout << "store '" << ctx.store << "'\n";
      continue;
    }
    last = dispatch(ctx, words, false);
  }
  return last;
}

int serve(Context& ctx, const std::string& host, int port, const std::string& console) {
  // Block the stop signals before the server thread starts so it inherits
  // the mask and this thread can wait for them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  isoas_server_t* server = nullptr;
  if (isoas_server_start(ctx.engine, host.c_str(), port, opt(console), &server) != ISOAS_OK) {
    return report_last_error();
  }
  std::cout << "listening on http://" << host << ":" << isoas_server_port(server) << "\n" << std::flush;
  int sig = 0;
  sigwait(&stop, &sig);
  isoas_server_stop(server);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.home = env_or("ISOAS_HOME", ".isoas");
  ctx.store = env_or("ISOAS_STORE", "default");
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(ctx, std::move(args), true);
}
