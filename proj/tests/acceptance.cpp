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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isoas/engine.hpp"
#include "isoas/serialize.hpp"
#include "isoas/sql.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace isoas;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::string summary;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

// ---------------------------------------------------------------------------

Outcome grammar_conformance() {
  Outcome o;
  std::mt19937 rng(20260101);
  const Lexicon& lex = default_lexicon();
  int cases = 0;
  int wrong = 0;
  for (int round = 0; round < 100; ++round) {
    for (RuleKind rule : kAllRules) {
      const std::string s = gen::sentence(rule, rng);
      ++cases;
      std::string got;
      try {
        got = std::string(to_string(parse(tokenize(s, lex)).rule));
      } catch (const Error& e) {
        got = e.what();
      }
      if (got != to_string(rule)) ++wrong;
      o.expect(got == to_string(rule), "'" + s + "' -> " + got);
    }
  }
  o.summary = std::to_string(cases) + " sentences, " + std::to_string(wrong) + " misclassified";
  return o;
}

Outcome lexeme_coverage() {
  Outcome o;
  const Lexicon& lex = default_lexicon();
  int phrases = 0;
  for (const auto& [cls, list] : oracle::kLiteralClasses) {
    for (const auto& phrase : *list) {
      ++phrases;
      const TokenStream ts = tokenize(phrase, lex);
      const bool ok = ts.tokens.size() == 1 && to_string(ts.tokens[0].cls) == cls && ts.tokens[0].lexeme == phrase &&
                      !ts.tokens[0].free_identifier;
      o.expect(ok, "'" + phrase + "' as " + cls);
    }
  }
  const std::vector<std::pair<std::string, std::string>> stress = {{"less than and equal to", "Eq"},
                                                                   {"is in search of", "B"},
                                                                   {"am looking for", "B"},
                                                                   {"train station", "C"},
                                                                   {"look about", "B"}};
  for (const auto& [phrase, cls] : stress) {
    const TokenStream ts = tokenize(phrase, lex);
    o.expect(ts.tokens.size() == 1 && to_string(ts.tokens[0].cls) == cls, "stress case '" + phrase + "'");
  }
  o.summary = std::to_string(phrases) + " listed phrases + " + std::to_string(stress.size()) + " stress cases";
  return o;
}

Outcome agreement_matrix() {
  Outcome o;
  const KnowledgeBase kb = KnowledgeBase::defaults();
  const std::vector<std::string> tails = {"looking for", "searching", "asking for", "seeking", "in search of"};
  int assertions = 0;
  int deviations = 0;
  for (const auto& subject : oracle::kSubjects) {
    for (const std::string copula : {"am", "is", "are"}) {
      for (const auto& tail : tails) {
        const bool expected = std::find(oracle::kAgreement.begin(), oracle::kAgreement.end(),
                                        std::pair<std::string, std::string>{subject, copula}) !=
                              oracle::kAgreement.end();
        const bool got = check_agreement(subject, copula + " " + tail, kb.lexicon, kb.agreement).ok;
        ++assertions;
        if (got != expected) ++deviations;
        o.expect(got == expected, subject + " / " + copula + " " + tail);
      }
    }
  }
  o.expect(assertions == 135, "grid size " + std::to_string(assertions));
  o.summary = std::to_string(assertions) + " assertions, " + std::to_string(deviations) + " deviations";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937 rng(424242);
  int queries = 0;
  for (int fixture = 0; fixture < 3; ++fixture) {
    Repository repo(oracle::temp_home("accept-oracle"));
    repo.create_store("s");
    const auto rows = oracle::random_fixture(rng, 100);
    repo.ingest("s", oracle::csv_of(rows));
    for (int i = 0; i < 100; ++i) {
      const gen::RandomQuery rq = gen::random_query(rng, "s");
      ++queries;
      const Execution direct = repo.execute("s", rq.query);
      std::vector<std::int64_t> ids;
      for (const auto& r : direct.rows) ids.push_back(r.id);
      const std::string sql = render_sql(rq.query);
      o.expect(ids == oracle::scan(rows, rq.concepts, rq.conds), "scan mismatch: " + sql);
      o.expect(to_json(repo.execute_sql("s", sql).rows).dump() == to_json(direct.rows).dump(),
               "SQL round trip mismatch: " + sql);
    }
    fs::remove_all(repo.home());
  }
  o.summary = std::to_string(queries) + " queries over 100-record fixtures";
  return o;
}

// ---------------------------------------------------------------------------

struct Run {
  int status;
  std::string out;
};

std::string quoted(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q.push_back(c);
    }
  }
  return q + "'";
}

class CliSession {
 public:
  explicit CliSession(fs::path home) : home_(std::move(home)) {}

  Run operator()(const std::vector<std::string>& args, const std::string& env = "") const {
    std::string cmd = "ISOAS_HOME=" + quoted(home_.string()) + " " + env + " " + quoted(ISOAS_CLI_PATH);
    for (const auto& a : args) cmd += " " + quoted(a);
    cmd += " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, "popen failed"};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int rc = pclose(p);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
  }

  const fs::path& home() const { return home_; }

 private:
  fs::path home_;
};

bool has(const Run& r, const std::string& needle) { return r.out.find(needle) != std::string::npos; }

Outcome table_reproduction(std::vector<std::string>& report) {
  Outcome o;
  const fs::path home = oracle::temp_home("accept-cli");
  const CliSession cli(home);
  {
    std::ofstream(home / "products.csv") << oracle::csv_of(oracle::kSmallFixture);
    std::ofstream(home / "archive.csv") << "id,name,kind,description,value\n"
                                           "10,old spec,document,\"archived specification\",1\n"
                                           "11,old drawing,cad,\"archived drawing\",2\n";
  }
  cli({"store", "create", "default"});
  cli({"ingest", (home / "products.csv").string(), "--store", "default"});

  int passed = 0;
  auto row = [&](const std::string& feature, bool ok, const Run& evidence) {
    report.push_back(std::string(ok ? "  [x] " : "  [ ] ") + feature);
    if (ok) {
      ++passed;
    } else {
      report.push_back("      output: " + evidence.out.substr(0, 300));
    }
    o.expect(ok, feature);
  };

  Run nl = cli({"query", "I need document"});
  row("natural-language search", nl.status == 0 && has(nl, "2 records") && has(nl, "manual"), nl);

  Run created = cli({"store", "create", "archive"});
  Run listed = cli({"store", "list"});
  row("dynamic store creation", created.status == 0 && has(listed, "archive  attached"), listed);

  Run detach = cli({"store", "detach", "archive"});
  Run blocked = cli({"query", "I need document", "--store", "archive"});
  Run attach = cli({"store", "attach", "archive"});
  Run after = cli({"query", "I need document", "--store", "archive"});
  row("attach/detach",
      detach.status == 0 && blocked.status == 1 && has(blocked, "StoreDetached") && attach.status == 0 &&
          after.status == 0,
      blocked);

  Run ingest = cli({"ingest", (home / "archive.csv").string(), "--store", "archive"});
  Run in_archive = cli({"query", "I want cad", "--store", "archive"});
  Run in_default = cli({"query", "I want cad", "--store", "default"});
  row("multi-store manipulation",
      ingest.status == 0 && has(in_archive, "old drawing") && !has(in_default, "old drawing") &&
          has(in_default, "drawing"),
      in_archive);

  cli({"saved", "save", "bycad", "--sql", "SELECT id, name, kind, value FROM records WHERE (kind = 'cad')"});
  Run editor = cli({"saved", "edit", "bycad"}, "EDITOR='sed -i s/cad/document/'");
  Run edited = cli({"saved", "show", "bycad"});
  Run edited_run = cli({"saved", "run", "bycad"});
  row("manual query editor",
      editor.status == 0 && has(edited, "kind = 'document'") && has(edited_run, "2 records"), edited);

  Run free = cli({"query", "find assembly"});
  row("structured and unstructured processing",
      free.status == 0 && has(free, "free identifier") && has(free, "drawing") && has(free, "1 record"), free);

  Run save = cli({"saved", "save", "atleast", "--query", "I want document where >="});
  Run run5 = cli({"saved", "run", "atleast", "--bind", "5"});
  Run edit = cli({"saved", "edit", "atleast", "--sql",
                  "SELECT id, name, kind, value FROM records WHERE (kind = 'document') AND value < 5"});
  Run rerun = cli({"saved", "run", "atleast"});
  Run list = cli({"saved", "list"});
  row("create/edit/save/run queries",
      save.status == 0 && run5.status == 0 && has(run5, "manual") && has(run5, "1 record") && edit.status == 0 &&
          rerun.status == 0 && has(rerun, "spec") && has(list, "atleast"),
      rerun);

  Run integrated = cli({"query", "I need document I want CAD"});
  row("query integration",
      integrated.status == 0 && has(integrated, "kind = 'cad' OR kind = 'document'") && has(integrated, "3 records"),
      integrated);

  Run sql = cli({"sql", "SELECT id, name, kind, value FROM records WHERE (kind = 'document') AND value BETWEEN 2 AND 8"});
  row("SQL mode", sql.status == 0 && has(sql, "spec") && has(sql, "1 record"), sql);

  Run js = cli({"--json", "query", "we need document where between 2 and 10"});
  bool results_ok = false;
  try {
    const json j = json::parse(js.out);
    const auto& rs = j.at("results");
    results_ok = rs.size() == 2 && rs.at(0).at("id") == 1 && rs.at(1).at("id") == 3 && rs.at(0).contains("name") &&
                 rs.at(0).contains("kind") && rs.at(0).contains("value");
  } catch (const std::exception&) {
  }
  row("results returned", js.status == 0 && results_ok, js);

  o.summary = std::to_string(passed) + "/10 features demonstrated";
  fs::remove_all(home);
  return o;
}

Outcome persistence_ledger() {
  Outcome o;
  const fs::path home = oracle::temp_home("accept-ledger");
  std::uint64_t failed_id = 0;
  {
    Engine eng({home, std::nullopt, std::nullopt, "default"});
    eng.repository().create_store("default");
    eng.repository().create_store("archive");
    eng.repository().ingest("default", oracle::csv_of(oracle::kSmallFixture));
    eng.repository().save_query(
        {"docs", "SELECT id, name, kind, value FROM records WHERE (kind = 'document')", SavedKind::sql, "", ""}, false);
    const Session s = eng.session("script");
    for (const std::string text : {"I need document", "They is searching music", "I want cad",
                                   "we need document where between 2 and 8", "find assembly"}) {
      PipelineResponse r = eng.process(text, s);
      if (r.error) failed_id = *r.input_id;
    }
  }

  Engine reopened({home, std::nullopt, std::nullopt, "default"});
  const auto entries = reopened.repository().history("script");
  int inputs = 0;
  int executed = 0;
  std::vector<Stage> failed;
  for (const auto& e : entries) {
    inputs += e.stage == Stage::input;
    executed += e.stage == Stage::executed;
    if (e.input_id == failed_id) failed.push_back(e.stage);
  }
  o.expect(inputs == 5, "input entries: " + std::to_string(inputs));
  o.expect(executed == 4, "executed entries: " + std::to_string(executed));
  o.expect(failed == std::vector<Stage>{Stage::input, Stage::lexed, Stage::parsed}, "failed query stages");

  Repository& repo = reopened.repository();
  const ResultSet before = repo.records("default");
  repo.detach_store("default");
  repo.detach_store("archive");
  {
    Repository cold(home);
    o.expect(cold.list_stores().size() == 2, "stores after detach");
    o.expect(cold.store_info("default").state == StoreState::Detached, "detached state persisted");
  }
  repo.attach_store("default");
  repo.attach_store("archive");
  Repository warm(home);
  o.expect(warm.list_stores().size() == 2, "stores after attach");
  o.expect(warm.records("default") == before, "records preserved");
  o.expect(warm.records("archive").empty(), "empty store preserved");
  o.expect(warm.list_queries().size() == 1 && warm.load_query("docs").kind == SavedKind::sql, "saved query preserved");

  o.summary = std::to_string(inputs) + " input, " + std::to_string(executed) + " executed; failure stopped at " +
              (failed.empty() ? std::string("?") : std::string(to_string(failed.back())));
  fs::remove_all(home);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<std::string> checklist;
  const std::vector<Criterion> criteria = {
      {"grammar conformance", grammar_conformance},
      {"lexeme coverage", lexeme_coverage},
      {"agreement matrix", agreement_matrix},
      {"oracle equivalence", oracle_equivalence},
      {"feature checklist (CLI session)", [&] { return table_reproduction(checklist); }},
      {"persistence ledger", persistence_ledger},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.summary << "\n";
    for (const auto& f : o.failures) std::cout << "     " << f << "\n";
    if (!checklist.empty()) {
      for (const auto& line : checklist) std::cout << line << "\n";
      checklist.clear();
    }
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
