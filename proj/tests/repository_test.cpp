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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "isoas/error.hpp"
#include "isoas/repository.hpp"
#include "isoas/sql.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace isoas;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

std::vector<std::int64_t> ids(const Execution& e) {
  std::vector<std::int64_t> out;
  for (const auto& r : e.rows) out.push_back(r.id);
  return out;
}

}  // namespace

TEST_SUITE("repository") {

TEST_CASE("csv parsing") {
  auto rows = parse_records_csv(
      "id,name,kind,description,value\n"
      "1,spec,document,\"product, specification\",3\r\n"
      "2,\"say \"\"hi\"\"\",cad,,7.5\n"
      "\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == Record{1, "spec", "document", "product, specification", 3});
  CHECK(rows[1].name == "say \"hi\"");
  CHECK(rows[1].description.empty());
  CHECK(rows[1].value == 7.5);

  auto line_of = [](const std::string& csv) {
    try {
      parse_records_csv(csv);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedRow);
      return e.detail().at("line").get<int>();
    }
    return 0;
  };
  CHECK(line_of("id,name,kind,description,value\n1,a,b,c\n") == 2);
  CHECK(line_of("id,name,kind,description,value\n1,a,b,c,1\nx,a,b,c,1\n") == 3);
  CHECK(line_of("id,name,kind,description,value\n1,a,b,c,nine\n") == 2);
  CHECK(line_of("id,name,kind,description,value\n1,\"a,b,c,1\n") == 2);
}

TEST_CASE("store lifecycle") {
  Repository repo(oracle::temp_home("lifecycle"));
  StoreInfo info = repo.create_store("s1");
  CHECK(info.state == StoreState::Attached);
  CHECK(info.size == 0u);
  CHECK(code_of([&] { repo.create_store("s1"); }) == ErrorCode::NameInUse);
  CHECK(code_of([&] { repo.create_store("bad name"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { repo.attach_store("s1"); }) == ErrorCode::WrongState);
  CHECK(code_of([&] { repo.detach_store("nope"); }) == ErrorCode::UnknownStore);

  CHECK(repo.ingest("s1", oracle::csv_of(oracle::kSmallFixture)) == 3);
  repo.detach_store("s1");
  CHECK(repo.store_info("s1").state == StoreState::Detached);
  CHECK_FALSE(repo.store_info("s1").size);
  CHECK(code_of([&] { repo.records("s1"); }) == ErrorCode::StoreDetached);
  CHECK(code_of([&] { repo.ingest("s1", oracle::csv_of(oracle::kSmallFixture)); }) == ErrorCode::StoreDetached);
  CHECK(code_of([&] { repo.detach_store("s1"); }) == ErrorCode::WrongState);
  repo.attach_store("s1");
  CHECK(repo.records("s1").size() == 3);
}

TEST_CASE("stores persist across reopen") {
  const fs::path home = oracle::temp_home("persist");
  std::mt19937 rng(8);
  const auto fixture = oracle::random_fixture(rng, 10);
  ResultSet before;
  {
    Repository repo(home);
    repo.create_store("main");
    repo.create_store("side");
    repo.ingest("main", oracle::csv_of(fixture));
    repo.detach_store("side");
    before = repo.records("main");
    CHECK(before.size() == 10);
  }
  Repository again(home);
  CHECK(again.records("main") == before);
  CHECK(again.store_info("side").state == StoreState::Detached);
  CHECK(again.list_stores().size() == 2);
  CHECK(fs::exists(home / "catalog.jsonl"));
  CHECK(fs::exists(home / "stores" / "main.jsonl"));
}

TEST_CASE("ingest is all or nothing") {
  Repository repo(oracle::temp_home("atomic"));
  repo.create_store("s");
  repo.ingest("s", oracle::csv_of(oracle::kSmallFixture));
  CHECK(code_of([&] { repo.ingest("s", "id,name,kind,description,value\n7,a,b,c,1\n1,dup,b,c,1\n"); }) ==
        ErrorCode::DuplicateId);
  CHECK(code_of([&] { repo.ingest("s", "id,name,kind,description,value\n8,a,b,c,1\n8,a,b,c,1\n"); }) ==
        ErrorCode::DuplicateId);
  CHECK(code_of([&] { repo.ingest("s", "id,name,kind,description,value\n9,a,b,c,1\n10,a,b\n"); }) ==
        ErrorCode::MalformedRow);
  CHECK(repo.records("s").size() == 3);
  Repository reopened(repo.home());
  CHECK(reopened.records("s").size() == 3);
}

TEST_CASE("execute matches a brute-force scan") {
  std::mt19937 rng(2024);
  for (int fixture_no = 0; fixture_no < 4; ++fixture_no) {
    Repository repo(oracle::temp_home("scan"));
    repo.create_store("s");
    const auto rows = oracle::random_fixture(rng, 100);
    repo.ingest("s", oracle::csv_of(rows));
    for (int trial = 0; trial < 100; ++trial) {
      gen::RandomQuery rq = gen::random_query(rng, "s");
      INFO(render_sql(rq.query));
      CHECK(ids(repo.execute("s", rq.query)) == oracle::scan(rows, rq.concepts, rq.conds));
      CHECK(ids(repo.execute_sql("s", render_sql(rq.query))) == oracle::scan(rows, rq.concepts, rq.conds));
    }
  }
}

TEST_CASE("execute examples") {
  Repository repo(oracle::temp_home("examples"));
  repo.create_store("s");
  repo.ingest("s", oracle::csv_of(oracle::kSmallFixture));
  StructuredQuery q{"s", {"document"}, std::nullopt, {}, {}};
  CHECK(ids(repo.execute("s", q)) == std::vector<std::int64_t>{1, 3});
  CHECK_FALSE(repo.execute("s", q).fallback);

  q.concepts = {"assembly"};
  Execution fb = repo.execute("s", q);
  CHECK(ids(fb) == std::vector<std::int64_t>{2});
  CHECK(fb.fallback);

  q.concepts = {"document"};
  q.filter = Filter{CompareLeaf{CompareOp::Gt, Literal::of(5)}};
  CHECK(ids(repo.execute("s", q)) == std::vector<std::int64_t>{3});

  q.filter = Filter{CompareLeaf{CompareOp::Eq, Literal::string("x")}};
  CHECK(code_of([&] { repo.execute("s", q); }) == ErrorCode::TypeMismatch);

  q.filter = Filter{HoleLeaf{CompareOp::Lt}};
  q.params = {{"value", CompareOp::Lt}};
  CHECK(code_of([&] { repo.execute("s", q); }) == ErrorCode::UnboundParameter);
}

TEST_CASE("execute_sql") {
  Repository repo(oracle::temp_home("sql"));
  repo.create_store("s");
  repo.ingest("s", oracle::csv_of(oracle::kSmallFixture));
  CHECK(ids(repo.execute_sql("s", "SELECT id, name, kind, value FROM records WHERE (kind = 'document') AND value "
                                  "BETWEEN 2 AND 8")) == std::vector<std::int64_t>{1});
  CHECK(ids(repo.execute_sql("s", "select id, name, kind, value from records where (kind = 'cad' or kind = "
                                  "'document');")) == std::vector<std::int64_t>{1, 2, 3});
  try {
    repo.execute_sql("s", "SELEC id FROM records");
    FAIL("expected SqlSyntaxError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SqlSyntaxError);
    CHECK(e.detail().at("offset") == 0);
  }
  CHECK(code_of([&] { repo.execute_sql("s", "SELECT id, name, kind, value FROM records WHERE (kind = 'a') AND"); }) ==
        ErrorCode::SqlSyntaxError);
}

TEST_CASE("a closed range equals its two half-open bounds") {
  std::mt19937 rng(11);
  Repository repo(oracle::temp_home("range"));
  repo.create_store("s");
  repo.ingest("s", oracle::csv_of(oracle::random_fixture(rng, 100)));
  for (int lo = -1; lo < 22; lo += 3) {
    for (int hi = lo; hi < 24; hi += 5) {
      const std::string base = "SELECT id, name, kind, value FROM records WHERE (kind = 'document' OR kind = 'cad')";
      CHECK(ids(repo.execute_sql("s", base + " AND value BETWEEN " + std::to_string(lo) + " AND " +
                                          std::to_string(hi))) ==
            ids(repo.execute_sql("s", base + " AND value >= " + std::to_string(lo) + " AND value <= " +
                                          std::to_string(hi))));
    }
  }
}

TEST_CASE("rendered SQL parses back to the same text") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    gen::RandomQuery rq = gen::random_query(rng, "s");
    const std::string sql = render_sql(rq.query);
    StructuredQuery back = parse_sql(sql, "s");
    CHECK(render_sql(back) == sql);
    CHECK(back.concepts == rq.query.concepts);
  }
}

TEST_CASE("ledger stage order") {
  Repository repo(oracle::temp_home("ledger"));
  const auto id = repo.next_input_id();
  auto entry = [&](Stage s) { return LedgerEntry{id, "s1", s, nlohmann::json::object(), ""}; };
  CHECK(code_of([&] { repo.log_stage(entry(Stage::lexed)); }) == ErrorCode::StageOrderViolation);
  repo.log_stage(entry(Stage::input));
  repo.log_stage(entry(Stage::lexed));
  CHECK(code_of([&] { repo.log_stage(entry(Stage::modeled)); }) == ErrorCode::StageOrderViolation);
  CHECK(code_of([&] { repo.log_stage(entry(Stage::input)); }) == ErrorCode::StageOrderViolation);
  repo.log_stage(entry(Stage::parsed));

  const auto other = repo.next_input_id();
  CHECK(other != id);
  repo.log_stage({other, "s2", Stage::input, "x", ""});

  CHECK(repo.history("s1").size() == 3);
  CHECK(repo.history("s2").size() == 1);
  CHECK(repo.history("none").empty());
  CHECK_FALSE(repo.history("s1")[0].timestamp.empty());

  Repository reopened(repo.home());
  CHECK(reopened.ledger_size() == 4);
  CHECK(reopened.next_input_id() > other);
  CHECK(code_of([&] { reopened.log_stage(entry(Stage::executed)); }) == ErrorCode::StageOrderViolation);
  reopened.log_stage(entry(Stage::modeled));
}

TEST_CASE("saved queries") {
  Repository repo(oracle::temp_home("saved"));
  const std::string sql = "SELECT id, name, kind, value FROM records WHERE (kind = 'cad')";
  repo.save_query({"q1", sql, SavedKind::sql, "", ""}, false);
  CHECK(repo.load_query("q1").body == sql);
  CHECK_FALSE(repo.load_query("q1").created.empty());
  CHECK(code_of([&] { repo.save_query({"q1", sql, SavedKind::sql, "", ""}, false); }) == ErrorCode::NameInUse);
  repo.save_query({"q1", sql + " AND value > 1", SavedKind::sql, "", ""}, true);
  CHECK(repo.load_query("q1").body == sql + " AND value > 1");

  CHECK(code_of([&] { repo.save_query({"bad", "SELEC", SavedKind::sql, "", ""}, false); }) ==
        ErrorCode::SqlSyntaxError);
  CHECK(code_of([&] { repo.save_query({"bad", "{", SavedKind::ir, "", ""}, false); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { repo.save_query({"", sql, SavedKind::sql, "", ""}, false); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { repo.load_query("bad"); }) == ErrorCode::UnknownQuery);

  repo.save_query({"q2", R"({"store":"s","concepts":["cad"],"filter":{"type":"hole","op":"<"}})", SavedKind::ir, "",
                   ""},
                  false);
  CHECK(repo.list_queries().size() == 2);
  {
    Repository reopened(repo.home());
    CHECK(reopened.list_queries().size() == 2);
    CHECK(reopened.load_query("q2").kind == SavedKind::ir);
  }
  repo.delete_query("q1");
  CHECK(code_of([&] { repo.delete_query("q1"); }) == ErrorCode::UnknownQuery);
  CHECK(Repository(repo.home()).list_queries().size() == 1);
}

}  // TEST_SUITE
