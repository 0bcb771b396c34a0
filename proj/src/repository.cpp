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

#include "isoas/repository.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "isoas/error.hpp"
#include "isoas/serialize.hpp"
#include "isoas/sql.hpp"
#include "isoas/text.hpp"

namespace fs = std::filesystem;

namespace isoas {

std::string_view to_string(StoreState s) { return s == StoreState::Attached ? "attached" : "detached"; }

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::input: return "input";
    case Stage::lexed: return "lexed";
    case Stage::parsed: return "parsed";
    case Stage::modeled: return "modeled";
    case Stage::resolved: return "resolved";
    case Stage::executed: return "executed";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (int i = 0; i < kStageCount; ++i) {
    if (to_string(static_cast<Stage>(i)) == s) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

std::string_view to_string(SavedKind k) { return k == SavedKind::ir ? "ir" : "sql"; }

std::optional<SavedKind> saved_kind_from_string(std::string_view s) {
  if (s == "ir") return SavedKind::ir;
  if (s == "sql") return SavedKind::sql;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line;
};

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + what, {{"line", line}});
}

std::vector<CsvRow> read_csv(std::string_view s) {
  std::vector<CsvRow> rows;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < s.size()) {
    CsvRow row{{}, line};
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (i < s.size()) {
      const char c = s[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          quoted = false;
          ++i;
          continue;
        }
        if (c == '\n') ++line;
        field.push_back(c);
        ++i;
        continue;
      }
      if (c == '"') {
        if (!field.empty() || was_quoted) malformed(line, "unexpected quote inside field");
        quoted = was_quoted = true;
        ++i;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
        ++i;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
        ++i;
        ++line;
        break;
      } else {
        if (was_quoted) malformed(line, "text after closing quote");
        field.push_back(c);
        ++i;
      }
    }
    if (quoted) malformed(row.line, "unterminated quoted field");
    row.fields.push_back(std::move(field));
    const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty() && !was_quoted;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

bool valid_store_name(std::string_view name) {
  if (name.empty() || name.size() > 64) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) || c == '_' || c == '-';
  });
}

void require_store_name(std::string_view name) {
  if (!valid_store_name(name)) {
    throw Error(ErrorCode::InvalidArgument,
                "invalid store name '" + std::string(name) + "' (letters, digits, '_' and '-' only)");
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + p.string() + ": " + ec.message());
}

void append_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::app);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to " + p.string());
}

std::vector<json> read_jsonl(const fs::path& p) {
  std::vector<json> out;
  const std::string text = read_file(p);
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::IoFailure, p.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

double numeric_operand(const Literal& l) {
  if (l.numeric()) return *l.number;
  if (auto x = parse_number(trim(l.text))) return *x;
  throw Error(ErrorCode::TypeMismatch, "'" + l.text + "' is not a number", {{"literal", l.text}});
}

bool compare(double v, CompareOp op, double x) {
  switch (op) {
    case CompareOp::Eq: return v == x;
    case CompareOp::Lt: return v < x;
    case CompareOp::Gt: return v > x;
    case CompareOp::Le: return v <= x;
    case CompareOp::Ge: return v >= x;
  }
  return false;
}

bool contains_ci(std::string_view hay, std::string_view needle) {
  return ascii_lower(hay).find(ascii_lower(needle)) != std::string::npos;
}

}  // namespace

std::vector<Record> parse_records_csv(std::string_view csv) {
  std::vector<CsvRow> rows = read_csv(csv);
  if (rows.empty()) malformed(1, "missing header 'id,name,kind,description,value'");
  static const std::vector<std::string> kHeader = {"id", "name", "kind", "description", "value"};
  std::vector<std::string> header;
  for (const auto& f : rows.front().fields) header.push_back(ascii_lower(trim(f)));
  if (header != kHeader) malformed(rows.front().line, "header must be 'id,name,kind,description,value'");

  std::vector<Record> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 5) {
      malformed(row.line, "expected 5 fields, found " + std::to_string(row.fields.size()));
    }
    Record rec;
    const std::string_view id = trim(row.fields[0]);
    if (id.empty() || id.size() > 18 || !std::all_of(id.begin(), id.end(), [](char c) { return is_digit(c); })) {
      malformed(row.line, "id must be a positive integer");
    }
    rec.id = std::stoll(std::string(id));
    if (rec.id <= 0) malformed(row.line, "id must be a positive integer");
    rec.name = row.fields[1];
    rec.kind = ascii_lower(trim(row.fields[2]));
    if (rec.kind.empty()) malformed(row.line, "kind must not be empty");
    rec.description = row.fields[3];
    auto value = parse_number(trim(row.fields[4]));
    if (!value) malformed(row.line, "value must be a number");
    rec.value = *value;
    out.push_back(std::move(rec));
  }
  return out;
}

Execution evaluate(const StructuredQuery& q, const std::map<std::int64_t, Record>& records) {
  if (!q.params.empty()) render_sql(q);  // throws UnboundParameter
  std::vector<FilterLeaf> conds;
  if (q.filter) conds = leaves(*q.filter);

  // Resolve operands once so a bad literal fails even on an empty store.
  struct Bound {
    bool between;
    CompareOp op;
    double a, b;
  };
  std::vector<Bound> bound;
  for (const auto& leaf : conds) {
    if (const auto* c = std::get_if<CompareLeaf>(&leaf)) {
      bound.push_back({false, c->op, numeric_operand(c->value), 0});
    } else if (const auto* b = std::get_if<BetweenLeaf>(&leaf)) {
      bound.push_back({true, CompareOp::Eq, numeric_operand(b->lo), numeric_operand(b->hi)});
    } else {
      render_sql(q);
    }
  }

  auto kind_match = [&](const Record& r) {
    return std::any_of(q.concepts.begin(), q.concepts.end(),
                       [&](const std::string& c) { return ascii_lower(c) == r.kind; });
  };
  auto text_match = [&](const Record& r) {
    return std::any_of(q.concepts.begin(), q.concepts.end(), [&](const std::string& c) {
      return contains_ci(r.name, c) || contains_ci(r.description, c);
    });
  };

  Execution ex;
  std::vector<const Record*> matched;
  for (const auto& [id, r] : records) {
    if (kind_match(r)) matched.push_back(&r);
  }
  if (matched.empty()) {
    ex.fallback = true;
    for (const auto& [id, r] : records) {
      if (text_match(r)) matched.push_back(&r);
    }
  }
  for (const Record* r : matched) {
    const bool keep = std::all_of(bound.begin(), bound.end(), [&](const Bound& b) {
      return b.between ? (r->value >= b.a && r->value <= b.b) : compare(r->value, b.op, b.a);
    });
    if (keep) ex.rows.push_back(*r);
  }
  return ex;
}

// ---------------------------------------------------------------------------

struct Repository::Store {
  std::string name;
  StoreState state = StoreState::Attached;
  fs::path file;
  mutable std::shared_mutex mutex;
  std::map<std::int64_t, Record> records;

  void load() {
    records.clear();
    for (const json& j : read_jsonl(file)) {
      Record r = record_from_json(j);
      records[r.id] = std::move(r);
    }
  }

  void flush() const {
    std::string content;
    for (const auto& [id, r] : records) content += to_json(r).dump() + "\n";
    write_file_atomic(file, content);
  }
};

Repository::Repository(fs::path home) : home_(std::move(home)) {
  std::error_code ec;
  fs::create_directories(home_ / "stores", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + (home_ / "stores").string() + ": " + ec.message());

  for (const json& j : read_jsonl(home_ / "catalog.jsonl")) {
    auto s = std::make_shared<Store>();
    s->name = j.at("name").get<std::string>();
    s->state = j.at("state").get<std::string>() == "detached" ? StoreState::Detached : StoreState::Attached;
    s->file = home_ / "stores" / (s->name + ".jsonl");
    if (s->state == StoreState::Attached) s->load();
    stores_.emplace(s->name, std::move(s));
  }

  for (const json& j : read_jsonl(home_ / "ledger.jsonl")) {
    LedgerEntry e = ledger_entry_from_json(j);
    last_stage_[e.input_id] = e.stage;
    next_input_id_ = std::max(next_input_id_, e.input_id + 1);
    ledger_.push_back(std::move(e));
  }

  for (const json& j : read_jsonl(home_ / "saved.jsonl")) {
    SavedQuery q = saved_query_from_json(j);
    saved_.emplace(q.name, std::move(q));
  }
}

Repository::~Repository() = default;

std::shared_ptr<Repository::Store> Repository::find(std::string_view name) const {
  auto it = stores_.find(name);
  if (it == stores_.end()) {
    throw Error(ErrorCode::UnknownStore, "no store named '" + std::string(name) + "'", {{"store", std::string(name)}});
  }
  return it->second;
}

void Repository::write_catalog() const {
  std::string content;
  for (const auto& [name, s] : stores_) {
    content += json{{"name", name}, {"state", std::string(to_string(s->state))}}.dump() + "\n";
  }
  write_file_atomic(home_ / "catalog.jsonl", content);
}

StoreInfo Repository::create_store(std::string_view name) {
  require_store_name(name);
  std::unique_lock lock(catalog_mutex_);
  if (stores_.count(name)) {
    throw Error(ErrorCode::NameInUse, "store '" + std::string(name) + "' already exists", {{"store", std::string(name)}});
  }
  auto s = std::make_shared<Store>();
  s->name = std::string(name);
  s->file = home_ / "stores" / (s->name + ".jsonl");
  write_file_atomic(s->file, "");
  stores_.emplace(s->name, s);
  try {
    write_catalog();
  } catch (...) {
    stores_.erase(s->name);
    throw;
  }
  return {s->name, s->state, 0};
}

void Repository::attach_store(std::string_view name) {
  std::unique_lock lock(catalog_mutex_);
  auto s = find(name);
  if (s->state == StoreState::Attached) {
    throw Error(ErrorCode::WrongState, "store '" + s->name + "' is already attached", {{"store", s->name}});
  }
  s->load();
  s->state = StoreState::Attached;
  write_catalog();
}

void Repository::detach_store(std::string_view name) {
  std::unique_lock lock(catalog_mutex_);
  auto s = find(name);
  if (s->state == StoreState::Detached) {
    throw Error(ErrorCode::WrongState, "store '" + s->name + "' is already detached", {{"store", s->name}});
  }
  s->flush();
  s->records.clear();
  s->state = StoreState::Detached;
  write_catalog();
}

std::vector<StoreInfo> Repository::list_stores() const {
  std::shared_lock lock(catalog_mutex_);
  std::vector<StoreInfo> out;
  for (const auto& [name, s] : stores_) {
    std::shared_lock store_lock(s->mutex);
    StoreInfo info{name, s->state, std::nullopt};
    if (s->state == StoreState::Attached) info.size = s->records.size();
    out.push_back(std::move(info));
  }
  return out;
}

StoreInfo Repository::store_info(std::string_view name) const {
  std::shared_lock lock(catalog_mutex_);
  auto s = find(name);
  std::shared_lock store_lock(s->mutex);
  StoreInfo info{s->name, s->state, std::nullopt};
  if (s->state == StoreState::Attached) info.size = s->records.size();
  return info;
}

bool Repository::has_store(std::string_view name) const {
  std::shared_lock lock(catalog_mutex_);
  return stores_.count(name) > 0;
}

namespace {

[[noreturn]] void detached(const std::string& name) {
  throw Error(ErrorCode::StoreDetached, "store '" + name + "' is detached", {{"store", name}});
}

}  // namespace

std::size_t Repository::ingest(std::string_view store, std::string_view csv) {
  std::shared_lock lock(catalog_mutex_);
  auto s = find(store);
  std::unique_lock store_lock(s->mutex);
  if (s->state != StoreState::Attached) detached(s->name);

  std::vector<Record> rows = parse_records_csv(csv);
  std::set<std::int64_t> seen;
  for (const auto& r : rows) {
    if (s->records.count(r.id) || !seen.insert(r.id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate id " + std::to_string(r.id), {{"id", r.id}});
    }
  }
  std::string lines;
  for (const auto& r : rows) lines += to_json(r).dump() + "\n";
  append_file(s->file, lines);
  for (auto& r : rows) s->records.emplace(r.id, std::move(r));
  return rows.size();
}

ResultSet Repository::records(std::string_view store) const {
  std::shared_lock lock(catalog_mutex_);
  auto s = find(store);
  std::shared_lock store_lock(s->mutex);
  if (s->state != StoreState::Attached) detached(s->name);
  ResultSet out;
  for (const auto& [id, r] : s->records) out.push_back(r);
  return out;
}

Execution Repository::execute(std::string_view store, const StructuredQuery& q) const {
  std::shared_lock lock(catalog_mutex_);
  auto s = find(store);
  std::shared_lock store_lock(s->mutex);
  if (s->state != StoreState::Attached) detached(s->name);
  return evaluate(q, s->records);
}

Execution Repository::execute_sql(std::string_view store, std::string_view sql) const {
  return execute(store, parse_sql(sql, store));
}

// ---------------------------------------------------------------------------

std::uint64_t Repository::next_input_id() {
  std::lock_guard lock(ledger_mutex_);
  return next_input_id_++;
}

void Repository::log_stage(const LedgerEntry& entry) {
  std::lock_guard lock(ledger_mutex_);
  auto it = last_stage_.find(entry.input_id);
  const bool ok = it == last_stage_.end()
                      ? entry.stage == Stage::input
                      : static_cast<int>(entry.stage) == static_cast<int>(it->second) + 1;
  if (!ok) {
    throw Error(ErrorCode::StageOrderViolation,
                "stage '" + std::string(to_string(entry.stage)) + "' cannot follow " +
                    (it == last_stage_.end() ? std::string("nothing") : "'" + std::string(to_string(it->second)) + "'") +
                    " for input " + std::to_string(entry.input_id),
                {{"input_id", entry.input_id}, {"stage", std::string(to_string(entry.stage))}});
  }
  LedgerEntry e = entry;
  if (e.timestamp.empty()) e.timestamp = now_iso8601();
  append_file(home_ / "ledger.jsonl", to_json(e).dump() + "\n");
  last_stage_[e.input_id] = e.stage;
  next_input_id_ = std::max(next_input_id_, e.input_id + 1);
  ledger_.push_back(std::move(e));
}

std::vector<LedgerEntry> Repository::history(std::string_view session) const {
  std::lock_guard lock(ledger_mutex_);
  std::vector<LedgerEntry> out;
  for (const auto& e : ledger_) {
    if (e.session == session) out.push_back(e);
  }
  return out;
}

std::size_t Repository::ledger_size() const {
  std::lock_guard lock(ledger_mutex_);
  return ledger_.size();
}

// ---------------------------------------------------------------------------

void Repository::write_saved() const {
  std::string content;
  for (const auto& [name, q] : saved_) content += to_json(q).dump() + "\n";
  write_file_atomic(home_ / "saved.jsonl", content);
}

void Repository::save_query(SavedQuery q, bool overwrite) {
  if (q.name.empty()) throw Error(ErrorCode::InvalidArgument, "saved query name must not be empty");
  // The body must parse under its kind.
  if (q.kind == SavedKind::ir) {
    json j;
    try {
      j = json::parse(q.body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("IR body is not JSON: ") + e.what());
    }
    query_from_json(j);
  } else {
    parse_sql(q.body, "");
  }

  std::lock_guard lock(saved_mutex_);
  auto it = saved_.find(q.name);
  const std::string now = now_iso8601();
  if (it != saved_.end()) {
    if (!overwrite) {
      throw Error(ErrorCode::NameInUse, "saved query '" + q.name + "' already exists", {{"name", q.name}});
    }
    q.created = it->second.created;
  } else {
    q.created = now;
  }
  q.modified = now;
  auto previous = saved_;
  saved_[q.name] = std::move(q);
  try {
    write_saved();
  } catch (...) {
    saved_ = std::move(previous);
    throw;
  }
}

SavedQuery Repository::load_query(std::string_view name) const {
  std::lock_guard lock(saved_mutex_);
  auto it = saved_.find(name);
  if (it == saved_.end()) {
    throw Error(ErrorCode::UnknownQuery, "no saved query named '" + std::string(name) + "'",
                {{"name", std::string(name)}});
  }
  return it->second;
}

std::vector<SavedQuery> Repository::list_queries() const {
  std::lock_guard lock(saved_mutex_);
  std::vector<SavedQuery> out;
  for (const auto& [name, q] : saved_) out.push_back(q);
  return out;
}

void Repository::delete_query(std::string_view name) {
  std::lock_guard lock(saved_mutex_);
  auto it = saved_.find(name);
  if (it == saved_.end()) {
    throw Error(ErrorCode::UnknownQuery, "no saved query named '" + std::string(name) + "'",
                {{"name", std::string(name)}});
  }
  SavedQuery removed = it->second;
  saved_.erase(it);
  try {
    write_saved();
  } catch (...) {
    saved_.emplace(removed.name, std::move(removed));
    throw;
  }
}

}  // namespace isoas
