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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "isoas/resolver.hpp"

namespace isoas {

struct Record {
  std::int64_t id = 0;
  std::string name;
  std::string kind;
  std::string description;
  double value = 0;

  friend bool operator==(const Record&, const Record&) = default;
};

using ResultSet = std::vector<Record>;

// Concept matching result: which rows matched and whether the name/description
// fallback was needed.
struct Execution {
  ResultSet rows;
  bool fallback = false;
};

enum class StoreState { Attached, Detached };
std::string_view to_string(StoreState s);

struct StoreInfo {
  std::string name;
  StoreState state;
  std::optional<std::size_t> size;  // known only while attached
};

enum class Stage { input, lexed, parsed, modeled, resolved, executed };
inline constexpr int kStageCount = 6;
std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

struct LedgerEntry {
  std::uint64_t input_id = 0;
  std::string session;
  Stage stage = Stage::input;
  nlohmann::json payload;
  std::string timestamp;
};

enum class SavedKind { ir, sql };
std::string_view to_string(SavedKind k);
std::optional<SavedKind> saved_kind_from_string(std::string_view s);

struct SavedQuery {
  std::string name;
  std::string body;
  SavedKind kind = SavedKind::ir;
  std::string created;
  std::string modified;
};

// Reads `id,name,kind,description,value` CSV (RFC 4180 quoting).
// Throws MalformedRow with the 1-based line number.
std::vector<Record> parse_records_csv(std::string_view csv);

// Concept matching (kind equality, else name/description substring), then
// the filter; rows come back ordered by id.
Execution evaluate(const StructuredQuery& q, const std::map<std::int64_t, Record>& records);

// File-backed stores, the pipeline ledger, and saved queries under one home
// directory:
//   catalog.jsonl        store names and attach state
//   stores/<name>.jsonl  one record per line
//   ledger.jsonl         append-only pipeline stages
//   saved.jsonl          saved queries
//
// Per-store reader/writer locking; catalog transitions (create, attach,
// detach) are exclusive with everything else.
class Repository {
 public:
  explicit Repository(std::filesystem::path home);
  ~Repository();
  Repository(const Repository&) = delete;
  Repository& operator=(const Repository&) = delete;

  const std::filesystem::path& home() const { return home_; }

  StoreInfo create_store(std::string_view name);
  void attach_store(std::string_view name);
  void detach_store(std::string_view name);
  std::vector<StoreInfo> list_stores() const;
  StoreInfo store_info(std::string_view name) const;
  bool has_store(std::string_view name) const;

  std::size_t ingest(std::string_view store, std::string_view csv);
  ResultSet records(std::string_view store) const;

  Execution execute(std::string_view store, const StructuredQuery& q) const;
  Execution execute_sql(std::string_view store, std::string_view sql) const;

  std::uint64_t next_input_id();
  void log_stage(const LedgerEntry& entry);
  std::vector<LedgerEntry> history(std::string_view session) const;
  std::size_t ledger_size() const;

  void save_query(SavedQuery q, bool overwrite);
  SavedQuery load_query(std::string_view name) const;
  std::vector<SavedQuery> list_queries() const;
  void delete_query(std::string_view name);

 private:
  struct Store;

  std::shared_ptr<Store> find(std::string_view name) const;
  void write_catalog() const;
  void write_saved() const;

  std::filesystem::path home_;

  mutable std::shared_mutex catalog_mutex_;
  std::map<std::string, std::shared_ptr<Store>, std::less<>> stores_;

  mutable std::mutex ledger_mutex_;
  std::vector<LedgerEntry> ledger_;
  std::map<std::uint64_t, Stage> last_stage_;
  std::uint64_t next_input_id_ = 1;

  mutable std::mutex saved_mutex_;
  std::map<std::string, SavedQuery, std::less<>> saved_;
};

}  // namespace isoas
