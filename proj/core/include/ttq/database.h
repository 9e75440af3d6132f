// Copyright 2026 The ttq Authors.
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

#ifndef TTQ_DATABASE_H_
#define TTQ_DATABASE_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ttq/error.h"

struct sqlite3;

namespace ttq {

struct Cell {
  enum class Type { kNull, kInteger, kReal, kText, kBlob };
  Type type = Type::kNull;
  int64_t integer = 0;
  double real = 0.0;
  std::string bytes;  // text or blob payload
};

using Row = std::vector<Cell>;

struct QueryResult {
  int column_count = 0;
  std::vector<Row> rows;
};

class QueryError : public Error {
 public:
  enum class Kind { kMutationRejected, kRuntime, kTimeout, kRowCapExceeded };
  QueryError(Kind kind, const std::string& detail)
      : Error(detail), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct QueryLimits {
  std::chrono::milliseconds timeout{5000};
  size_t row_cap = 10000;
};

// A private in-memory database. Connections are never shared; move-only.
class Database {
 public:
  // Fresh, empty, writable database. Double-quoted strings are identifiers
  // only (no fallback to string literals).
  static Database OpenInMemory();

  Database(Database&& other) noexcept;
  Database& operator=(Database&& other) noexcept;
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  ~Database();

  // Runs every statement of a semicolon-terminated script in order. Throws
  // ProvisionError naming the first failing statement.
  void ExecScript(std::string_view script);

  // Switches the connection to query-only mode; later writes fail.
  void MakeReadOnly();
  bool read_only() const { return read_only_; }

  // Executes exactly one read-only statement and materializes its rows.
  QueryResult Query(std::string_view sql, const QueryLimits& limits) const;

 private:
  explicit Database(sqlite3* db) : db_(db) {}

  sqlite3* db_ = nullptr;
  bool read_only_ = false;
};

}  // namespace ttq

#endif  // TTQ_DATABASE_H_
