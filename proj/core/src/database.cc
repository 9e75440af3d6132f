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

#include "ttq/database.h"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <utility>

namespace ttq {

namespace {

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Tail of a prepared statement contains only whitespace, semicolons or
// comments.
bool TailIsEmpty(const char* tail) {
  while (*tail) {
    if (std::isspace(static_cast<unsigned char>(*tail)) || *tail == ';') {
      ++tail;
      continue;
    }
    if (tail[0] == '-' && tail[1] == '-') {
      while (*tail && *tail != '\n') ++tail;
      continue;
    }
    if (tail[0] == '/' && tail[1] == '*') {
      const char* close = std::strstr(tail + 2, "*/");
      if (!close) return true;
      tail = close + 2;
      continue;
    }
    return false;
  }
  return true;
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool expired = false;
};

int ProgressCallback(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (std::chrono::steady_clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

class Statement {
 public:
  Statement(sqlite3* db, std::string_view sql, const char** tail) {
    rc_ = sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()),
                             &stmt_, tail);
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  int rc() const { return rc_; }
  sqlite3_stmt* get() const { return stmt_; }

 private:
  sqlite3_stmt* stmt_ = nullptr;
  int rc_ = SQLITE_OK;
};

}  // namespace

Database Database::OpenInMemory() {
  sqlite3* db = nullptr;
  int rc = sqlite3_open_v2(":memory:", &db,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                               SQLITE_OPEN_NOMUTEX,
                           nullptr);
  if (rc != SQLITE_OK) {
    std::string detail = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error("cannot open in-memory database: " + detail);
  }
  sqlite3_db_config(db, SQLITE_DBCONFIG_DQS_DML, 0, nullptr);
  sqlite3_db_config(db, SQLITE_DBCONFIG_DQS_DDL, 0, nullptr);
  sqlite3_db_config(db, SQLITE_DBCONFIG_ENABLE_LOAD_EXTENSION, 0, nullptr);
  return Database(db);
}

Database::Database(Database&& other) noexcept
    : db_(std::exchange(other.db_, nullptr)), read_only_(other.read_only_) {}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    read_only_ = other.read_only_;
  }
  return *this;
}

Database::~Database() { sqlite3_close(db_); }

void Database::ExecScript(std::string_view script) {
  std::string owned(script);
  const char* cursor = owned.c_str();
  while (*cursor) {
    const char* tail = nullptr;
    Statement stmt(db_, cursor, &tail);
    std::string text = Trim(std::string_view(
        cursor, static_cast<size_t>((tail ? tail : cursor) - cursor)));
    if (stmt.rc() != SQLITE_OK) {
      throw ProvisionError(text, sqlite3_errmsg(db_));
    }
    if (stmt.get() == nullptr) break;  // only whitespace or comments left
    int rc;
    while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    }
    if (rc != SQLITE_DONE) throw ProvisionError(text, sqlite3_errmsg(db_));
    cursor = tail;
  }
}

void Database::MakeReadOnly() {
  ExecScript("PRAGMA query_only = ON;");
  read_only_ = true;
}

QueryResult Database::Query(std::string_view sql,
                            const QueryLimits& limits) const {
  std::string owned(sql);
  const char* tail = nullptr;
  Deadline deadline{std::chrono::steady_clock::now() + limits.timeout};
  sqlite3_progress_handler(db_, 1000, &ProgressCallback, &deadline);
  struct ClearHandler {
    sqlite3* db;
    ~ClearHandler() { sqlite3_progress_handler(db, 0, nullptr, nullptr); }
  } clear{db_};

  Statement stmt(db_, owned, &tail);
  if (stmt.rc() != SQLITE_OK) {
    if (deadline.expired) {
      throw QueryError(QueryError::Kind::kTimeout, "query timed out");
    }
    throw QueryError(QueryError::Kind::kRuntime, sqlite3_errmsg(db_));
  }
  if (stmt.get() == nullptr) {
    throw QueryError(QueryError::Kind::kRuntime, "empty statement");
  }
  if (tail && !TailIsEmpty(tail)) {
    throw QueryError(QueryError::Kind::kRuntime,
                     "more than one statement supplied");
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    throw QueryError(QueryError::Kind::kMutationRejected,
                     "statement would modify the database");
  }
  QueryResult result;
  result.column_count = sqlite3_column_count(stmt.get());
  int rc;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    if (result.rows.size() >= limits.row_cap) {
      throw QueryError(QueryError::Kind::kRowCapExceeded,
                       "result exceeds row cap of " +
                           std::to_string(limits.row_cap));
    }
    Row row(static_cast<size_t>(result.column_count));
    for (int c = 0; c < result.column_count; ++c) {
      Cell& cell = row[static_cast<size_t>(c)];
      switch (sqlite3_column_type(stmt.get(), c)) {
        case SQLITE_INTEGER:
          cell.type = Cell::Type::kInteger;
          cell.integer = sqlite3_column_int64(stmt.get(), c);
          break;
        case SQLITE_FLOAT:
          cell.type = Cell::Type::kReal;
          cell.real = sqlite3_column_double(stmt.get(), c);
          break;
        case SQLITE_TEXT: {
          cell.type = Cell::Type::kText;
          const auto* p = sqlite3_column_text(stmt.get(), c);
          cell.bytes.assign(reinterpret_cast<const char*>(p),
                            static_cast<size_t>(
                                sqlite3_column_bytes(stmt.get(), c)));
          break;
        }
        case SQLITE_BLOB: {
          cell.type = Cell::Type::kBlob;
          const auto* p =
              static_cast<const char*>(sqlite3_column_blob(stmt.get(), c));
          int size = sqlite3_column_bytes(stmt.get(), c);
          if (p) cell.bytes.assign(p, static_cast<size_t>(size));
          break;
        }
        default:
          cell.type = Cell::Type::kNull;
          break;
      }
    }
    result.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) {
    if (deadline.expired) {
      throw QueryError(QueryError::Kind::kTimeout,
                       "query exceeded " +
                           std::to_string(limits.timeout.count()) + " ms");
    }
    throw QueryError(QueryError::Kind::kRuntime, sqlite3_errmsg(db_));
  }
  return result;
}

}  // namespace ttq
