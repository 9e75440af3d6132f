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

#include "ttq/sql_lexer.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace ttq::sql {

namespace {

// SQLite keyword list.
const std::unordered_set<std::string_view>& Keywords() {
  static const std::unordered_set<std::string_view> kKeywords = {
      "ABORT",      "ACTION",       "ADD",          "AFTER",
      "ALL",        "ALTER",        "ALWAYS",       "ANALYZE",
      "AND",        "AS",           "ASC",          "ATTACH",
      "AUTOINCREMENT", "BEFORE",    "BEGIN",        "BETWEEN",
      "BY",         "CASCADE",      "CASE",         "CAST",
      "CHECK",      "COLLATE",      "COLUMN",       "COMMIT",
      "CONFLICT",   "CONSTRAINT",   "CREATE",       "CROSS",
      "CURRENT",    "CURRENT_DATE", "CURRENT_TIME", "CURRENT_TIMESTAMP",
      "DATABASE",   "DEFAULT",      "DEFERRABLE",   "DEFERRED",
      "DELETE",     "DESC",         "DETACH",       "DISTINCT",
      "DO",         "DROP",         "EACH",         "ELSE",
      "END",        "ESCAPE",       "EXCEPT",       "EXCLUDE",
      "EXCLUSIVE",  "EXISTS",       "EXPLAIN",      "FAIL",
      "FILTER",     "FIRST",        "FOLLOWING",    "FOR",
      "FOREIGN",    "FROM",         "FULL",         "GENERATED",
      "GLOB",       "GROUP",        "GROUPS",       "HAVING",
      "IF",         "IGNORE",       "IMMEDIATE",    "IN",
      "INDEX",      "INDEXED",      "INITIALLY",    "INNER",
      "INSERT",     "INSTEAD",      "INTERSECT",    "INTO",
      "IS",         "ISNULL",       "JOIN",         "KEY",
      "LAST",       "LEFT",         "LIKE",         "LIMIT",
      "MATCH",      "MATERIALIZED", "NATURAL",      "NO",
      "NOT",        "NOTHING",      "NOTNULL",      "NULL",
      "NULLS",      "OF",           "OFFSET",       "ON",
      "OR",         "ORDER",        "OTHERS",       "OUTER",
      "OVER",       "PARTITION",    "PLAN",         "PRAGMA",
      "PRECEDING",  "PRIMARY",      "QUERY",        "RAISE",
      "RANGE",      "RECURSIVE",    "REFERENCES",   "REGEXP",
      "REINDEX",    "RELEASE",      "RENAME",       "REPLACE",
      "RESTRICT",   "RETURNING",    "RIGHT",        "ROLLBACK",
      "ROW",        "ROWS",         "SAVEPOINT",    "SELECT",
      "SET",        "TABLE",        "TEMP",         "TEMPORARY",
      "THEN",       "TIES",         "TO",           "TRANSACTION",
      "TRIGGER",    "UNBOUNDED",    "UNION",        "UNIQUE",
      "UPDATE",     "USING",        "VACUUM",       "VALUES",
      "VIEW",       "VIRTUAL",      "WHEN",         "WHERE",
      "WINDOW",     "WITH",         "WITHOUT",
  };
  return kKeywords;
}

const std::unordered_set<std::string_view>& Reserved() {
  static const std::unordered_set<std::string_view> kReserved = {
      "ALL",      "ALTER",     "AND",        "AS",           "ASC",
      "ATTACH",   "BEGIN",     "BETWEEN",    "BY",           "CASE",
      "CAST",     "COLLATE",   "COMMIT",     "CREATE",       "CROSS",
      "CURRENT_DATE", "CURRENT_TIME", "CURRENT_TIMESTAMP", "DELETE",
      "DESC",     "DETACH",    "DISTINCT",   "DROP",         "ELSE",
      "END",      "ESCAPE",    "EXCEPT",     "EXISTS",       "FILTER",
      "FROM",     "FULL",      "GLOB",       "GROUP",        "HAVING",
      "IN",       "INDEXED",   "INNER",      "INSERT",       "INTERSECT",
      "INTO",     "IS",        "ISNULL",     "JOIN",         "LEFT",
      "LIKE",     "LIMIT",     "MATCH",      "NATURAL",      "NOT",
      "NOTNULL",  "NULL",      "OFFSET",     "ON",           "OR",
      "ORDER",    "OUTER",     "OVER",       "PRAGMA",       "REGEXP",
      "REPLACE",  "RIGHT",     "ROLLBACK",   "SELECT",       "SET",
      "THEN",     "UNION",     "UPDATE",     "USING",        "VACUUM",
      "VALUES",   "WHEN",      "WHERE",      "WINDOW",       "WITH",
  };
  return kReserved;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

bool IsIdentStart(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool IsIdentPart(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

}  // namespace

bool IsKeyword(std::string_view word) {
  return Keywords().contains(Upper(word));
}

bool IsReservedKeyword(std::string_view upper_word) {
  return Reserved().contains(upper_word);
}

bool IsBareIdentifier(std::string_view name) {
  if (name.empty()) return false;
  auto first = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char ch : name.substr(1)) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_' || c == '$')) return false;
  }
  return !IsKeyword(name);
}

LexResult Lex(std::string_view text) {
  LexResult result;
  auto fail = [&](size_t at, std::string what) {
    result.error = what + " at offset " + std::to_string(at);
    return result;
  };
  size_t i = 0;
  const size_t n = text.size();
  auto push = [&](TokenKind kind, size_t start, size_t end,
                  std::string value) {
    result.tokens.push_back(Token{kind, std::string(text.substr(start, end - start)),
                                  std::move(value), start});
  };
  while (i < n) {
    auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    // Comments.
    if (c == '-' && i + 1 < n && text[i + 1] == '-') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      size_t close = text.find("*/", i + 2);
      if (close == std::string_view::npos) {
        return fail(start, "unterminated block comment");
      }
      i = close + 2;
      continue;
    }
    // Blob literal.
    if ((c == 'x' || c == 'X') && i + 1 < n && text[i + 1] == '\'') {
      size_t close = text.find('\'', i + 2);
      if (close == std::string_view::npos) {
        return fail(start, "unterminated blob literal");
      }
      std::string_view hex = text.substr(i + 2, close - i - 2);
      if (hex.size() % 2 != 0 ||
          !std::all_of(hex.begin(), hex.end(), [](char h) {
            return std::isxdigit(static_cast<unsigned char>(h));
          })) {
        return fail(start, "malformed blob literal");
      }
      i = close + 1;
      push(TokenKind::kBlob, start, i, "X'" + Upper(hex) + "'");
      continue;
    }
    if (IsIdentStart(c)) {
      while (i < n && IsIdentPart(static_cast<unsigned char>(text[i]))) ++i;
      std::string_view word = text.substr(start, i - start);
      std::string upper = Upper(word);
      if (Keywords().contains(upper)) {
        push(TokenKind::kKeyword, start, i, upper);
      } else {
        push(TokenKind::kIdentifier, start, i, std::string(word));
      }
      continue;
    }
    if (std::isdigit(c) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      if (c == '0' && i + 1 < n && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
        i += 2;
        while (i < n && std::isxdigit(static_cast<unsigned char>(text[i]))) ++i;
      } else {
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i < n && text[i] == '.') {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
        if (i < n && (text[i] == 'e' || text[i] == 'E')) {
          size_t save = i++;
          if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
          if (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
          } else {
            i = save;
          }
        }
      }
      if (i < n && IsIdentStart(static_cast<unsigned char>(text[i]))) {
        return fail(start, "malformed number");
      }
      push(TokenKind::kNumber, start, i, std::string(text.substr(start, i - start)));
      continue;
    }
    if (c == '\'') {
      ++i;
      std::string value;
      while (true) {
        if (i >= n) return fail(start, "unterminated string literal");
        if (text[i] == '\'') {
          if (i + 1 < n && text[i + 1] == '\'') {
            value += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value += text[i++];
      }
      push(TokenKind::kString, start, i, std::move(value));
      continue;
    }
    if (c == '"' || c == '`' || c == '[') {
      char close = c == '[' ? ']' : static_cast<char>(c);
      ++i;
      std::string value;
      while (true) {
        if (i >= n) return fail(start, "unterminated quoted identifier");
        if (text[i] == close) {
          if (close != ']' && i + 1 < n && text[i + 1] == close) {
            value += close;
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value += text[i++];
      }
      push(TokenKind::kQuotedIdentifier, start, i, std::move(value));
      continue;
    }
    if (c == '?' || c == ':' || c == '@' || c == '$') {
      ++i;
      while (i < n && IsIdentPart(static_cast<unsigned char>(text[i]))) ++i;
      push(TokenKind::kParameter, start, i, std::string(text.substr(start, i - start)));
      continue;
    }
    switch (c) {
      case '(':
        push(TokenKind::kLeftParen, start, ++i, "(");
        continue;
      case ')':
        push(TokenKind::kRightParen, start, ++i, ")");
        continue;
      case ',':
        push(TokenKind::kComma, start, ++i, ",");
        continue;
      case '.':
        push(TokenKind::kDot, start, ++i, ".");
        continue;
      case ';':
        push(TokenKind::kSemicolon, start, ++i, ";");
        continue;
      default:
        break;
    }
    // Operators, longest match first.
    static constexpr std::array<std::string_view, 21> kOperators = {
        "->>", "==", "!=", "<>", "<=", ">=", "||", "<<", ">>", "->", "=",
        "<",   ">",  "+",  "-",  "*",  "/",  "%",  "&",  "|",  "~"};
    bool matched = false;
    for (std::string_view op : kOperators) {
      if (text.substr(i, op.size()) == op) {
        i += op.size();
        push(TokenKind::kOperator, start, i, std::string(op));
        matched = true;
        break;
      }
    }
    if (!matched) {
      return fail(start, std::string("unexpected character '") +
                             static_cast<char>(c) + "'");
    }
  }
  return result;
}

}  // namespace ttq::sql
