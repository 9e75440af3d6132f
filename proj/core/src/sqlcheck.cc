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

#include "ttq/sqlcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ttq/digest.h"
#include "ttq/error.h"
#include "ttq/sql_parser.h"

namespace ttq {

namespace {

using sql::Token;
using sql::TokenKind;

std::string QuoteIdentifier(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string RenderToken(const Token& t) {
  switch (t.kind) {
    case TokenKind::kKeyword:
    case TokenKind::kBlob:
    case TokenKind::kOperator:
      return t.value;
    case TokenKind::kQuotedIdentifier:
      return sql::IsBareIdentifier(t.value) ? t.value
                                            : QuoteIdentifier(t.value);
    default:
      return t.text;
  }
}

bool IsNameLike(const Token& t) {
  return t.kind == TokenKind::kIdentifier ||
         t.kind == TokenKind::kQuotedIdentifier;
}

std::string RenderTokens(const std::vector<Token>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (i > 0) {
      const Token& prev = tokens[i - 1];
      bool glue = t.kind == TokenKind::kComma ||
                  t.kind == TokenKind::kRightParen ||
                  t.kind == TokenKind::kDot ||
                  prev.kind == TokenKind::kLeftParen ||
                  prev.kind == TokenKind::kDot ||
                  (t.kind == TokenKind::kLeftParen && IsNameLike(prev));
      if (!glue) out += ' ';
    }
    out += RenderToken(t);
  }
  return out;
}

constexpr double kTwoTo63 = 9223372036854775808.0;

std::string DigestRows(int column_count, const std::vector<std::string>& rows) {
  std::string buffer = "cols=" + std::to_string(column_count) + "\n";
  for (const std::string& row : rows) {
    buffer += std::to_string(row.size());
    buffer += ':';
    buffer += row;
    buffer += '\n';
  }
  return Sha256Hex(buffer);
}

}  // namespace

CanonicalQuery Canonicalize(std::string_view query) {
  CanonicalQuery out;
  out.original = std::string(query);
  sql::ParseResult parsed = sql::Parse(query);
  if (!parsed.ok()) {
    out.status = CanonicalQuery::Status::kParseError;
    out.detail = parsed.error;
    return out;
  }
  out.canonical = RenderTokens(parsed.statement->tokens);
  return out;
}

std::string EncodeCell(const Cell& cell) {
  switch (cell.type) {
    case Cell::Type::kNull:
      return "N";
    case Cell::Type::kInteger:
      return "I" + std::to_string(cell.integer);
    case Cell::Type::kReal: {
      double v = cell.real;
      if (std::isnan(v)) return "Rnan";
      if (std::isinf(v)) return v > 0 ? "Rinf" : "R-inf";
      if (v == std::trunc(v) && v >= -kTwoTo63 && v < kTwoTo63) {
        return "I" + std::to_string(static_cast<int64_t>(v));
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      return std::string("R") + buf;
    }
    case Cell::Type::kText:
      return "T" + std::to_string(cell.bytes.size()) + ":" + cell.bytes;
    case Cell::Type::kBlob: {
      static constexpr char kHex[] = "0123456789abcdef";
      std::string hex;
      for (unsigned char c : cell.bytes) {
        hex += kHex[c >> 4];
        hex += kHex[c & 0xf];
      }
      return "B" + std::to_string(cell.bytes.size()) + ":" + hex;
    }
  }
  return "?";
}

ResultFingerprint Fingerprint(const QueryResult& result) {
  ResultFingerprint fp;
  fp.column_count = result.column_count;
  fp.row_count = result.rows.size();
  fp.rows.reserve(result.rows.size());
  for (const Row& row : result.rows) {
    std::string encoded;
    for (const Cell& cell : row) {
      encoded += EncodeCell(cell);
      encoded += '|';
    }
    fp.rows.push_back(std::move(encoded));
  }
  fp.sequence_digest = DigestRows(fp.column_count, fp.rows);
  std::vector<std::string> sorted = fp.rows;
  std::sort(sorted.begin(), sorted.end());
  fp.multiset_digest = DigestRows(fp.column_count, sorted);
  return fp;
}

bool ResultFingerprint::Matches(const ResultFingerprint& other,
                                bool order_sensitive) const {
  if (column_count != other.column_count || row_count != other.row_count) {
    return false;
  }
  return order_sensitive ? sequence_digest == other.sequence_digest
                         : multiset_digest == other.multiset_digest;
}

ResultFingerprint Execute(const Database& db, std::string_view query,
                          const QueryLimits& limits) {
  if (sql::LooksLikeMutation(query)) {
    throw QueryError(QueryError::Kind::kMutationRejected,
                     "mutation statements are rejected");
  }
  return Fingerprint(db.Query(query, limits));
}

std::string_view VerdictName(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kEquivalent:
      return "equivalent";
    case VerdictStatus::kNotEquivalent:
      return "not-equivalent";
    case VerdictStatus::kGenParseError:
      return "gen-parse-error";
    case VerdictStatus::kGenExecError:
      return "gen-exec-error";
  }
  return "unknown";
}

std::optional<VerdictStatus> ParseVerdict(std::string_view name) {
  for (VerdictStatus s :
       {VerdictStatus::kEquivalent, VerdictStatus::kNotEquivalent,
        VerdictStatus::kGenParseError, VerdictStatus::kGenExecError}) {
    if (VerdictName(s) == name) return s;
  }
  return std::nullopt;
}

EquivalenceVerdict Equivalent(const Database& db, std::string_view generated,
                              std::string_view gold, bool order_sensitive,
                              const QueryLimits& limits) {
  EquivalenceVerdict verdict;
  sql::ParseResult gold_parsed = sql::Parse(gold);
  if (!gold_parsed.ok()) {
    throw Error("gold query does not parse: " + gold_parsed.error);
  }
  try {
    verdict.gold = Execute(db, gold_parsed.statement->statement_text, limits);
  } catch (const QueryError& e) {
    throw Error(std::string("gold query failed: ") + e.what());
  }

  sql::ParseResult parsed = sql::Parse(generated);
  if (!parsed.ok()) {
    verdict.status = VerdictStatus::kGenParseError;
    verdict.diagnostics = parsed.error;
    return verdict;
  }
  try {
    verdict.generated =
        Execute(db, parsed.statement->statement_text, limits);
  } catch (const QueryError& e) {
    verdict.status = VerdictStatus::kGenExecError;
    verdict.diagnostics = e.what();
    return verdict;
  }
  if (verdict.generated->Matches(*verdict.gold, order_sensitive)) {
    verdict.status = VerdictStatus::kEquivalent;
  } else {
    verdict.status = VerdictStatus::kNotEquivalent;
    verdict.diagnostics =
        "result mismatch: generated " +
        std::to_string(verdict.generated->column_count) + " cols x " +
        std::to_string(verdict.generated->row_count) + " rows, gold " +
        std::to_string(verdict.gold->column_count) + " cols x " +
        std::to_string(verdict.gold->row_count) + " rows";
  }
  return verdict;
}

EquivalenceVerdict Equivalent(const DatabaseFixture& fixture,
                              std::string_view generated,
                              std::string_view gold, bool order_sensitive,
                              const QueryLimits& limits) {
  Database db = Provision(fixture);
  return Equivalent(db, generated, gold, order_sensitive, limits);
}

}  // namespace ttq
