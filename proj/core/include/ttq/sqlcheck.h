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

#ifndef TTQ_SQLCHECK_H_
#define TTQ_SQLCHECK_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttq/database.h"
#include "ttq/suite.h"

namespace ttq {

struct CanonicalQuery {
  enum class Status { kOk, kParseError };

  std::string original;
  std::string canonical;  // empty on parse error
  Status status = Status::kOk;
  std::string detail;     // parser message on error

  bool ok() const { return status == Status::kOk; }
};

// Drops comments and trailing semicolons, collapses whitespace outside
// literals, uppercases keywords, and writes identifiers bare when they can
// be, double-quoted otherwise. Idempotent on its own output.
CanonicalQuery Canonicalize(std::string_view query);

struct ResultFingerprint {
  int column_count = 0;
  size_t row_count = 0;
  std::string multiset_digest;  // order-insensitive
  std::string sequence_digest;  // order-sensitive
  // Normalized row encodings, in result order.
  std::vector<std::string> rows;

  bool Matches(const ResultFingerprint& other, bool order_sensitive) const;

  friend bool operator==(const ResultFingerprint&,
                         const ResultFingerprint&) = default;
};

// Cell normalization: NULL is its own sentinel; integers (and reals with an
// exact integral value) compare exactly; other reals are rounded to 9
// significant digits; text and blobs compare byte-wise.
std::string EncodeCell(const Cell& cell);

ResultFingerprint Fingerprint(const QueryResult& result);

// Executes one read-only query. Mutations are rejected before reaching the
// engine. Throws QueryError.
ResultFingerprint Execute(const Database& db, std::string_view query,
                          const QueryLimits& limits = {});

enum class VerdictStatus {
  kEquivalent,
  kNotEquivalent,
  kGenParseError,
  kGenExecError,
};

std::string_view VerdictName(VerdictStatus status);
std::optional<VerdictStatus> ParseVerdict(std::string_view name);

struct EquivalenceVerdict {
  VerdictStatus status = VerdictStatus::kNotEquivalent;
  std::optional<ResultFingerprint> generated;
  std::optional<ResultFingerprint> gold;
  std::string diagnostics;

  bool correct() const { return status == VerdictStatus::kEquivalent; }
};

// Provisions a private database from `fixture`, runs both queries and
// compares fingerprints: sequence digests when `order_sensitive`, multiset
// digests otherwise. Throws Error if the gold query fails (a suite bug).
EquivalenceVerdict Equivalent(const DatabaseFixture& fixture,
                              std::string_view generated,
                              std::string_view gold, bool order_sensitive,
                              const QueryLimits& limits = {});

// Same comparison against an already provisioned read-only database.
EquivalenceVerdict Equivalent(const Database& db, std::string_view generated,
                              std::string_view gold, bool order_sensitive,
                              const QueryLimits& limits = {});

}  // namespace ttq

#endif  // TTQ_SQLCHECK_H_
