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

#ifndef TTQ_SQL_PARSER_H_
#define TTQ_SQL_PARSER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttq/sql_lexer.h"

namespace ttq::sql {

enum class StatementKind { kQuery, kMutation };

// Syntax-level view of a single query in the harness dialect: the common
// SELECT core (CTEs, joins, grouping, compound operators, subqueries,
// CASE/CAST, window calls). Semantic checks (tables, columns) are left to
// the engine.
struct ParsedStatement {
  StatementKind kind = StatementKind::kQuery;
  // Tokens of the first statement, without trailing semicolons.
  std::vector<Token> tokens;
  // The outermost select carries ORDER BY.
  bool top_level_order_by = false;
  // Source text of the first statement.
  std::string statement_text;
};

struct ParseResult {
  std::optional<ParsedStatement> statement;
  std::string error;  // set iff !statement
  bool mutation = false;

  bool ok() const { return statement.has_value(); }
};

// Rejects mutations, parameters, empty input and anything after the first
// statement other than semicolons.
ParseResult Parse(std::string_view text);

// Leading keyword classification only; used to refuse writes before any
// grammar check.
bool LooksLikeMutation(std::string_view text);

}  // namespace ttq::sql

#endif  // TTQ_SQL_PARSER_H_
