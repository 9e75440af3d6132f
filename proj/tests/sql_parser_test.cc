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

#include "ttq/sql_parser.h"

#include <gtest/gtest.h>

namespace ttq::sql {
namespace {

TEST(ParserTest, AcceptsSelectDialect) {
  const char* queries[] = {
      "SELECT 1",
      "SELECT * FROM t",
      "SELECT t.* FROM t AS x",
      "SELECT a FROM t WHERE b IN (1, 2, 3) AND c NOT LIKE 'x%'",
      "SELECT a FROM t WHERE b BETWEEN 1 AND 5 OR c IS NOT NULL",
      "SELECT a, COUNT(*) FROM t GROUP BY a HAVING COUNT(*) > 1",
      "SELECT COUNT(DISTINCT a) FROM t",
      "SELECT a FROM t ORDER BY a DESC NULLS LAST LIMIT 10 OFFSET 5",
      "SELECT a FROM t LIMIT 5, 10",
      "SELECT a FROM t JOIN u ON t.id = u.id LEFT OUTER JOIN v USING (id)",
      "SELECT a FROM t CROSS JOIN u NATURAL JOIN w",
      "SELECT a FROM t, u WHERE t.id = u.id",
      "SELECT a FROM (SELECT a FROM t) sub",
      "SELECT a FROM t WHERE EXISTS (SELECT 1 FROM u WHERE u.a = t.a)",
      "SELECT a FROM t WHERE a = (SELECT MAX(a) FROM t)",
      "SELECT CASE WHEN a > 1 THEN 'big' ELSE 'small' END FROM t",
      "SELECT CASE a WHEN 1 THEN 'one' END FROM t",
      "SELECT CAST(a AS INTEGER), a || 'x', -a, NOT b, ~c FROM t",
      "WITH c AS (SELECT a FROM t) SELECT * FROM c",
      "WITH RECURSIVE n(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM n "
      "WHERE x < 5) SELECT x FROM n",
      "SELECT a FROM t UNION SELECT a FROM u ORDER BY 1",
      "SELECT a FROM t INTERSECT SELECT a FROM u EXCEPT SELECT a FROM w",
      "VALUES (1, 2), (3, 4)",
      "SELECT ROW_NUMBER() OVER (PARTITION BY a ORDER BY b) FROM t",
      "SELECT SUM(a) OVER (ORDER BY b ROWS BETWEEN 1 PRECEDING AND CURRENT "
      "ROW) FROM t",
      "SELECT COUNT(*) FILTER (WHERE a > 1) FROM t",
      "SELECT a COLLATE NOCASE FROM t",
      "SELECT a FROM t WHERE b GLOB 'x*' AND c IS DISTINCT FROM d",
      "SELECT \"Number\" FROM PHONENUMBERS WHERE \"SubjectID\" = 1;",
      "SELECT a FROM t;;",
      "select distinct a from t where a not in (select b from u)",
      "SELECT a FROM t WHERE a IN ()",
      "SELECT x'ab', 1e5, 0x10",
  };
  for (const char* q : queries) {
    ParseResult r = Parse(q);
    EXPECT_TRUE(r.ok()) << q << ": " << r.error;
  }
}

TEST(ParserTest, RejectsMalformed) {
  const char* queries[] = {
      "",
      "   ",
      "SELECT",
      "SELECT FROM t",
      "SELECT a FROM",
      "SELECT a FROM t WHERE",
      "SELECT a,, b FROM t",
      "SELECT (a FROM t",
      "SELECT a FROM t GROUP a",
      "SELEC a FROM t",
      "SELECT a FROM t LIMIT",
      "SELECT a FROM t; SELECT b FROM t",
      "SELECT a FROM t WHERE a = ?",
      "SELECT CASE END FROM t",
  };
  for (const char* q : queries) {
    EXPECT_FALSE(Parse(q).ok()) << q;
  }
}

TEST(ParserTest, FlagsMutations) {
  const char* queries[] = {
      "DELETE FROM t",
      "INSERT INTO t VALUES (1)",
      "UPDATE t SET a = 1",
      "DROP TABLE t",
      "CREATE TABLE x (a)",
      "ATTACH DATABASE 'x' AS y",
      "PRAGMA query_only = 0",
      "WITH c AS (SELECT 1) DELETE FROM t",
  };
  for (const char* q : queries) {
    ParseResult r = Parse(q);
    EXPECT_FALSE(r.ok()) << q;
    EXPECT_TRUE(r.mutation) << q;
    EXPECT_TRUE(LooksLikeMutation(q)) << q;
  }
  EXPECT_FALSE(LooksLikeMutation("SELECT 'DELETE FROM t'"));
}

TEST(ParserTest, TopLevelOrderBy) {
  EXPECT_TRUE(Parse("SELECT a FROM t ORDER BY a").statement->top_level_order_by);
  EXPECT_FALSE(
      Parse("SELECT a FROM (SELECT a FROM t ORDER BY a LIMIT 3)")
          .statement->top_level_order_by);
  EXPECT_FALSE(Parse("SELECT a FROM t WHERE a IN (SELECT b FROM u ORDER BY "
                     "b LIMIT 1)")
                   .statement->top_level_order_by);
  EXPECT_TRUE(Parse("SELECT a FROM t UNION SELECT b FROM u ORDER BY 1")
                  .statement->top_level_order_by);
  EXPECT_FALSE(Parse("SELECT ROW_NUMBER() OVER (ORDER BY a) FROM t")
                   .statement->top_level_order_by);
  EXPECT_TRUE(Parse("WITH c AS (SELECT 1 AS a) SELECT a FROM c ORDER BY a")
                  .statement->top_level_order_by);
}

TEST(ParserTest, StatementTextDropsTrailingSemicolons) {
  ParseResult r = Parse("SELECT 1;  ");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.statement->statement_text, "SELECT 1");
}

}  // namespace
}  // namespace ttq::sql
