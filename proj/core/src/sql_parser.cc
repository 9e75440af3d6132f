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

#include <algorithm>
#include <initializer_list>
#include <unordered_set>

namespace ttq::sql {

namespace {

const std::unordered_set<std::string_view>& MutationKeywords() {
  static const std::unordered_set<std::string_view> kWords = {
      "INSERT",  "UPDATE",  "DELETE",    "REPLACE",  "CREATE",
      "DROP",    "ALTER",   "ATTACH",    "DETACH",   "PRAGMA",
      "VACUUM",  "REINDEX", "ANALYZE",   "BEGIN",    "COMMIT",
      "ROLLBACK", "SAVEPOINT", "RELEASE", "END",     "EXPLAIN",
  };
  return kWords;
}

struct SyntaxError {
  std::string message;
};

struct MutationFound {};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  // Parses one statement starting at the current position.
  void Statement() {
    if (AtMutationKeyword()) throw MutationFound{};
    if (PeekKeyword("WITH")) {
      WithClause();
      if (AtMutationKeyword()) throw MutationFound{};
    }
    SelectStatement(/*top=*/true);
  }

  bool top_level_order_by() const { return top_level_order_by_; }
  size_t position() const { return pos_; }

 private:
  // --- token helpers ---

  const Token* Peek(size_t ahead = 0) const {
    size_t at = pos_ + ahead;
    return at < tokens_.size() ? &tokens_[at] : nullptr;
  }

  bool PeekKind(TokenKind kind, size_t ahead = 0) const {
    const Token* t = Peek(ahead);
    return t && t->kind == kind;
  }

  bool PeekKeyword(std::string_view word, size_t ahead = 0) const {
    const Token* t = Peek(ahead);
    return t && t->kind == TokenKind::kKeyword && t->value == word;
  }

  bool PeekOperator(std::string_view op) const {
    const Token* t = Peek();
    return t && t->kind == TokenKind::kOperator && t->value == op;
  }

  bool AtMutationKeyword() const {
    const Token* t = Peek();
    return t && t->kind == TokenKind::kKeyword &&
           MutationKeywords().contains(t->value);
  }

  bool AcceptKeyword(std::string_view word) {
    if (!PeekKeyword(word)) return false;
    ++pos_;
    return true;
  }

  bool AcceptKind(TokenKind kind) {
    if (!PeekKind(kind)) return false;
    ++pos_;
    return true;
  }

  bool AcceptOperator(std::initializer_list<std::string_view> ops) {
    const Token* t = Peek();
    if (!t || t->kind != TokenKind::kOperator) return false;
    if (std::find(ops.begin(), ops.end(), t->value) == ops.end()) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void Fail(std::string_view expected) const {
    const Token* t = Peek();
    std::string where =
        t ? "near \"" + t->text + "\" at offset " + std::to_string(t->offset)
          : std::string("at end of input");
    throw SyntaxError{"syntax error " + where + ": expected " +
                      std::string(expected)};
  }

  void ExpectKeyword(std::string_view word) {
    if (!AcceptKeyword(word)) Fail(word);
  }

  void ExpectKind(TokenKind kind, std::string_view what) {
    if (!AcceptKind(kind)) Fail(what);
  }

  bool PeekName(size_t ahead = 0) const {
    const Token* t = Peek(ahead);
    if (!t) return false;
    if (t->kind == TokenKind::kIdentifier ||
        t->kind == TokenKind::kQuotedIdentifier) {
      return true;
    }
    return t->kind == TokenKind::kKeyword && !IsReservedKeyword(t->value);
  }

  void Name(std::string_view what = "identifier") {
    if (!PeekName()) Fail(what);
    ++pos_;
  }

  bool PeekSelectStart(size_t ahead = 0) const {
    return PeekKeyword("SELECT", ahead) || PeekKeyword("WITH", ahead) ||
           PeekKeyword("VALUES", ahead);
  }

  // --- statements ---

  void WithClause() {
    ExpectKeyword("WITH");
    AcceptKeyword("RECURSIVE");
    do {
      Name("common table name");
      if (AcceptKind(TokenKind::kLeftParen)) {
        NameList();
        ExpectKind(TokenKind::kRightParen, ")");
      }
      ExpectKeyword("AS");
      if (AcceptKeyword("NOT")) {
        ExpectKeyword("MATERIALIZED");
      } else {
        AcceptKeyword("MATERIALIZED");
      }
      ExpectKind(TokenKind::kLeftParen, "(");
      SubSelect();
      ExpectKind(TokenKind::kRightParen, ")");
    } while (AcceptKind(TokenKind::kComma));
  }

  void NameList() {
    do {
      Name();
    } while (AcceptKind(TokenKind::kComma));
  }

  // A nested select, optionally with its own WITH clause.
  void SubSelect() {
    if (PeekKeyword("WITH")) WithClause();
    SelectStatement(/*top=*/false);
  }

  void SelectStatement(bool top) {
    SelectCore();
    while (true) {
      if (AcceptKeyword("UNION")) {
        AcceptKeyword("ALL");
      } else if (!AcceptKeyword("INTERSECT") && !AcceptKeyword("EXCEPT")) {
        break;
      }
      SelectCore();
    }
    if (AcceptKeyword("ORDER")) {
      ExpectKeyword("BY");
      if (top) top_level_order_by_ = true;
      OrderingTerms();
    }
    if (AcceptKeyword("LIMIT")) {
      Expr();
      if (AcceptKeyword("OFFSET") || AcceptKind(TokenKind::kComma)) Expr();
    }
  }

  void SelectCore() {
    if (AcceptKeyword("VALUES")) {
      do {
        ExpectKind(TokenKind::kLeftParen, "(");
        ExprList();
        ExpectKind(TokenKind::kRightParen, ")");
      } while (AcceptKind(TokenKind::kComma));
      return;
    }
    ExpectKeyword("SELECT");
    if (!AcceptKeyword("DISTINCT")) AcceptKeyword("ALL");
    do {
      ResultColumn();
    } while (AcceptKind(TokenKind::kComma));
    if (AcceptKeyword("FROM")) JoinSource();
    if (AcceptKeyword("WHERE")) Expr();
    if (AcceptKeyword("GROUP")) {
      ExpectKeyword("BY");
      ExprList();
    }
    if (AcceptKeyword("HAVING")) Expr();
    if (AcceptKeyword("WINDOW")) {
      do {
        Name("window name");
        ExpectKeyword("AS");
        WindowDefinition();
      } while (AcceptKind(TokenKind::kComma));
    }
  }

  void ResultColumn() {
    if (AcceptOperator({"*"})) return;
    if (PeekName() && PeekKind(TokenKind::kDot, 1)) {
      const Token* star = Peek(2);
      if (star && star->kind == TokenKind::kOperator && star->value == "*") {
        pos_ += 3;
        return;
      }
    }
    Expr();
    OptionalAlias(/*allow_string=*/true);
  }

  void OptionalAlias(bool allow_string) {
    if (AcceptKeyword("AS")) {
      if (allow_string && AcceptKind(TokenKind::kString)) return;
      Name("alias");
      return;
    }
    if (PeekName() || (allow_string && PeekKind(TokenKind::kString))) ++pos_;
  }

  void JoinSource() {
    TableOrSubquery();
    while (true) {
      if (AcceptKind(TokenKind::kComma)) {
        TableOrSubquery();
        continue;
      }
      bool natural = AcceptKeyword("NATURAL");
      bool join_op = false;
      if (AcceptKeyword("LEFT") || AcceptKeyword("RIGHT") ||
          AcceptKeyword("FULL")) {
        AcceptKeyword("OUTER");
        join_op = true;
      } else if (AcceptKeyword("INNER") || AcceptKeyword("CROSS")) {
        join_op = true;
      }
      if (!AcceptKeyword("JOIN")) {
        if (natural || join_op) Fail("JOIN");
        break;
      }
      TableOrSubquery();
      if (AcceptKeyword("ON")) {
        Expr();
      } else if (AcceptKeyword("USING")) {
        ExpectKind(TokenKind::kLeftParen, "(");
        NameList();
        ExpectKind(TokenKind::kRightParen, ")");
      }
    }
  }

  void TableOrSubquery() {
    if (AcceptKind(TokenKind::kLeftParen)) {
      if (PeekSelectStart()) {
        SubSelect();
      } else {
        JoinSource();
      }
      ExpectKind(TokenKind::kRightParen, ")");
      OptionalAlias(/*allow_string=*/false);
      return;
    }
    Name("table name");
    if (AcceptKind(TokenKind::kDot)) Name("table name");
    if (AcceptKind(TokenKind::kLeftParen)) {  // table-valued function
      if (!PeekKind(TokenKind::kRightParen)) ExprList();
      ExpectKind(TokenKind::kRightParen, ")");
    }
    OptionalAlias(/*allow_string=*/false);
    if (AcceptKeyword("INDEXED")) {
      ExpectKeyword("BY");
      Name("index name");
    } else if (PeekKeyword("NOT") && PeekKeyword("INDEXED", 1)) {
      pos_ += 2;
    }
  }

  void OrderingTerms() {
    do {
      Expr();
      if (!AcceptKeyword("ASC")) AcceptKeyword("DESC");
      if (AcceptKeyword("NULLS")) {
        if (!AcceptKeyword("FIRST") && !AcceptKeyword("LAST")) {
          Fail("FIRST or LAST");
        }
      }
    } while (AcceptKind(TokenKind::kComma));
  }

  void ExprList() {
    do {
      Expr();
    } while (AcceptKind(TokenKind::kComma));
  }

  // --- expressions, lowest precedence first ---

  void Expr() { OrExpr(); }

  void OrExpr() {
    AndExpr();
    while (AcceptKeyword("OR")) AndExpr();
  }

  void AndExpr() {
    NotExpr();
    while (AcceptKeyword("AND")) NotExpr();
  }

  void NotExpr() {
    if (PeekKeyword("NOT") && !PeekKeyword("EXISTS", 1)) {
      ++pos_;
      NotExpr();
      return;
    }
    EqualityExpr();
  }

  void EqualityExpr() {
    ComparisonExpr();
    while (true) {
      if (AcceptOperator({"=", "==", "!=", "<>"})) {
        ComparisonExpr();
        continue;
      }
      if (AcceptKeyword("IS")) {
        AcceptKeyword("NOT");
        if (AcceptKeyword("DISTINCT")) ExpectKeyword("FROM");
        ComparisonExpr();
        continue;
      }
      if (AcceptKeyword("ISNULL") || AcceptKeyword("NOTNULL")) continue;
      if (PeekKeyword("NOT") && PeekKeyword("NULL", 1)) {
        pos_ += 2;
        continue;
      }
      size_t save = pos_;
      AcceptKeyword("NOT");
      if (AcceptKeyword("IN")) {
        InTarget();
        continue;
      }
      if (AcceptKeyword("LIKE") || AcceptKeyword("GLOB") ||
          AcceptKeyword("REGEXP") || AcceptKeyword("MATCH")) {
        ComparisonExpr();
        if (AcceptKeyword("ESCAPE")) ComparisonExpr();
        continue;
      }
      if (AcceptKeyword("BETWEEN")) {
        // The AND belongs to BETWEEN, so parse the lower bound above AND.
        ComparisonExpr();
        ExpectKeyword("AND");
        ComparisonExpr();
        continue;
      }
      pos_ = save;
      break;
    }
  }

  void InTarget() {
    if (AcceptKind(TokenKind::kLeftParen)) {
      if (PeekSelectStart()) {
        SubSelect();
      } else if (!PeekKind(TokenKind::kRightParen)) {
        ExprList();
      }
      ExpectKind(TokenKind::kRightParen, ")");
      return;
    }
    Name("table name");
    if (AcceptKind(TokenKind::kDot)) Name("table name");
  }

  void ComparisonExpr() {
    BitExpr();
    while (AcceptOperator({"<", "<=", ">", ">="})) BitExpr();
  }

  void BitExpr() {
    AddExpr();
    while (AcceptOperator({"&", "|", "<<", ">>"})) AddExpr();
  }

  void AddExpr() {
    MulExpr();
    while (AcceptOperator({"+", "-"})) MulExpr();
  }

  void MulExpr() {
    ConcatExpr();
    while (AcceptOperator({"*", "/", "%"})) ConcatExpr();
  }

  void ConcatExpr() {
    UnaryExpr();
    while (AcceptOperator({"||", "->", "->>"})) UnaryExpr();
  }

  void UnaryExpr() {
    if (AcceptOperator({"-", "+", "~"})) {
      UnaryExpr();
      return;
    }
    CollateExpr();
  }

  void CollateExpr() {
    Primary();
    while (AcceptKeyword("COLLATE")) Name("collation name");
  }

  void Primary() {
    const Token* t = Peek();
    if (!t) Fail("expression");
    switch (t->kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kBlob:
        ++pos_;
        return;
      case TokenKind::kParameter:
        throw SyntaxError{"bound parameters are not allowed: " + t->text};
      case TokenKind::kLeftParen:
        ++pos_;
        if (PeekSelectStart()) {
          SubSelect();
        } else {
          ExprList();
        }
        ExpectKind(TokenKind::kRightParen, ")");
        return;
      case TokenKind::kKeyword:
        KeywordPrimary(*t);
        return;
      case TokenKind::kIdentifier:
      case TokenKind::kQuotedIdentifier:
        NamePrimary();
        return;
      default:
        Fail("expression");
    }
  }

  void KeywordPrimary(const Token& t) {
    if (t.value == "NULL" || t.value == "CURRENT_DATE" ||
        t.value == "CURRENT_TIME" || t.value == "CURRENT_TIMESTAMP") {
      ++pos_;
      return;
    }
    if (t.value == "CAST") {
      ++pos_;
      ExpectKind(TokenKind::kLeftParen, "(");
      Expr();
      ExpectKeyword("AS");
      TypeName();
      ExpectKind(TokenKind::kRightParen, ")");
      return;
    }
    if (t.value == "CASE") {
      ++pos_;
      if (!PeekKeyword("WHEN")) Expr();
      if (!PeekKeyword("WHEN")) Fail("WHEN");
      while (AcceptKeyword("WHEN")) {
        Expr();
        ExpectKeyword("THEN");
        Expr();
      }
      if (AcceptKeyword("ELSE")) Expr();
      ExpectKeyword("END");
      return;
    }
    if (t.value == "NOT" || t.value == "EXISTS") {
      AcceptKeyword("NOT");
      ExpectKeyword("EXISTS");
      ExpectKind(TokenKind::kLeftParen, "(");
      SubSelect();
      ExpectKind(TokenKind::kRightParen, ")");
      return;
    }
    // Keywords that double as scalar function names.
    if ((t.value == "REPLACE" || t.value == "LIKE" || t.value == "GLOB") &&
        PeekKind(TokenKind::kLeftParen, 1)) {
      ++pos_;
      FunctionCall();
      return;
    }
    if (!IsReservedKeyword(t.value)) {
      NamePrimary();
      return;
    }
    Fail("expression");
  }

  void NamePrimary() {
    Name();
    if (PeekKind(TokenKind::kLeftParen)) {
      FunctionCall();
      return;
    }
    // column, table.column or schema.table.column
    for (int parts = 0; parts < 2 && AcceptKind(TokenKind::kDot); ++parts) {
      Name("column name");
    }
  }

  void FunctionCall() {
    ExpectKind(TokenKind::kLeftParen, "(");
    if (AcceptOperator({"*"})) {
      // count(*)
    } else if (!PeekKind(TokenKind::kRightParen)) {
      AcceptKeyword("DISTINCT");
      ExprList();
      if (AcceptKeyword("ORDER")) {
        ExpectKeyword("BY");
        OrderingTerms();
      }
    }
    ExpectKind(TokenKind::kRightParen, ")");
    if (AcceptKeyword("FILTER")) {
      ExpectKind(TokenKind::kLeftParen, "(");
      ExpectKeyword("WHERE");
      Expr();
      ExpectKind(TokenKind::kRightParen, ")");
    }
    if (AcceptKeyword("OVER")) {
      if (PeekKind(TokenKind::kLeftParen)) {
        WindowDefinition();
      } else {
        Name("window name");
      }
    }
  }

  void WindowDefinition() {
    ExpectKind(TokenKind::kLeftParen, "(");
    if (PeekName() && !PeekKeyword("PARTITION") && !PeekKeyword("RANGE") &&
        !PeekKeyword("ROWS") && !PeekKeyword("GROUPS")) {
      Name("base window name");
    }
    if (AcceptKeyword("PARTITION")) {
      ExpectKeyword("BY");
      ExprList();
    }
    if (AcceptKeyword("ORDER")) {
      ExpectKeyword("BY");
      OrderingTerms();
    }
    if (AcceptKeyword("RANGE") || AcceptKeyword("ROWS") ||
        AcceptKeyword("GROUPS")) {
      if (AcceptKeyword("BETWEEN")) {
        FrameBound();
        ExpectKeyword("AND");
        FrameBound();
      } else {
        FrameBound();
      }
      if (AcceptKeyword("EXCLUDE")) {
        if (AcceptKeyword("NO")) {
          ExpectKeyword("OTHERS");
        } else if (AcceptKeyword("CURRENT")) {
          ExpectKeyword("ROW");
        } else if (!AcceptKeyword("GROUP") && !AcceptKeyword("TIES")) {
          Fail("frame exclusion");
        }
      }
    }
    ExpectKind(TokenKind::kRightParen, ")");
  }

  void FrameBound() {
    if (AcceptKeyword("UNBOUNDED")) {
      if (!AcceptKeyword("PRECEDING") && !AcceptKeyword("FOLLOWING")) {
        Fail("PRECEDING or FOLLOWING");
      }
      return;
    }
    if (AcceptKeyword("CURRENT")) {
      ExpectKeyword("ROW");
      return;
    }
    // Bound expressions stop short of AND.
    ComparisonExpr();
    if (!AcceptKeyword("PRECEDING") && !AcceptKeyword("FOLLOWING")) {
      Fail("PRECEDING or FOLLOWING");
    }
  }

  void TypeName() {
    Name("type name");
    while (PeekName()) ++pos_;
    if (AcceptKind(TokenKind::kLeftParen)) {
      AcceptOperator({"+", "-"});
      ExpectKind(TokenKind::kNumber, "number");
      if (AcceptKind(TokenKind::kComma)) {
        AcceptOperator({"+", "-"});
        ExpectKind(TokenKind::kNumber, "number");
      }
      ExpectKind(TokenKind::kRightParen, ")");
    }
  }

  const std::vector<Token>& tokens_;
  size_t pos_ = 0;
  bool top_level_order_by_ = false;
};

}  // namespace

bool LooksLikeMutation(std::string_view text) {
  LexResult lexed = Lex(text);
  if (lexed.tokens.empty()) return false;
  const Token& first = lexed.tokens.front();
  if (first.kind == TokenKind::kKeyword &&
      MutationKeywords().contains(first.value)) {
    return true;
  }
  // WITH ... DELETE/INSERT/UPDATE: any mutation keyword at statement level
  // after a CTE list.
  if (first.kind == TokenKind::kKeyword && first.value == "WITH") {
    int depth = 0;
    for (const Token& t : lexed.tokens) {
      if (t.kind == TokenKind::kLeftParen) ++depth;
      if (t.kind == TokenKind::kRightParen) --depth;
      if (depth == 0 && t.kind == TokenKind::kKeyword &&
          (t.value == "DELETE" || t.value == "INSERT" ||
           t.value == "UPDATE" || t.value == "REPLACE")) {
        return true;
      }
      if (t.kind == TokenKind::kSemicolon) break;
    }
  }
  return false;
}

ParseResult Parse(std::string_view text) {
  ParseResult result;
  LexResult lexed = Lex(text);
  if (lexed.error) {
    result.error = "lexical error: " + *lexed.error;
    return result;
  }
  std::vector<Token>& tokens = lexed.tokens;
  size_t first = 0;
  while (first < tokens.size() && tokens[first].kind == TokenKind::kSemicolon) {
    ++first;
  }
  tokens.erase(tokens.begin(), tokens.begin() + static_cast<long>(first));
  if (tokens.empty()) {
    result.error = "empty query";
    return result;
  }
  // Cut at the first top-level semicolon.
  size_t end = tokens.size();
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::kSemicolon) {
      end = i;
      break;
    }
  }
  for (size_t i = end; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kSemicolon) {
      result.error = "extra statements after the first query (near \"" +
                     tokens[i].text + "\" at offset " +
                     std::to_string(tokens[i].offset) + ")";
      return result;
    }
  }
  std::vector<Token> statement(tokens.begin(),
                               tokens.begin() + static_cast<long>(end));
  Parser parser(statement);
  try {
    parser.Statement();
  } catch (const MutationFound&) {
    result.error = "mutation statements are not queries";
    result.mutation = true;
    return result;
  } catch (const SyntaxError& e) {
    result.error = e.message;
    return result;
  }
  if (parser.position() != statement.size()) {
    const Token& t = statement[parser.position()];
    result.error = "syntax error near \"" + t.text + "\" at offset " +
                   std::to_string(t.offset) + ": unexpected token";
    return result;
  }
  ParsedStatement parsed;
  parsed.kind = StatementKind::kQuery;
  parsed.top_level_order_by = parser.top_level_order_by();
  const Token& last = statement.back();
  size_t begin_offset = statement.front().offset;
  parsed.statement_text = std::string(
      text.substr(begin_offset, last.offset + last.text.size() - begin_offset));
  parsed.tokens = std::move(statement);
  result.statement = std::move(parsed);
  return result;
}

}  // namespace ttq::sql
