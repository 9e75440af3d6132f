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

#include <gtest/gtest.h>

namespace ttq::sql {
namespace {

std::vector<TokenKind> Kinds(const LexResult& r) {
  std::vector<TokenKind> out;
  for (const Token& t : r.tokens) out.push_back(t.kind);
  return out;
}

TEST(LexerTest, BasicSelect) {
  LexResult r = Lex("select a, b from t where x >= 10;");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(Kinds(r),
            (std::vector<TokenKind>{
                TokenKind::kKeyword, TokenKind::kIdentifier, TokenKind::kComma,
                TokenKind::kIdentifier, TokenKind::kKeyword,
                TokenKind::kIdentifier, TokenKind::kKeyword,
                TokenKind::kIdentifier, TokenKind::kOperator,
                TokenKind::kNumber, TokenKind::kSemicolon}));
  EXPECT_EQ(r.tokens[0].value, "SELECT");
  EXPECT_EQ(r.tokens[8].text, ">=");
}

TEST(LexerTest, QuotedIdentifiersAreUnquoted) {
  LexResult r = Lex(R"(SELECT "Sub""ID", `x`, [y z] FROM t)");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.tokens[1].kind, TokenKind::kQuotedIdentifier);
  EXPECT_EQ(r.tokens[1].value, "Sub\"ID");
  EXPECT_EQ(r.tokens[3].value, "x");
  EXPECT_EQ(r.tokens[5].value, "y z");
}

TEST(LexerTest, StringsKeepQuotes) {
  LexResult r = Lex("SELECT 'it''s'");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.tokens[1].kind, TokenKind::kString);
  EXPECT_EQ(r.tokens[1].text, "'it''s'");
}

TEST(LexerTest, CommentsAreDropped) {
  LexResult r = Lex("SELECT 1 -- trailing\n/* block */ + 2");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.tokens.size(), 4u);
}

TEST(LexerTest, NumbersAndBlobs) {
  LexResult r = Lex("SELECT 1.5e3, .5, 0x1F, X'AB'");
  ASSERT_FALSE(r.error);
  EXPECT_EQ(r.tokens[1].kind, TokenKind::kNumber);
  EXPECT_EQ(r.tokens[3].kind, TokenKind::kNumber);
  EXPECT_EQ(r.tokens[5].kind, TokenKind::kNumber);
  EXPECT_EQ(r.tokens[7].kind, TokenKind::kBlob);
}

TEST(LexerTest, Parameters) {
  LexResult r = Lex("SELECT ?, ?2, :name, @v, $w");
  ASSERT_FALSE(r.error);
  int params = 0;
  for (const Token& t : r.tokens) params += t.kind == TokenKind::kParameter;
  EXPECT_EQ(params, 5);
}

TEST(LexerTest, Errors) {
  EXPECT_TRUE(Lex("SELECT 'open").error);
  EXPECT_TRUE(Lex("SELECT /* open").error);
  EXPECT_TRUE(Lex("SELECT \"open").error);
}

TEST(LexerTest, KeywordsAreCaseInsensitive) {
  EXPECT_TRUE(IsKeyword("select"));
  EXPECT_TRUE(IsKeyword("Where"));
  EXPECT_FALSE(IsKeyword("employees"));
}

TEST(LexerTest, BareIdentifiers) {
  EXPECT_TRUE(IsBareIdentifier("first_name"));
  EXPECT_TRUE(IsBareIdentifier("SubjectID"));
  EXPECT_FALSE(IsBareIdentifier("has space"));
  EXPECT_FALSE(IsBareIdentifier("1abc"));
  EXPECT_FALSE(IsBareIdentifier("select"));
  EXPECT_FALSE(IsBareIdentifier(""));
}

TEST(LexerTest, OffsetsPointIntoInput) {
  std::string text = "SELECT  name FROM t";
  LexResult r = Lex(text);
  ASSERT_FALSE(r.error);
  EXPECT_EQ(text.substr(r.tokens[1].offset, 4), "name");
}

}  // namespace
}  // namespace ttq::sql
