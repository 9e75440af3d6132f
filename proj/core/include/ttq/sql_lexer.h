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

#ifndef TTQ_SQL_LEXER_H_
#define TTQ_SQL_LEXER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ttq::sql {

enum class TokenKind {
  kKeyword,           // value is the uppercased word
  kIdentifier,        // bare word that is not a keyword
  kQuotedIdentifier,  // "x", `x` or [x]; value is the unquoted name
  kString,            // 'x'; text keeps the quotes
  kNumber,
  kBlob,       // X'ABCD'
  kParameter,  // ?, ?1, :name, @name, $name
  kOperator,   // = == != <> < <= > >= + - * / % || & | << >> ~ -> ->>
  kLeftParen,
  kRightParen,
  kComma,
  kDot,
  kSemicolon,
};

struct Token {
  TokenKind kind;
  std::string text;   // as written
  std::string value;  // normalized payload (see TokenKind)
  size_t offset = 0;
};

struct LexResult {
  std::vector<Token> tokens;
  // Set when the input contains an unterminated literal or comment, or a
  // character outside the dialect.
  std::optional<std::string> error;
};

// Comments and whitespace are dropped.
LexResult Lex(std::string_view text);

// True for any word of the engine's keyword list (case-insensitive).
bool IsKeyword(std::string_view word);

// Keywords that can never stand in for an identifier or alias.
bool IsReservedKeyword(std::string_view upper_word);

// True if `name` can be written without quotes: [A-Za-z_][A-Za-z0-9_$]*
// and not a keyword.
bool IsBareIdentifier(std::string_view name);

}  // namespace ttq::sql

#endif  // TTQ_SQL_LEXER_H_
