/* Copyright 2026 The Nept Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NEPT_LANG_TOKEN_HPP_
#define NEPT_LANG_TOKEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nept/error.hpp"

namespace nept::lang {

/// Byte offsets into the source, half-open. Synthesized tokens (Indent,
/// Dedent, Eof, and a Newline injected at end of input) carry empty spans.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class TokenKind : std::uint8_t {
  Ident,
  Int,
  Float,
  Str,
  Keyword,  // if elif else for in return not and or True False
  Op,       // & | = == != < > <= >= + - * / . , ( ) [ ] :
  Newline,
  Indent,
  Dedent,
  Eof,
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  Span span;
  /// Raw text for Ident/Int/Float/Keyword/Op; the decoded value for Str;
  /// empty for structural tokens.
  std::string value;
  int line = 1;  // 1-based position of span.begin
  int col = 1;   // 1-based byte column
};

/// Lexing or parsing diagnostic. what() is prefixed with "line:col:".
class ParseError : public Error {
 public:
  ParseError(int line, int col, Span span, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " +
              message),
        line_(line),
        col_(col),
        span_(span),
        message_(message) {}

  int line() const { return line_; }
  int col() const { return col_; }
  Span span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int col_;
  Span span_;
  std::string message_;
};

/// Source size cap; longer programs are rejected up front.
inline constexpr std::size_t kMaxProgramBytes = 64 * 1024;

/// Splits source into tokens with significant indentation. Indent/Dedent
/// pairs are balanced and computed from leading spaces (tabs in indentation
/// are an error). Newlines inside parentheses or brackets are treated as
/// plain whitespace. Token spans are ordered, non-overlapping, and together
/// with whitespace cover the source exactly.
std::vector<Token> tokenize(const std::string& source);

}  // namespace nept::lang

#endif  // NEPT_LANG_TOKEN_HPP_
