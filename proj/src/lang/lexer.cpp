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

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <string_view>

#include "nept/lang/token.hpp"

namespace nept::lang {

namespace {

constexpr std::array<std::string_view, 11> kKeywords = {
    "if", "elif", "else", "for", "in", "return",
    "not", "and", "or", "True", "False"};

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    while (true) {
      if (at_line_start_ && brackets_ == 0) {
        lex_indentation();
        if (eof()) break;
      }
      skip_inline_ws();
      if (eof()) break;
      const char c = peek();
      if (c == '\n' || (c == '\r' && peek(1) == '\n')) {
        const std::size_t b = pos_;
        const int tl = line_, tc = col_;
        eat_newline();
        emit(TokenKind::Newline, {b, pos_}, "", tl, tc);
        at_line_start_ = true;
        continue;
      }
      lex_token();
    }
    finish();
    return std::move(out_);
  }

 private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void eat_newline() {
    if (peek() == '\r') advance();
    advance();
  }

  void emit(TokenKind kind, Span span, std::string value, int line, int col) {
    out_.push_back({kind, span, std::move(value), line, col});
  }

  [[noreturn]] void fail(int line, int col, std::size_t at,
                         const std::string& msg) {
    throw ParseError(line, col, {at, at < src_.size() ? at + 1 : at}, msg);
  }

  /// Consumes blank lines, measures the new line's indentation, and emits
  /// Indent/Dedent tokens against the indent stack.
  void lex_indentation() {
    int count = 0;
    for (;;) {
      count = 0;
      while (peek() == ' ') {
        advance();
        ++count;
      }
      if (peek() == '\t')
        fail(line_, col_, pos_, "tab character in indentation");
      if (eof()) return;
      if (peek() == '\n' || (peek() == '\r' && peek(1) == '\n')) {
        eat_newline();  // blank line: no tokens
        continue;
      }
      break;
    }
    at_line_start_ = false;
    if (count > indents_.back()) {
      indents_.push_back(count);
      emit(TokenKind::Indent, {pos_, pos_}, "", line_, col_);
      return;
    }
    while (count < indents_.back()) {
      indents_.pop_back();
      emit(TokenKind::Dedent, {pos_, pos_}, "", line_, col_);
    }
    if (count != indents_.back())
      fail(line_, col_, pos_,
           "unindent does not match any outer indentation level");
  }

  void skip_inline_ws() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t') {
        advance();
      } else if (brackets_ > 0 &&
                 (c == '\n' || (c == '\r' && peek(1) == '\n'))) {
        eat_newline();  // implicit line joining inside ( ) and [ ]
      } else {
        break;
      }
    }
  }

  void lex_token() {
    const char c = peek();
    if (is_ident_start(c)) {
      lex_ident();
    } else if (is_digit(c)) {
      lex_number();
    } else if (c == '"') {
      lex_string();
    } else {
      lex_op();
    }
  }

  void lex_ident() {
    const std::size_t b = pos_;
    const int tl = line_, tc = col_;
    while (!eof() && is_ident_char(peek())) advance();
    std::string text = src_.substr(b, pos_ - b);
    const TokenKind kind =
        is_keyword(text) ? TokenKind::Keyword : TokenKind::Ident;
    emit(kind, {b, pos_}, std::move(text), tl, tc);
  }

  void lex_number() {
    const std::size_t b = pos_;
    const int tl = line_, tc = col_;
    while (is_digit(peek())) advance();
    bool is_float = false;
    if (peek() == '.' && is_digit(peek(1))) {
      is_float = true;
      advance();
      while (is_digit(peek())) advance();
      if (peek() == 'e' || peek() == 'E') {
        std::size_t off = 1;
        if (peek(1) == '+' || peek(1) == '-') off = 2;
        if (is_digit(peek(off))) {
          for (std::size_t i = 0; i <= off; ++i) advance();
          while (is_digit(peek())) advance();
        }
      }
    }
    std::string text = src_.substr(b, pos_ - b);
    if (is_float) {
      double v = 0.0;
      const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
      if (r.ec != std::errc())
        fail(tl, tc, b, "float literal out of range");
      emit(TokenKind::Float, {b, pos_}, std::move(text), tl, tc);
    } else {
      long long v = 0;
      const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
      if (r.ec != std::errc())
        fail(tl, tc, b, "integer literal out of range");
      emit(TokenKind::Int, {b, pos_}, std::move(text), tl, tc);
    }
  }

  void lex_string() {
    const std::size_t b = pos_;
    const int tl = line_, tc = col_;
    advance();  // opening quote
    std::string value;
    while (true) {
      if (eof() || peek() == '\n' || peek() == '\r')
        fail(tl, tc, b, "unterminated string literal");
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const int el = line_, ec = col_;
        const std::size_t ep = pos_;
        advance();
        switch (peek()) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          default:
            fail(el, ec, ep, std::string("unknown escape sequence '\\") +
                                 (eof() ? ' ' : peek()) + "'");
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    emit(TokenKind::Str, {b, pos_}, std::move(value), tl, tc);
  }

  void lex_op() {
    const std::size_t b = pos_;
    const int tl = line_, tc = col_;
    static constexpr std::array<std::string_view, 4> kTwo = {"==", "!=", "<=",
                                                             ">="};
    for (auto op : kTwo) {
      if (src_.compare(b, 2, op) == 0) {
        advance();
        advance();
        emit(TokenKind::Op, {b, pos_}, std::string(op), tl, tc);
        return;
      }
    }
    const char c = peek();
    static constexpr std::string_view kSingle = "&|=<>+-*/.,()[]:";
    if (kSingle.find(c) != std::string_view::npos) {
      if (c == '(' || c == '[') ++brackets_;
      if ((c == ')' || c == ']') && brackets_ > 0) --brackets_;
      advance();
      emit(TokenKind::Op, {b, pos_}, std::string(1, c), tl, tc);
      return;
    }
    if (std::isprint(static_cast<unsigned char>(c))) {
      fail(tl, tc, b, std::string("illegal character '") + c + "'");
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%02x",
                  static_cast<unsigned>(static_cast<unsigned char>(c)));
    fail(tl, tc, b, std::string("illegal character ") + buf);
  }

  void finish() {
    if (!out_.empty() && out_.back().kind != TokenKind::Newline)
      emit(TokenKind::Newline, {src_.size(), src_.size()}, "", line_, col_);
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, {src_.size(), src_.size()}, "", line_, col_);
    }
    emit(TokenKind::Eof, {src_.size(), src_.size()}, "", line_, col_);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool at_line_start_ = true;
  int brackets_ = 0;
  std::vector<int> indents_{0};
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  if (source.size() > kMaxProgramBytes)
    throw ParseError(1, 1, {0, 0}, "program exceeds 64 KiB");
  return Lexer(source).run();
}

}  // namespace nept::lang
