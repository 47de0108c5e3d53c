#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jrefine::java {

enum class TokenKind {
  Identifier,
  Keyword,      // reserved words incl. true/false/null
  Number,
  String,       // "..." and text blocks
  Character,    // '...'
  Operator,     // punctuation and operators
  LineComment,  // // ...
  BlockComment, // /* ... */ and /** ... */
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t begin = 0;  // byte offset into the lexed source
  std::size_t end = 0;    // one past the last byte

  bool is_comment() const {
    return kind == TokenKind::LineComment || kind == TokenKind::BlockComment;
  }
  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text;  // positions don't matter for equality
  }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> errors;  // unterminated string/comment etc.
};

// Tokenizes Java source. Never throws; malformed trailing constructs produce
// a best-effort token plus an entry in errors. Whitespace is dropped;
// comments are kept as tokens.
LexResult lex(std::string_view source);

// True for Java reserved words (incl. the true/false/null literals).
bool is_reserved_word(std::string_view text);

// True if `text` is usable as a Java identifier (lexically valid and not reserved).
bool is_valid_identifier(std::string_view text);

// True if the whole buffer is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

}  // namespace jrefine::java
