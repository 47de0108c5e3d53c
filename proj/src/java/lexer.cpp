#include "jrefine/java/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace jrefine::java {

namespace {

const std::unordered_set<std::string_view>& reserved_words() {
  static const std::unordered_set<std::string_view> kWords = {
      "abstract", "assert",   "boolean",    "break",      "byte",
      "case",     "catch",    "char",       "class",      "const",
      "continue", "default",  "do",         "double",     "else",
      "enum",     "extends",  "final",      "finally",    "float",
      "for",      "goto",     "if",         "implements", "import",
      "instanceof", "int",    "interface",  "long",       "native",
      "new",      "package",  "private",    "protected",  "public",
      "return",   "short",    "static",     "strictfp",   "super",
      "switch",   "synchronized", "this",   "throw",      "throws",
      "transient", "try",     "void",       "volatile",   "while",
      "true",     "false",    "null",
  };
  return kWords;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;  // let non-ASCII ride along in identifiers
}

bool ident_part(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Multi-character operators, longest first. The '>' family is deliberately
// absent: '>' always lexes as a single token so nested generic closers
// (List<List<String>>) stay parseable; shifts simply become two tokens,
// which is consistent everywhere the token stream is compared.
constexpr std::array<std::string_view, 18> kMultiOps = {
    "...", "<<=", "->", "::", "==", "!=", "<=", ">=", "&&", "||",
    "++",  "--",  "+=", "-=", "*=", "/=", "%=", "<<",
};

}  // namespace

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Character: return "character";
    case TokenKind::Operator: return "operator";
    case TokenKind::LineComment: return "line_comment";
    case TokenKind::BlockComment: return "block_comment";
  }
  return "unknown";
}

bool is_reserved_word(std::string_view text) {
  return reserved_words().count(text) > 0;
}

bool is_valid_identifier(std::string_view text) {
  if (text.empty() || is_reserved_word(text)) return false;
  if (!ident_start(text[0]) || std::isdigit(static_cast<unsigned char>(text[0]))) return false;
  return std::all_of(text.begin(), text.end(), ident_part);
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t extra;
    if (c < 0x80) extra = 0;
    else if ((c & 0xE0) == 0xC0) extra = 1;
    else if ((c & 0xF0) == 0xE0) extra = 2;
    else if ((c & 0xF8) == 0xF0) extra = 3;
    else return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if (i + k >= text.size()) return false;
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

LexResult lex(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.tokens.push_back(Token{kind, std::string(src.substr(begin, end - begin)), begin, end});
  };

  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }

    // Comments.
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t begin = i;
      while (i < n && src[i] != '\n') ++i;
      push(TokenKind::LineComment, begin, i);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      std::size_t begin = i;
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
      if (i + 1 < n) {
        i += 2;
      } else {
        i = n;
        out.errors.push_back("unterminated block comment");
      }
      push(TokenKind::BlockComment, begin, i);
      continue;
    }

    // String literals, including """ text blocks """.
    if (c == '"') {
      std::size_t begin = i;
      if (i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"') {
        i += 3;
        while (i + 2 < n && !(src[i] == '"' && src[i + 1] == '"' && src[i + 2] == '"')) {
          if (src[i] == '\\') ++i;
          ++i;
        }
        if (i + 2 < n) {
          i += 3;
        } else {
          i = n;
          out.errors.push_back("unterminated text block");
        }
      } else {
        ++i;
        bool closed = false;
        while (i < n) {
          if (src[i] == '\\' && i + 1 < n) {
            i += 2;
            continue;
          }
          if (src[i] == '"') {
            ++i;
            closed = true;
            break;
          }
          if (src[i] == '\n') break;  // Java strings don't span lines
          ++i;
        }
        if (!closed) out.errors.push_back("unterminated string literal");
      }
      push(TokenKind::String, begin, i);
      continue;
    }

    // Character literals.
    if (c == '\'') {
      std::size_t begin = i;
      ++i;
      bool closed = false;
      while (i < n) {
        if (src[i] == '\\' && i + 1 < n) {
          i += 2;
          continue;
        }
        if (src[i] == '\'') {
          ++i;
          closed = true;
          break;
        }
        if (src[i] == '\n') break;
        ++i;
      }
      if (!closed) out.errors.push_back("unterminated character literal");
      push(TokenKind::Character, begin, i);
      continue;
    }

    // Numbers (also handles leading-dot decimals like .5).
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t begin = i;
      bool hex = (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X'));
      ++i;
      while (i < n) {
        char d = src[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          ++i;
          continue;
        }
        // A decimal point continues the number only when a digit follows
        // (so `list.size()` after a number-ish name never merges).
        if (d == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
          ++i;
          continue;
        }
        if ((d == '+' || d == '-') && i > begin &&
            (src[i - 1] == 'e' || src[i - 1] == 'E' ||
             (hex && (src[i - 1] == 'p' || src[i - 1] == 'P')))) {
          ++i;
          continue;
        }
        break;
      }
      push(TokenKind::Number, begin, i);
      continue;
    }

    // Identifiers and keywords.
    if (ident_start(c)) {
      std::size_t begin = i;
      while (i < n && ident_part(src[i])) ++i;
      std::string_view word = src.substr(begin, i - begin);
      push(is_reserved_word(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, i);
      continue;
    }

    // Operators / punctuation: longest match from the table, else one char.
    std::size_t matched = 1;
    for (std::string_view op : kMultiOps) {
      if (src.substr(i, op.size()) == op) {
        matched = op.size();
        break;
      }
    }
    push(TokenKind::Operator, i, i + matched);
    i += matched;
  }
  return out;
}

}  // namespace jrefine::java
