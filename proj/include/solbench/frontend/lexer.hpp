#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/frontend/source_span.hpp"

namespace solbench::frontend {

enum class TokenKind {
  identifier,
  keyword,
  number_literal,
  string_literal,
  punctuator,
  op,
  comment,
  unknown,
};

[[nodiscard]] std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::unknown;
  std::string text;  // exact source slice
  SourceSpan span;

  /// Comments are kept in the stream for losslessness but carry no syntax.
  [[nodiscard]] bool is_trivia() const { return kind == TokenKind::comment; }
  [[nodiscard]] bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

/// Replaces malformed UTF-8 sequences with U+FFFD and drops a leading BOM.
[[nodiscard]] std::string sanitize_utf8(std::string_view bytes);

/// Whitespace the lexer skips between tokens.
[[nodiscard]] constexpr bool is_lexer_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Splits arbitrary bytes into tokens. Never fails: bytes that start no valid
/// token become `unknown` tokens (one per UTF-8 sequence or stray byte). Token
/// texts plus the skipped whitespace reproduce `text` exactly.
[[nodiscard]] std::vector<Token> tokenize(std::string_view text, std::uint32_t file_id = 0);

[[nodiscard]] bool is_keyword(std::string_view word);
/// uint*, int*, bytes*, address, bool, string, fixed*, ufixed*.
[[nodiscard]] bool is_elementary_type_name(std::string_view word);

}  // namespace solbench::frontend
