#include "solbench/frontend/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace solbench::frontend {

namespace {

constexpr std::string_view kKeywords[] = {
    "pragma",   "import",    "contract",  "interface", "library",   "abstract", "is",        "function",
    "modifier", "constructor", "fallback", "receive",  "event",     "error",    "struct",    "enum",
    "mapping",  "using",     "returns",   "return",    "if",        "else",     "for",       "while",
    "do",       "break",     "continue",  "try",       "catch",     "new",      "emit",      "assembly",
    "unchecked", "throw",    "delete",    "public",    "private",   "internal", "external",  "pure",
    "view",     "payable",   "constant",  "immutable", "virtual",   "override", "memory",    "storage",
    "calldata", "indexed",   "anonymous", "var",       "true",      "false",    "address",   "bool",
    "string",   "byte",      "bytes",     "int",       "uint",      "fixed",    "ufixed",    "type",
};

// Longest first so that maximal munch picks the right operator.
constexpr std::array<std::string_view, 26> kMultiCharOps = {
    ">>>=", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",   "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>", "=>", "->", ":=",
};

constexpr std::string_view kSingleOps = "+-*/%=<>!&|^~";
constexpr std::string_view kPunctuators = "()[]{};,.?:";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return digit(c); });
}

class Lexer {
 public:
  Lexer(std::string_view text, std::uint32_t file_id) : text_(text), file_id_(file_id) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (is_lexer_space(c)) {
        ++i;
        continue;
      }
      auto [kind, len] = scan(i);
      out.push_back(make(kind, i, i + len));
      i += len;
    }
    return out;
  }

 private:
  std::pair<TokenKind, std::size_t> scan(std::size_t i) const {
    const char c = text_[i];
    const auto rest = text_.substr(i);
    if (rest.starts_with("//")) {
      auto nl = rest.find('\n');
      auto len = nl == std::string_view::npos ? rest.size() : nl;
      // A trailing '\r' belongs to the line break, not the comment.
      if (len > 2 && rest[len - 1] == '\r') --len;
      return {TokenKind::comment, len};
    }
    if (rest.starts_with("/*")) {
      auto close = rest.find("*/", 2);
      return {TokenKind::comment, close == std::string_view::npos ? rest.size() : close + 2};
    }
    if (c == '"' || c == '\'') return {TokenKind::string_literal, string_length(rest)};
    if (digit(c) || (c == '.' && rest.size() > 1 && digit(rest[1]))) return {TokenKind::number_literal, number_length(rest)};
    if (ident_start(c)) {
      std::size_t len = 1;
      while (len < rest.size() && ident_part(rest[len])) ++len;
      const auto word = rest.substr(0, len);
      // hex"..." and unicode"..." literals
      if ((word == "hex" || word == "unicode") && len < rest.size() && (rest[len] == '"' || rest[len] == '\'')) {
        return {TokenKind::string_literal, len + string_length(rest.substr(len))};
      }
      return {is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, len};
    }
    for (auto op : kMultiCharOps) {
      if (rest.starts_with(op)) return {TokenKind::op, op.size()};
    }
    if (kSingleOps.find(c) != std::string_view::npos) return {TokenKind::op, 1};
    if (kPunctuators.find(c) != std::string_view::npos) return {TokenKind::punctuator, 1};
    return {TokenKind::unknown, unknown_length(rest)};
  }

  static std::size_t string_length(std::string_view rest) {
    const char quote = rest[0];
    std::size_t i = 1;
    while (i < rest.size()) {
      const char c = rest[i];
      if (c == '\\' && i + 1 < rest.size() && rest[i + 1] != '\n') {
        i += 2;
        continue;
      }
      if (c == quote) return i + 1;
      // Unterminated literal stops at the end of the line.
      if (c == '\n' || c == '\r') return i;
      ++i;
    }
    return rest.size();
  }

  static std::size_t number_length(std::string_view rest) {
    std::size_t i = 0;
    if (rest.size() > 2 && rest[0] == '0' && (rest[1] == 'x' || rest[1] == 'X')) {
      i = 2;
      while (i < rest.size() && (std::isxdigit(static_cast<unsigned char>(rest[i])) || rest[i] == '_')) ++i;
      return i;
    }
    auto digits = [&] {
      while (i < rest.size() && (digit(rest[i]) || rest[i] == '_')) ++i;
    };
    digits();
    // Dotted groups: decimals (1.5) and version triples (0.8.19) both lex as one token.
    while (i + 1 < rest.size() && rest[i] == '.' && digit(rest[i + 1])) {
      ++i;
      digits();
    }
    if (i < rest.size() && (rest[i] == 'e' || rest[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < rest.size() && rest[j] == '-') ++j;
      if (j < rest.size() && digit(rest[j])) {
        i = j;
        digits();
      }
    }
    return std::max<std::size_t>(i, 1);
  }

  static std::size_t unknown_length(std::string_view rest) {
    const auto b0 = static_cast<unsigned char>(rest[0]);
    std::size_t want = 1;
    if (b0 >= 0xC2 && b0 <= 0xDF) want = 2;
    else if (b0 >= 0xE0 && b0 <= 0xEF) want = 3;
    else if (b0 >= 0xF0 && b0 <= 0xF4) want = 4;
    if (want > rest.size()) return 1;
    for (std::size_t k = 1; k < want; ++k) {
      const auto b = static_cast<unsigned char>(rest[k]);
      if (b < 0x80 || b > 0xBF) return 1;
    }
    return want;
  }

  Token make(TokenKind kind, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::string(text_.substr(begin, end - begin));
    t.span.file_id = file_id_;
    t.span.begin = begin;
    t.span.end = end;
    advance_to(begin);
    t.span.start_line = line_;
    t.span.start_col = col_;
    advance_to(end - 1);
    t.span.end_line = line_;
    t.span.end_col = col_;
    return t;
  }

  void advance_to(std::size_t target) {
    while (pos_ < target) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view text_;
  std::uint32_t file_id_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::number_literal: return "number-literal";
    case TokenKind::string_literal: return "string-literal";
    case TokenKind::punctuator: return "punctuator";
    case TokenKind::op: return "operator";
    case TokenKind::comment: return "comment";
    case TokenKind::unknown: return "unknown";
  }
  return "unknown";
}

bool is_elementary_type_name(std::string_view word) {
  if (word == "address" || word == "bool" || word == "string" || word == "byte" || word == "var") return true;
  for (std::string_view prefix : {"uint", "int", "bytes"}) {
    if (word == prefix) return true;
    if (word.starts_with(prefix) && all_digits(word.substr(prefix.size()))) return true;
  }
  for (std::string_view prefix : {"ufixed", "fixed"}) {
    if (word == prefix) return true;
    if (word.starts_with(prefix)) {
      auto rest = word.substr(prefix.size());
      auto x = rest.find('x');
      if (x != std::string_view::npos && all_digits(rest.substr(0, x)) && all_digits(rest.substr(x + 1))) return true;
    }
  }
  return false;
}

bool is_keyword(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords) || is_elementary_type_name(word);
}

std::vector<Token> tokenize(std::string_view text, std::uint32_t file_id) { return Lexer(text, file_id).run(); }

}  // namespace solbench::frontend
