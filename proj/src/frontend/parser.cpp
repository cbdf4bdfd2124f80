#include "solbench/frontend/parser.hpp"

#include <algorithm>
#include <array>

namespace solbench::frontend {

namespace {

constexpr int kMaxNesting = 200;

// Internal control flow for recovery; never escapes parse().
struct SyntaxError {
  std::string message;
};

constexpr std::array<std::string_view, 12> kAssignmentOps = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                                             "|=", "&=", "^=", "<<=", ">>=", ">>>="};

constexpr std::array<std::string_view, 12> kEtherUnits = {"wei",     "gwei",  "ether", "szabo", "finney", "seconds",
                                                          "minutes", "hours", "days",  "weeks", "years",  "kwei"};

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return 0;
}

bool is_location(std::string_view w) { return w == "memory" || w == "storage" || w == "calldata"; }

bool is_visibility(std::string_view w) {
  return w == "public" || w == "private" || w == "internal" || w == "external";
}

// Keywords that may still name a variable or function in expressions.
bool is_soft_keyword(std::string_view w) {
  return w == "error" || w == "receive" || w == "fallback" || w == "type" || w == "payable" || w == "var";
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) {
    toks_.reserve(tokens.size());
    for (const auto& t : tokens) {
      if (!t.is_trivia()) toks_.push_back(&t);
    }
  }

  SourceUnit run() {
    while (!at_end()) {
      const auto start = pos_;
      const Token& t = peek();
      if (t.is(TokenKind::keyword, "pragma") && peek(1).text == "solidity") {
        parse_pragma();
        last_was_opaque_ = false;
      } else if (is_contract_start()) {
        if (!parse_contract()) {
          pos_ = start;
          consume_opaque_item();
        }
      } else if (t.is(TokenKind::keyword, "function")) {
        try {
          unit_.free_functions.push_back(parse_function(FunctionKind::function, ""));
          last_was_opaque_ = false;
        } catch (const SyntaxError& e) {
          pos_ = start;
          diagnose(e.message, start);
          consume_opaque_item();
        }
      } else {
        consume_opaque_item();
      }
      if (pos_ == start) advance();  // progress guarantee
    }
    return std::move(unit_);
  }

 private:
  // ---- token access -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    static const Token eof{TokenKind::unknown, "", {}};
    return pos_ + k < toks_.size() ? *toks_[pos_ + k] : eof;
  }
  bool at_end() const { return pos_ >= toks_.size(); }
  void advance() {
    if (!at_end()) ++pos_;
  }
  bool check_punct(std::string_view p, std::size_t k = 0) const { return peek(k).is(TokenKind::punctuator, p); }
  bool check_op(std::string_view p, std::size_t k = 0) const { return peek(k).is(TokenKind::op, p); }
  bool check_kw(std::string_view p, std::size_t k = 0) const { return peek(k).is(TokenKind::keyword, p); }
  bool accept_punct(std::string_view p) {
    if (!check_punct(p)) return false;
    advance();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  [[noreturn]] void fail(std::string message) const {
    const Token& t = peek();
    if (at_end()) throw SyntaxError{message + " at end of input"};
    throw SyntaxError{message + " near '" + t.text + "' (line " + std::to_string(t.span.start_line) + ")"};
  }

  bool is_name_token(std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == TokenKind::identifier || (t.kind == TokenKind::keyword && is_soft_keyword(t.text));
  }
  std::string expect_name() {
    if (!is_name_token()) fail("expected identifier");
    std::string out = peek().text;
    advance();
    return out;
  }

  SourceSpan span_of(std::size_t first, std::size_t last) const {
    if (toks_.empty()) return {};
    first = std::min(first, toks_.size() - 1);
    last = std::min(std::max(last, first), toks_.size() - 1);
    return cover(toks_[first]->span, toks_[last]->span);
  }
  // Span from token `first` through the most recently consumed token.
  SourceSpan span_from(std::size_t first) const { return span_of(first, pos_ > first ? pos_ - 1 : first); }

  std::string join(std::size_t first, std::size_t last_exclusive) const {
    std::string out;
    for (std::size_t i = first; i < last_exclusive && i < toks_.size(); ++i) {
      if (i > first && toks_[i]->span.begin > toks_[i - 1]->span.end) out += ' ';
      out += toks_[i]->text;
    }
    return out;
  }

  void diagnose(const std::string& message, std::size_t at) {
    unit_.diagnostics.push_back({message, span_of(at, at)});
  }

  struct NestingGuard {
    explicit NestingGuard(Parser& p) : parser(p) {
      if (++parser.nesting_ > kMaxNesting) {
        --parser.nesting_;
        throw SyntaxError{"nesting too deep"};
      }
    }
    ~NestingGuard() { --parser.nesting_; }
    NestingGuard(const NestingGuard&) = delete;
    NestingGuard& operator=(const NestingGuard&) = delete;
    Parser& parser;
  };

  // Index of the token closing the group opened at `open` (or toks_.size()).
  std::size_t matching_close(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      const Token& t = *toks_[i];
      if (t.kind != TokenKind::punctuator) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) return i;
      }
    }
    return toks_.size();
  }

  void skip_group() {
    const auto close = matching_close(pos_);
    pos_ = std::min(close + 1, toks_.size());
  }

  // ---- top level ----------------------------------------------------------

  bool is_contract_start() const {
    std::size_t k = check_kw("abstract") ? 1 : 0;
    return check_kw("contract", k) || check_kw("interface", k) || check_kw("library", k);
  }

  bool is_top_level_starter(std::size_t k = 0) const {
    return (check_kw("pragma", k) && peek(k + 1).text == "solidity") || check_kw("contract", k) ||
           check_kw("interface", k) || check_kw("library", k) || check_kw("abstract", k) || check_kw("function", k);
  }

  void add_opaque(const SourceSpan& span) {
    if (last_was_opaque_ && !unit_.opaque_regions.empty()) {
      unit_.opaque_regions.back() = cover(unit_.opaque_regions.back(), span);
    } else {
      unit_.opaque_regions.push_back(span);
    }
    last_was_opaque_ = true;
  }

  void consume_opaque_item() {
    const auto start = pos_;
    if (check_kw("enum")) {
      try {
        unit_.enums.push_back(parse_enum());
        add_opaque(span_from(start));
        return;
      } catch (const SyntaxError&) {
        pos_ = start;
      }
    }
    if (check_kw("struct") && is_name_token(1)) unit_.struct_names.push_back(peek(1).text);
    int depth = 0;
    while (!at_end()) {
      if (depth == 0 && pos_ > start && is_top_level_starter()) break;
      const Token& t = peek();
      advance();
      if (t.kind == TokenKind::punctuator) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") {
          depth = std::max(depth - 1, 0);
          if (depth == 0 && t.text == "}") break;
        }
        if (depth == 0 && t.text == ";") break;
      }
    }
    if (pos_ == start) advance();
    add_opaque(span_from(start));
  }

  void parse_pragma() {
    const auto start = pos_;
    advance();  // pragma
    advance();  // solidity
    const auto expr_start = pos_;
    while (!at_end() && !check_punct(";") && !is_top_level_starter()) advance();
    const auto expr_end = pos_;
    PragmaDirective p;
    if (accept_punct(";")) {
      p.raw_text = join(start, pos_);
    } else {
      p.raw_text = join(start, expr_end);
      diagnose("pragma without terminating ';'", start);
    }
    const auto expression = join(expr_start, expr_end);
    try {
      p.parsed_range = version::parse_range(expression);
    } catch (const version::VersionError& e) {
      p.range_error = e.what();
    }
    p.span = span_from(start);
    unit_.pragmas.push_back(std::move(p));
  }

  bool parse_contract() {
    const auto start = pos_;
    if (check_kw("abstract")) advance();
    ContractDef c;
    const auto& kw = peek().text;
    c.kind = kw == "interface" ? ContractKind::interface : kw == "library" ? ContractKind::library : ContractKind::contract;
    advance();
    if (!is_name_token()) return false;
    c.name = peek().text;
    advance();
    // Inheritance list (`is A, B(x)`) is not modelled.
    while (!at_end() && !check_punct("{") && !check_punct(";") && !is_top_level_starter()) advance();
    if (!accept_punct("{")) return false;
    while (!at_end() && !check_punct("}")) {
      const auto member_start = pos_;
      try {
        parse_member(c);
      } catch (const SyntaxError& e) {
        pos_ = member_start;
        diagnose(e.message, member_start);
        skip_member();
      }
      if (pos_ == member_start) advance();
    }
    if (!accept_punct("}")) diagnose("unterminated contract '" + c.name + "'", start);
    c.span = span_from(start);
    unit_.contracts.push_back(std::move(c));
    last_was_opaque_ = false;
    return true;
  }

  void skip_member() {
    int depth = 0;
    const auto start = pos_;
    while (!at_end()) {
      const Token& t = peek();
      if (depth == 0 && t.is(TokenKind::punctuator, "}") && pos_ > start) return;
      advance();
      if (t.kind != TokenKind::punctuator) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        depth = std::max(depth - 1, 0);
        if (depth == 0 && t.text == "}") return;
      }
      if (depth == 0 && t.text == ";") return;
    }
  }

  void parse_member(ContractDef& c) {
    const Token& t = peek();
    if (t.kind == TokenKind::keyword) {
      if (t.text == "function") {
        c.functions.push_back(parse_function(FunctionKind::function, c.name));
        return;
      }
      if (t.text == "modifier") {
        c.functions.push_back(parse_function(FunctionKind::modifier, c.name));
        return;
      }
      if (t.text == "constructor") {
        c.functions.push_back(parse_function(FunctionKind::constructor, c.name));
        return;
      }
      if ((t.text == "fallback" || t.text == "receive") && check_punct("(", 1)) {
        c.functions.push_back(
            parse_function(t.text == "fallback" ? FunctionKind::fallback : FunctionKind::receive, c.name));
        return;
      }
      if (t.text == "enum") {
        c.enums.push_back(parse_enum());
        return;
      }
      if (t.text == "struct") {
        if (is_name_token(1)) c.struct_names.push_back(peek(1).text);
        skip_member();
        return;
      }
      if (t.text == "event" || t.text == "error" || t.text == "using") {
        skip_member();
        return;
      }
    }
    c.state_var_decls.push_back(parse_state_variable());
  }

  EnumDef parse_enum() {
    const auto start = pos_;
    advance();  // enum
    EnumDef e;
    e.name = expect_name();
    expect_punct("{");
    while (!at_end() && !check_punct("}")) {
      e.members.push_back(expect_name());
      if (!accept_punct(",")) break;
    }
    expect_punct("}");
    e.span = span_from(start);
    return e;
  }

  Declaration parse_state_variable() {
    const auto start = pos_;
    if (!skip_type()) fail("expected declaration");
    Declaration d;
    d.type_name = join(start, pos_);
    while (!at_end()) {
      if (peek().kind == TokenKind::keyword && !is_soft_keyword(peek().text)) {
        const bool is_override = check_kw("override");
        advance();
        if (is_override && check_punct("(")) skip_group();
        continue;
      }
      break;
    }
    d.name = expect_name();
    if (check_op("=")) {
      advance();
      d.initializer = parse_expression();
    }
    expect_punct(";");
    d.span = span_from(start);
    return d;
  }

  FunctionDef parse_function(FunctionKind kind, std::string_view contract_name) {
    const auto start = pos_;
    advance();  // function / modifier / constructor / fallback / receive
    FunctionDef f;
    f.kind = kind;
    if (kind == FunctionKind::function || kind == FunctionKind::modifier) {
      if (is_name_token()) {
        f.name = peek().text;
        advance();
      } else if (kind == FunctionKind::function && check_punct("(")) {
        f.kind = FunctionKind::fallback;  // pre-0.6 unnamed fallback
      } else if (kind == FunctionKind::function && (check_kw("fallback") || check_kw("receive"))) {
        f.kind = peek().text == "fallback" ? FunctionKind::fallback : FunctionKind::receive;
        advance();
      } else {
        fail("expected function name");
      }
      if (kind == FunctionKind::function && !contract_name.empty() && f.name == contract_name) {
        f.kind = FunctionKind::constructor;  // pre-0.4.22 constructor
        f.name.clear();
      }
    }
    if (check_punct("(")) {
      advance();
      f.params = parse_param_list();
    } else if (kind != FunctionKind::modifier) {
      fail("expected '('");
    }
    while (!at_end() && !check_punct("{") && !check_punct(";")) {
      const Token& t = peek();
      if (t.is(TokenKind::keyword, "returns")) {
        advance();
        expect_punct("(");
        f.returns = parse_param_list();
      } else if (t.kind == TokenKind::keyword && is_visibility(t.text)) {
        f.visibility = t.text;
        advance();
      } else if (t.kind == TokenKind::keyword &&
                 (t.text == "payable" || (!is_soft_keyword(t.text) && !is_elementary_type_name(t.text)))) {
        const bool is_override = t.text == "override";
        advance();
        if (is_override && check_punct("(")) skip_group();
      } else if (is_name_token()) {
        f.modifiers.push_back(parse_modifier_invocation());
      } else {
        fail("unexpected token in function header");
      }
    }
    if (accept_punct(";")) {
      f.has_body = false;
    } else {
      f.has_body = true;
      Statement block = parse_block();
      f.body = std::move(block.body);
    }
    f.span = span_from(start);
    return f;
  }

  ModifierInvocation parse_modifier_invocation() {
    const auto start = pos_;
    ModifierInvocation m;
    m.name = expect_name();
    while (check_punct(".") && is_name_token(1)) {
      advance();
      m.name += "." + peek().text;
      advance();
    }
    if (accept_punct("(")) m.arguments = parse_argument_list();
    m.span = span_from(start);
    return m;
  }

  // After '(' ; consumes the closing ')'.
  std::vector<Param> parse_param_list() {
    std::vector<Param> out;
    while (!at_end() && !check_punct(")")) {
      const auto start = pos_;
      int depth = 0;
      while (!at_end()) {
        const Token& t = peek();
        if (depth == 0 && (t.is(TokenKind::punctuator, ",") || t.is(TokenKind::punctuator, ")"))) break;
        if (t.kind == TokenKind::punctuator) {
          if (t.text == "(" || t.text == "[") ++depth;
          if (t.text == ")" || t.text == "]") --depth;
          if (t.text == "{" || t.text == "}" || t.text == ";") fail("unexpected token in parameter list");
        }
        advance();
      }
      const auto end = pos_;
      if (end == start) fail("empty parameter");
      out.push_back(make_param(start, end));
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    return out;
  }

  Param make_param(std::size_t first, std::size_t last_exclusive) {
    Param p;
    p.span = span_of(first, last_exclusive - 1);
    std::vector<std::size_t> kept;
    for (auto i = first; i < last_exclusive; ++i) {
      const auto& text = toks_[i]->text;
      if (toks_[i]->kind == TokenKind::keyword && is_location(text)) {
        p.location = text;
      } else if (!(toks_[i]->kind == TokenKind::keyword && text == "indexed")) {
        kept.push_back(i);
      }
    }
    if (kept.size() > 1) {
      const Token& last = *toks_[kept.back()];
      if (last.kind == TokenKind::identifier || (last.kind == TokenKind::keyword && is_soft_keyword(last.text))) {
        p.name = last.text;
        kept.pop_back();
      }
    }
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const auto i = kept[k];
      if (k > 0 && toks_[i]->span.begin > toks_[kept[k - 1]]->span.end) p.type_name += ' ';
      p.type_name += toks_[i]->text;
    }
    return p;
  }

  // Skips a type name (`uint256`, `address payable`, `mapping(a => b)`, `A.B[][3]`).
  bool skip_type() {
    const auto start = pos_;
    if (check_kw("mapping") && check_punct("(", 1)) {
      advance();
      skip_group();
    } else if (check_kw("function") && check_punct("(", 1)) {
      advance();
      skip_group();
      while (peek().kind == TokenKind::keyword && !is_location(peek().text) && !check_kw("returns")) advance();
      if (check_kw("returns") && check_punct("(", 1)) {
        advance();
        skip_group();
      }
    } else if (peek().kind == TokenKind::keyword && is_elementary_type_name(peek().text)) {
      const bool is_address = peek().text == "address";
      advance();
      if (is_address && check_kw("payable")) advance();
    } else if (peek().kind == TokenKind::identifier) {
      advance();
      while (check_punct(".") && peek(1).kind == TokenKind::identifier) {
        advance();
        advance();
      }
    } else {
      return false;
    }
    while (check_punct("[")) skip_group();
    return pos_ > start;
  }

  // ---- statements ---------------------------------------------------------

  Statement parse_block() {
    const auto start = pos_;
    expect_punct("{");
    Statement block;
    block.kind = StmtKind::block;
    while (!at_end() && !check_punct("}")) {
      block.body.push_back(parse_statement_recovering());
    }
    if (!accept_punct("}")) diagnose("unterminated block", start);
    block.span = span_from(start);
    return block;
  }

  Statement parse_statement_recovering() {
    const auto start = pos_;
    try {
      return parse_statement();
    } catch (const SyntaxError& e) {
      pos_ = start;
      diagnose(e.message, start);
      return recover_statement();
    }
  }

  Statement recover_statement() {
    const auto start = pos_;
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (depth == 0 && t.is(TokenKind::punctuator, "}") && pos_ > start) break;
      advance();
      if (t.kind != TokenKind::punctuator) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        depth = std::max(depth - 1, 0);
        if (depth == 0 && t.text == "}") break;
      }
      if (depth == 0 && t.text == ";") break;
    }
    if (pos_ == start) advance();
    Statement s;
    s.kind = StmtKind::opaque;
    s.label = "recovered";
    s.span = span_from(start);
    return s;
  }

  Statement parse_statement() {
    NestingGuard guard(*this);
    const auto start = pos_;
    const Token& t = peek();
    Statement s;
    if (t.is(TokenKind::punctuator, "{")) return parse_block();
    if (t.kind == TokenKind::keyword) {
      if (t.text == "unchecked" && check_punct("{", 1)) {
        advance();
        s = parse_block();
        s.label = "unchecked";
        s.span = span_from(start);
        return s;
      }
      if (t.text == "if") return parse_if();
      if (t.text == "for") return parse_for();
      if (t.text == "while") {
        advance();
        s.kind = StmtKind::loop;
        s.label = "while";
        expect_punct("(");
        s.exprs.push_back(parse_expression());
        expect_punct(")");
        s.body.push_back(parse_statement_recovering());
        s.span = span_from(start);
        return s;
      }
      if (t.text == "do") {
        advance();
        s.kind = StmtKind::loop;
        s.label = "do";
        s.body.push_back(parse_statement_recovering());
        if (!check_kw("while")) fail("expected 'while'");
        advance();
        expect_punct("(");
        s.exprs.push_back(parse_expression());
        expect_punct(")");
        expect_punct(";");
        s.span = span_from(start);
        return s;
      }
      if (t.text == "return") {
        advance();
        s.kind = StmtKind::return_stmt;
        if (!check_punct(";")) s.exprs.push_back(parse_expression());
        expect_punct(";");
        s.span = span_from(start);
        return s;
      }
      if (t.text == "try") return parse_try();
      if (t.text == "emit") {
        advance();
        s.kind = StmtKind::expression;
        s.label = "emit";
        s.exprs.push_back(parse_expression());
        expect_punct(";");
        s.span = span_from(start);
        return s;
      }
      if (t.text == "throw") {
        advance();
        Expression e;
        e.kind = ExprKind::identifier;
        e.text = "throw";
        e.span = span_from(start);
        s.kind = StmtKind::expression;
        s.exprs.push_back(std::move(e));
        expect_punct(";");
        s.span = span_from(start);
        return s;
      }
      if (t.text == "assembly") {
        advance();
        if (peek().kind == TokenKind::string_literal) advance();
        if (check_punct("(")) skip_group();
        if (!check_punct("{")) fail("expected assembly block");
        skip_group();
        s.kind = StmtKind::opaque;
        s.label = "assembly";
        s.span = span_from(start);
        return s;
      }
      if (t.text == "break" || t.text == "continue") {
        advance();
        expect_punct(";");
        s.kind = StmtKind::opaque;
        s.label = t.text;
        s.span = span_from(start);
        return s;
      }
    }
    if (t.is(TokenKind::identifier, "revert") && is_name_token(1)) {
      advance();
      s.kind = StmtKind::revert_stmt;
      s.exprs.push_back(parse_expression());
      expect_punct(";");
      s.span = span_from(start);
      return s;
    }
    return parse_simple_statement();
  }

  // Variable declaration or expression statement, including the ';'.
  Statement parse_simple_statement() {
    if (looks_like_declaration()) return parse_declaration();
    const auto start = pos_;
    Statement s;
    s.kind = StmtKind::expression;
    s.exprs.push_back(parse_expression());
    expect_punct(";");
    s.span = span_from(start);
    return s;
  }

  bool looks_like_declaration() {
    const auto saved = pos_;
    bool result = false;
    if (check_kw("var")) {
      result = true;
    } else if (check_punct("(")) {
      advance();
      while (accept_punct(",")) {
      }
      if (skip_type()) {
        result = is_name_token() || (peek().kind == TokenKind::keyword && is_location(peek().text));
      }
    } else if (skip_type()) {
      result = is_name_token() || (peek().kind == TokenKind::keyword && is_location(peek().text));
    }
    pos_ = saved;
    return result;
  }

  Param parse_declared_variable() {
    const auto start = pos_;
    if (check_kw("var")) {
      advance();
    } else if (!skip_type()) {
      fail("expected type");
    }
    const auto type_end = pos_;
    if (peek().kind == TokenKind::keyword && is_location(peek().text)) advance();
    expect_name();
    return make_param(start, pos_ > type_end ? pos_ : type_end);
  }

  Statement parse_declaration() {
    const auto start = pos_;
    Statement s;
    s.kind = StmtKind::variable_decl;
    if (check_kw("var") && check_punct("(", 1)) {
      advance();
      advance();
      while (!at_end() && !check_punct(")")) {
        if (accept_punct(",")) continue;
        Param p;
        p.span = peek().span;
        p.name = expect_name();
        s.declared.push_back(std::move(p));
      }
      expect_punct(")");
    } else if (check_punct("(")) {
      advance();
      while (!at_end() && !check_punct(")")) {
        if (accept_punct(",")) continue;
        s.declared.push_back(parse_declared_variable());
      }
      expect_punct(")");
    } else {
      s.declared.push_back(parse_declared_variable());
    }
    if (check_op("=")) {
      advance();
      s.exprs.push_back(parse_expression());
    }
    expect_punct(";");
    s.span = span_from(start);
    return s;
  }

  Statement parse_if() {
    const auto start = pos_;
    advance();
    Statement s;
    s.kind = StmtKind::if_stmt;
    expect_punct("(");
    s.exprs.push_back(parse_expression());
    expect_punct(")");
    s.body.push_back(parse_statement_recovering());
    if (check_kw("else")) {
      advance();
      s.body.push_back(parse_statement_recovering());
    }
    s.span = span_from(start);
    return s;
  }

  Statement parse_for() {
    const auto start = pos_;
    advance();
    Statement s;
    s.kind = StmtKind::loop;
    s.label = "for";
    expect_punct("(");
    if (!accept_punct(";")) s.body.push_back(parse_simple_statement());
    if (!check_punct(";")) s.exprs.push_back(parse_expression());
    expect_punct(";");
    if (!check_punct(")")) s.exprs.push_back(parse_expression());
    expect_punct(")");
    s.body.push_back(parse_statement_recovering());
    s.span = span_from(start);
    return s;
  }

  Statement parse_try() {
    const auto start = pos_;
    advance();
    Statement s;
    s.kind = StmtKind::try_catch;
    s.exprs.push_back(parse_expression());
    if (check_kw("returns")) {
      advance();
      expect_punct("(");
      s.declared = parse_param_list();
    }
    s.body.push_back(parse_block());
    while (check_kw("catch")) {
      const auto clause_start = pos_;
      advance();
      std::string label;
      if (is_name_token()) label = expect_name();
      std::vector<Param> params;
      if (accept_punct("(")) params = parse_param_list();
      Statement clause = parse_block();
      clause.label = std::move(label);
      clause.declared = std::move(params);
      clause.span = span_from(clause_start);
      s.catches.push_back(std::move(clause));
    }
    if (s.catches.empty()) fail("try without catch clause");
    s.span = span_from(start);
    return s;
  }

  // ---- expressions --------------------------------------------------------

  Expression parse_expression() { return parse_assignment(); }

  Expression parse_assignment() {
    const auto start = pos_;
    Expression lhs = parse_conditional();
    if (peek().kind == TokenKind::op &&
        std::find(kAssignmentOps.begin(), kAssignmentOps.end(), peek().text) != kAssignmentOps.end()) {
      std::string op = peek().text;
      advance();
      Expression rhs = parse_assignment();
      return make_binary(std::move(op), std::move(lhs), std::move(rhs), start);
    }
    return lhs;
  }

  Expression parse_conditional() {
    const auto start = pos_;
    Expression cond = parse_binary(1);
    if (!check_punct("?")) return cond;
    advance();
    Expression a = parse_assignment();
    expect_punct(":");
    Expression b = parse_assignment();
    Expression e;
    e.kind = ExprKind::opaque;
    e.op = "?:";
    e.children = {std::move(cond), std::move(a), std::move(b)};
    e.span = span_from(start);
    return e;
  }

  Expression parse_binary(int min_precedence) {
    const auto start = pos_;
    Expression left = parse_unary();
    while (peek().kind == TokenKind::op) {
      const int prec = binary_precedence(peek().text);
      if (prec == 0 || prec < min_precedence) break;
      std::string op = peek().text;
      advance();
      Expression right = parse_binary(op == "**" ? prec : prec + 1);
      left = make_binary(std::move(op), std::move(left), std::move(right), start);
    }
    return left;
  }

  Expression make_binary(std::string op, Expression lhs, Expression rhs, std::size_t start) const {
    Expression e;
    e.kind = ExprKind::binary_op;
    e.op = std::move(op);
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    e.span = span_from(start);
    return e;
  }

  Expression parse_unary() {
    NestingGuard guard(*this);
    const auto start = pos_;
    const Token& t = peek();
    if ((t.kind == TokenKind::op &&
         (t.text == "!" || t.text == "~" || t.text == "-" || t.text == "+" || t.text == "++" || t.text == "--")) ||
        t.is(TokenKind::keyword, "delete")) {
      std::string op = t.text;
      advance();
      Expression e;
      e.kind = ExprKind::unary_op;
      e.op = std::move(op);
      e.children.push_back(parse_unary());
      e.span = span_from(start);
      return e;
    }
    return parse_postfix(parse_primary(), start);
  }

  bool call_options_follow() const {
    if (!check_punct("{")) return false;
    const auto close = matching_close(pos_);
    return close + 1 < toks_.size() && toks_[close + 1]->is(TokenKind::punctuator, "(");
  }

  Expression parse_postfix(Expression e, std::size_t start) {
    while (true) {
      if (check_punct("(")) {
        advance();
        Expression call;
        call.kind = ExprKind::call;
        call.children.push_back(std::move(e));
        for (auto& arg : parse_argument_list()) call.children.push_back(std::move(arg));
        call.span = span_from(start);
        e = std::move(call);
      } else if (check_punct("[")) {
        advance();
        Expression idx;
        idx.kind = ExprKind::index;
        idx.children.push_back(std::move(e));
        if (!check_punct("]")) {
          if (!check_punct(":")) idx.children.push_back(parse_expression());
          if (accept_punct(":") && !check_punct("]")) parse_expression();  // slice end
        }
        expect_punct("]");
        idx.span = span_from(start);
        e = std::move(idx);
      } else if (check_punct(".")) {
        advance();
        const Token& name = peek();
        if (name.kind != TokenKind::identifier && name.kind != TokenKind::keyword) fail("expected member name");
        Expression m;
        m.kind = ExprKind::member_access;
        m.text = name.text;
        advance();
        m.children.push_back(std::move(e));
        m.span = span_from(start);
        e = std::move(m);
      } else if (call_options_follow() && e.kind != ExprKind::call && e.kind != ExprKind::literal) {
        skip_group();  // {value: v, gas: g}
      } else if (check_op("++") || check_op("--")) {
        Expression u;
        u.kind = ExprKind::unary_op;
        u.op = peek().text;
        u.text = "postfix";
        advance();
        u.children.push_back(std::move(e));
        u.span = span_from(start);
        e = std::move(u);
      } else {
        return e;
      }
    }
  }

  // After '(' ; consumes ')'. Named arguments `{a: x, b: y}` yield their values.
  std::vector<Expression> parse_argument_list() {
    std::vector<Expression> args;
    if (check_punct("{")) {
      advance();
      while (!at_end() && !check_punct("}")) {
        expect_name();
        expect_punct(":");
        args.push_back(parse_expression());
        if (!accept_punct(",")) break;
      }
      expect_punct("}");
      expect_punct(")");
      return args;
    }
    while (!at_end() && !check_punct(")")) {
      args.push_back(parse_expression());
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    return args;
  }

  Expression parse_primary() {
    const auto start = pos_;
    const Token& t = peek();
    Expression e;
    if (t.is(TokenKind::punctuator, "(")) {
      advance();
      std::vector<Expression> parts;
      bool saw_comma = false;
      bool pending_empty = true;
      while (!at_end() && !check_punct(")")) {
        if (accept_punct(",")) {
          saw_comma = true;
          pending_empty = true;
          continue;
        }
        parts.push_back(parse_expression());
        pending_empty = false;
      }
      (void)pending_empty;
      expect_punct(")");
      if (parts.size() == 1 && !saw_comma) return std::move(parts.front());
      e.kind = ExprKind::tuple;
      e.children = std::move(parts);
      e.span = span_from(start);
      return e;
    }
    if (t.is(TokenKind::punctuator, "[")) {
      advance();
      e.kind = ExprKind::tuple;
      e.op = "[]";
      while (!at_end() && !check_punct("]")) {
        e.children.push_back(parse_expression());
        if (!accept_punct(",")) break;
      }
      expect_punct("]");
      e.span = span_from(start);
      return e;
    }
    if (t.is(TokenKind::keyword, "new")) {
      advance();
      const auto type_start = pos_;
      if (!skip_type()) fail("expected type after 'new'");
      e.kind = ExprKind::new_expr;
      e.text = join(type_start, pos_);
      e.span = span_from(start);
      return e;
    }
    if (t.kind == TokenKind::number_literal) {
      advance();
      if (peek().kind == TokenKind::identifier &&
          std::find(kEtherUnits.begin(), kEtherUnits.end(), peek().text) != kEtherUnits.end()) {
        advance();
      }
      e.kind = ExprKind::literal;
      e.text = join(start, pos_);
      e.span = span_from(start);
      return e;
    }
    if (t.kind == TokenKind::string_literal) {
      while (peek().kind == TokenKind::string_literal) advance();
      e.kind = ExprKind::literal;
      e.text = join(start, pos_);
      e.span = span_from(start);
      return e;
    }
    if (t.is(TokenKind::keyword, "true") || t.is(TokenKind::keyword, "false")) {
      advance();
      e.kind = ExprKind::literal;
      e.text = t.text;
      e.span = span_from(start);
      return e;
    }
    if (t.kind == TokenKind::identifier ||
        (t.kind == TokenKind::keyword && (is_elementary_type_name(t.text) || is_soft_keyword(t.text)))) {
      advance();
      e.kind = ExprKind::identifier;
      e.text = t.text;
      if (e.text == "address" && check_kw("payable")) advance();
      e.span = span_from(start);
      return e;
    }
    fail("expected expression");
  }

  std::vector<const Token*> toks_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
  bool last_was_opaque_ = false;
  SourceUnit unit_;
};

}  // namespace

SourceUnit parse(std::span<const Token> tokens) { return Parser(tokens).run(); }

SourceUnit parse_source(std::string_view text, std::uint32_t file_id) {
  const auto clean = sanitize_utf8(text);
  const auto tokens = tokenize(clean, file_id);
  return parse(tokens);
}

std::optional<version::VersionRange> effective_range(const SourceUnit& unit) {
  std::optional<version::VersionRange> out;
  for (const auto& p : unit.pragmas) {
    if (!p.parsed_range) continue;
    out = out ? out->intersect(*p.parsed_range) : *p.parsed_range;
  }
  return out;
}

}  // namespace solbench::frontend
