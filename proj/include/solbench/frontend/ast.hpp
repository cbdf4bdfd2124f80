#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/frontend/source_span.hpp"
#include "solbench/version/solc_version.hpp"

namespace solbench::frontend {

enum class ExprKind {
  call,
  member_access,
  new_expr,
  binary_op,
  unary_op,
  index,
  identifier,
  literal,
  tuple,
  opaque,
};

[[nodiscard]] std::string_view to_string(ExprKind kind);

/// Expression node. Child layout by kind:
///   call           children[0] = callee, children[1..] = arguments
///   member_access  children[0] = object, text = member name
///   new_expr       text = created type name (`Capsule`, `address[]`)
///   binary_op      children[0..1] = operands, op = operator (`=` included)
///   unary_op       children[0] = operand, op = operator, text = "postfix" for x++
///   index          children[0] = base, children[1] = index (absent for `T[]`)
///   identifier     text = name (elementary type names in conversions included)
///   literal        text = source text
///   tuple          children = components; op = "[]" for inline arrays
///   opaque         anything else; conditional expressions keep op = "?:" and three children
struct Expression {
  ExprKind kind = ExprKind::opaque;
  std::string op;
  std::string text;
  std::vector<Expression> children;
  SourceSpan span;

  [[nodiscard]] const Expression* callee() const {
    return kind == ExprKind::call && !children.empty() ? &children.front() : nullptr;
  }
  [[nodiscard]] std::span<const Expression> arguments() const {
    if (kind != ExprKind::call || children.size() < 2) return {};
    return std::span<const Expression>(children).subspan(1);
  }
  [[nodiscard]] const Expression* object() const {
    return (kind == ExprKind::member_access || kind == ExprKind::index) && !children.empty() ? &children.front()
                                                                                             : nullptr;
  }
  [[nodiscard]] bool is_identifier(std::string_view name) const {
    return kind == ExprKind::identifier && text == name;
  }
  /// Call whose callee is the plain identifier `name` (`require(...)`).
  [[nodiscard]] bool is_call_to(std::string_view name) const {
    const auto* c = callee();
    return c != nullptr && c->is_identifier(name);
  }
  /// Call of the form `<object>.member(...)`.
  [[nodiscard]] bool is_member_call(std::string_view member) const {
    const auto* c = callee();
    return c != nullptr && c->kind == ExprKind::member_access && c->text == member;
  }
  [[nodiscard]] bool is_number_literal() const;
  [[nodiscard]] bool is_binary(std::string_view oper) const { return kind == ExprKind::binary_op && op == oper; }

  friend bool operator==(const Expression&, const Expression&) = default;
};

/// Renders an expression canonically (no source whitespace, no redundant parentheses).
/// Two structurally equal expressions render identically.
[[nodiscard]] std::string render(const Expression& e);

/// True when every leaf of `e` is a literal (`10**18`, `1 days`, `2`).
[[nodiscard]] bool is_constant_expression(const Expression& e);

struct Param {
  std::string name;  // empty for unnamed parameters
  std::string type_name;
  std::string location;  // memory / storage / calldata, or empty
  SourceSpan span;

  friend bool operator==(const Param&, const Param&) = default;
};

enum class StmtKind {
  expression,
  if_stmt,
  try_catch,
  return_stmt,
  revert_stmt,
  variable_decl,
  block,
  loop,
  opaque,
};

[[nodiscard]] std::string_view to_string(StmtKind kind);

/// Statement node. Layout by kind:
///   expression     exprs[0]; label = "emit" for emit statements
///   if_stmt        exprs[0] = condition, body[0] = then, body[1] = else (optional)
///   try_catch      exprs[0] = guarded expression, body[0] = success block,
///                  catches = one block per clause (label = `Error`/`Panic`/"", declared = clause params)
///   return_stmt    exprs[0] optional
///   revert_stmt    exprs[0] = call of the custom error (`revert OnlyOwner()`)
///   variable_decl  declared = variables, exprs[0] = initializer (optional)
///   block          body; label = "unchecked" for unchecked blocks
///   loop           label = for/while/do; exprs = condition / update; body = init (for) then loop body
///   opaque         unparsed or uninteresting region (assembly, break, recovery)
struct Statement {
  StmtKind kind = StmtKind::opaque;
  std::vector<Expression> exprs;
  std::vector<Statement> body;
  std::vector<Statement> catches;
  std::vector<Param> declared;
  std::string label;
  SourceSpan span;

  friend bool operator==(const Statement&, const Statement&) = default;
};

enum class FunctionKind { function, modifier, constructor, fallback, receive };

[[nodiscard]] std::string_view to_string(FunctionKind kind);

struct ModifierInvocation {
  std::string name;
  std::vector<Expression> arguments;
  SourceSpan span;

  friend bool operator==(const ModifierInvocation&, const ModifierInvocation&) = default;
};

struct FunctionDef {
  std::string name;  // empty for constructor / fallback / receive
  FunctionKind kind = FunctionKind::function;
  std::vector<Param> params;
  std::vector<Param> returns;
  std::vector<ModifierInvocation> modifiers;
  std::string visibility;  // public / external / internal / private, or empty
  bool has_body = false;
  std::vector<Statement> body;
  SourceSpan span;

  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

struct Declaration {
  std::string name;
  std::string type_name;
  std::optional<Expression> initializer;
  SourceSpan span;

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct EnumDef {
  std::string name;
  std::vector<std::string> members;
  SourceSpan span;

  friend bool operator==(const EnumDef&, const EnumDef&) = default;
};

enum class ContractKind { contract, interface, library };

[[nodiscard]] std::string_view to_string(ContractKind kind);

struct ContractDef {
  std::string name;
  ContractKind kind = ContractKind::contract;
  std::vector<FunctionDef> functions;
  std::vector<Declaration> state_var_decls;
  std::vector<EnumDef> enums;
  std::vector<std::string> struct_names;
  SourceSpan span;

  friend bool operator==(const ContractDef&, const ContractDef&) = default;
};

struct PragmaDirective {
  std::string raw_text;
  std::optional<version::VersionRange> parsed_range;  // empty when unparseable
  std::string range_error;
  SourceSpan span;

  friend bool operator==(const PragmaDirective& a, const PragmaDirective& b) {
    return a.raw_text == b.raw_text && a.span == b.span && a.range_error == b.range_error &&
           a.parsed_range.has_value() == b.parsed_range.has_value() &&
           (!a.parsed_range || a.parsed_range->to_string() == b.parsed_range->to_string());
  }
};

struct Diagnostic {
  std::string message;
  SourceSpan span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Tolerant syntax tree of one file. Top-level content is partitioned into
/// pragmas, contracts, free functions and opaque regions (imports, file-level
/// enums/structs/errors, garbage); everything else is whitespace or comments.
struct SourceUnit {
  std::vector<PragmaDirective> pragmas;
  std::vector<ContractDef> contracts;
  std::vector<FunctionDef> free_functions;
  std::vector<EnumDef> enums;  // file-level enums (also covered by opaque regions)
  std::vector<std::string> struct_names;
  std::vector<SourceSpan> opaque_regions;
  std::vector<Diagnostic> diagnostics;

  friend bool operator==(const SourceUnit&, const SourceUnit&) = default;
};

}  // namespace solbench::frontend
