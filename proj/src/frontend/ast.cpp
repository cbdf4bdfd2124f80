#include "solbench/frontend/ast.hpp"

#include <algorithm>
#include <cctype>

namespace solbench::frontend {

std::string_view to_string(ExprKind kind) {
  switch (kind) {
    case ExprKind::call: return "call";
    case ExprKind::member_access: return "member_access";
    case ExprKind::new_expr: return "new_expr";
    case ExprKind::binary_op: return "binary_op";
    case ExprKind::unary_op: return "unary_op";
    case ExprKind::index: return "index";
    case ExprKind::identifier: return "identifier";
    case ExprKind::literal: return "literal";
    case ExprKind::tuple: return "tuple";
    case ExprKind::opaque: return "opaque";
  }
  return "opaque";
}

std::string_view to_string(StmtKind kind) {
  switch (kind) {
    case StmtKind::expression: return "expression";
    case StmtKind::if_stmt: return "if";
    case StmtKind::try_catch: return "try_catch";
    case StmtKind::return_stmt: return "return";
    case StmtKind::revert_stmt: return "revert";
    case StmtKind::variable_decl: return "variable_decl";
    case StmtKind::block: return "block";
    case StmtKind::loop: return "loop";
    case StmtKind::opaque: return "opaque";
  }
  return "opaque";
}

std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::function: return "function";
    case FunctionKind::modifier: return "modifier";
    case FunctionKind::constructor: return "constructor";
    case FunctionKind::fallback: return "fallback";
    case FunctionKind::receive: return "receive";
  }
  return "function";
}

std::string_view to_string(ContractKind kind) {
  switch (kind) {
    case ContractKind::contract: return "contract";
    case ContractKind::interface: return "interface";
    case ContractKind::library: return "library";
  }
  return "contract";
}

bool Expression::is_number_literal() const {
  return kind == ExprKind::literal && !text.empty() &&
         (std::isdigit(static_cast<unsigned char>(text.front())) != 0 || text.front() == '.');
}

namespace {

void render_into(const Expression& e, std::string& out) {
  auto list = [&](std::size_t from) {
    for (std::size_t i = from; i < e.children.size(); ++i) {
      if (i > from) out += ',';
      render_into(e.children[i], out);
    }
  };
  switch (e.kind) {
    case ExprKind::identifier:
    case ExprKind::literal:
      out += e.text;
      return;
    case ExprKind::new_expr:
      out += "new ";
      out += e.text;
      return;
    case ExprKind::member_access:
      if (!e.children.empty()) render_into(e.children[0], out);
      out += '.';
      out += e.text;
      return;
    case ExprKind::call:
      if (!e.children.empty()) render_into(e.children[0], out);
      out += '(';
      list(1);
      out += ')';
      return;
    case ExprKind::index:
      if (!e.children.empty()) render_into(e.children[0], out);
      out += '[';
      if (e.children.size() > 1) render_into(e.children[1], out);
      out += ']';
      return;
    case ExprKind::unary_op:
      if (e.text == "postfix") {
        out += '(';
        if (!e.children.empty()) render_into(e.children[0], out);
        out += e.op;
        out += ')';
      } else {
        out += '(';
        out += e.op;
        if (e.op == "delete") out += ' ';
        if (!e.children.empty()) render_into(e.children[0], out);
        out += ')';
      }
      return;
    case ExprKind::binary_op:
      out += '(';
      if (!e.children.empty()) render_into(e.children[0], out);
      out += e.op;
      if (e.children.size() > 1) render_into(e.children[1], out);
      out += ')';
      return;
    case ExprKind::tuple:
      out += e.op == "[]" ? '[' : '(';
      list(0);
      out += e.op == "[]" ? ']' : ')';
      return;
    case ExprKind::opaque:
      if (e.op == "?:" && e.children.size() == 3) {
        out += '(';
        render_into(e.children[0], out);
        out += '?';
        render_into(e.children[1], out);
        out += ':';
        render_into(e.children[2], out);
        out += ')';
      } else {
        out += "<?>";
      }
      return;
  }
}

}  // namespace

std::string render(const Expression& e) {
  std::string out;
  render_into(e, out);
  return out;
}

bool is_constant_expression(const Expression& e) {
  switch (e.kind) {
    case ExprKind::literal: return true;
    case ExprKind::binary_op:
    case ExprKind::unary_op:
    case ExprKind::tuple:
      return !e.children.empty() &&
             std::all_of(e.children.begin(), e.children.end(), [](const Expression& c) { return is_constant_expression(c); });
    default: return false;
  }
}

}  // namespace solbench::frontend
