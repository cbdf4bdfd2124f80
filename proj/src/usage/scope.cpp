#include "solbench/usage/scope.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "solbench/frontend/lexer.hpp"
#include "solbench/frontend/walk.hpp"

namespace solbench::usage {

using frontend::ExprKind;
using frontend::Expression;

namespace {

constexpr std::array<std::string_view, 5> kLowLevel = {"call", "delegatecall", "staticcall", "send", "transfer"};

constexpr std::array<std::string_view, 9> kBuiltinRoots = {"this", "super", "abi", "msg",    "block",
                                                           "tx",   "bytes", "string", "type"};

// using-for idioms on values (SafeMath, Strings, EnumerableSet, arrays).
constexpr std::array<std::string_view, 14> kValueMembers = {"push", "pop",      "add",         "sub", "mul",
                                                            "div",  "mod",      "toString",    "min", "max",
                                                            "abs",  "average",  "toHexString", "concat"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_upper(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s.front())); }

bool is_try_member(std::string_view m) {
  return m.size() > 3 && m.starts_with("try") && std::isupper(static_cast<unsigned char>(m[3]));
}

const Expression& root_of(const Expression& e) {
  const Expression* cur = &e;
  while ((cur->kind == ExprKind::member_access || cur->kind == ExprKind::index) && !cur->children.empty()) {
    cur = &cur->children.front();
  }
  return *cur;
}

}  // namespace

bool is_low_level_member(std::string_view member) {
  return std::find(kLowLevel.begin(), kLowLevel.end(), member) != kLowLevel.end();
}

bool is_builtin_root(std::string_view name) {
  return std::find(kBuiltinRoots.begin(), kBuiltinRoots.end(), name) != kBuiltinRoots.end();
}

bool is_elementary_type(std::string_view type_name) {
  type_name = trim(type_name);
  if (type_name.find_first_of("[(") != std::string_view::npos) return false;
  const auto space = type_name.find(' ');
  return frontend::is_elementary_type_name(type_name.substr(0, space));
}

std::optional<std::string> element_type(std::string_view type_name) {
  type_name = trim(type_name);
  if (type_name.starts_with("mapping")) {
    const auto open = type_name.find('(');
    if (open == std::string_view::npos) return std::nullopt;
    int depth = 0;
    std::size_t arrow = std::string_view::npos;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = open; i < type_name.size(); ++i) {
      const char c = type_name[i];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) {
        close = i;
        break;
      }
      if (depth == 1 && arrow == std::string_view::npos && type_name.substr(i, 2) == "=>") arrow = i;
    }
    if (arrow == std::string_view::npos || close == std::string_view::npos) return std::nullopt;
    return std::string(trim(type_name.substr(arrow + 2, close - arrow - 2)));
  }
  if (type_name.ends_with(']')) {
    const auto open = type_name.rfind('[');
    if (open == std::string_view::npos) return std::nullopt;
    return std::string(trim(type_name.substr(0, open)));
  }
  return std::nullopt;
}

std::string chain_of(const Expression& e) {
  if (e.kind == ExprKind::identifier) return e.text;
  if (e.kind == ExprKind::member_access && !e.children.empty()) {
    auto base = chain_of(e.children.front());
    return base.empty() ? std::string() : base + "." + e.text;
  }
  return {};
}

UnitNames::UnitNames(const frontend::SourceUnit& unit) {
  for (const auto& e : unit.enums) enums_.insert(e.name);
  for (const auto& s : unit.struct_names) structs_.insert(s);
  for (const auto& c : unit.contracts) {
    (c.kind == frontend::ContractKind::library ? libraries_ : contracts_).insert(c.name);
    for (const auto& e : c.enums) enums_.insert(e.name);
    for (const auto& s : c.struct_names) structs_.insert(s);
    for (const auto& f : c.functions) {
      if (f.kind == frontend::FunctionKind::modifier) modifiers_.emplace(f.name, &f);
    }
  }
}

const frontend::FunctionDef* UnitNames::modifier(std::string_view name) const {
  auto it = modifiers_.find(std::string(name));
  return it == modifiers_.end() ? nullptr : it->second;
}

Scope::Scope(const frontend::SourceUnit& unit, const UnitNames& names, const frontend::ContractDef* contract,
             const frontend::FunctionDef* function)
    : names_(names), contract_(contract), function_(function) {
  auto declare = [&](const frontend::Param& p) {
    if (!p.name.empty()) vars_.insert_or_assign(p.name, p.type_name);
  };
  // Least specific first so that closer declarations win.
  for (const auto& c : unit.contracts) {
    if (&c == contract) continue;
    for (const auto& d : c.state_var_decls) vars_.insert_or_assign(d.name, d.type_name);
  }
  if (contract != nullptr) {
    for (const auto& d : contract->state_var_decls) vars_.insert_or_assign(d.name, d.type_name);
  }
  if (function != nullptr) {
    frontend::visit_statements(function->body, [&](const frontend::Statement& s) {
      for (const auto& p : s.declared) declare(p);
    });
    for (const auto& p : function->returns) declare(p);
    for (const auto& p : function->params) {
      declare(p);
      if (!p.name.empty()) params_.insert(p.name);
    }
  }
}

std::optional<std::string> Scope::type_of(std::string_view name) const {
  auto it = vars_.find(std::string(name));
  if (it == vars_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Scope::type_of(const Expression& e) const {
  if (e.kind == ExprKind::identifier) return type_of(e.text);
  if (e.kind == ExprKind::index && !e.children.empty()) {
    auto base = type_of(e.children.front());
    if (!base) return std::nullopt;
    return element_type(*base);
  }
  return std::nullopt;
}

bool Scope::is_integer(const Expression& e) const {
  switch (e.kind) {
    case ExprKind::literal:
      return e.is_number_literal();
    case ExprKind::identifier:
    case ExprKind::index: {
      auto t = type_of(e);
      return t && (t->starts_with("uint") || t->starts_with("int")) && is_elementary_type(*t);
    }
    case ExprKind::member_access:
      return e.text == "length";
    case ExprKind::unary_op:
      return !e.children.empty() && e.op != "!" && is_integer(e.children.front());
    case ExprKind::binary_op: {
      static constexpr std::array<std::string_view, 6> arithmetic = {"+", "-", "*", "/", "%", "**"};
      return std::find(arithmetic.begin(), arithmetic.end(), e.op) != arithmetic.end() && e.children.size() == 2 &&
             is_integer(e.children[0]) && is_integer(e.children[1]);
    }
    case ExprKind::call: {
      const auto* callee = e.callee();
      return callee != nullptr && callee->kind == ExprKind::identifier &&
             (callee->text.starts_with("uint") || callee->text.starts_with("int")) &&
             frontend::is_elementary_type_name(callee->text);
    }
    default:
      return false;
  }
}

bool Scope::is_contract_type(std::string_view type_name) const {
  type_name = trim(type_name);
  if (type_name.empty() || is_elementary_type(type_name)) return false;
  if (type_name.starts_with("mapping") || type_name.ends_with("]")) return false;
  if (names_.is_struct(type_name) || names_.is_enum(type_name) || names_.is_library(type_name)) return false;
  // Qualified struct names (`Lib.Position`) are not resolvable; the last segment decides.
  const auto dot = type_name.rfind('.');
  if (dot != std::string_view::npos) {
    const auto last = type_name.substr(dot + 1);
    if (names_.is_struct(last) || names_.is_enum(last)) return false;
  }
  return true;
}

bool Scope::receiver_is_contract(const Expression& r) const {
  switch (r.kind) {
    case ExprKind::identifier: {
      if (is_builtin_root(r.text) || frontend::is_elementary_type_name(r.text)) return false;
      if (auto t = type_of(r.text)) return is_contract_type(*t);
      if (names_.is_enum(r.text) || names_.is_struct(r.text) || names_.is_library(r.text) ||
          names_.is_contract(r.text)) {
        return false;
      }
      // Undeclared: inherited state variable (lower case) or imported library / base contract.
      return !starts_upper(r.text);
    }
    case ExprKind::index: {
      if (auto t = type_of(r)) return is_contract_type(*t);
      [[fallthrough]];
    }
    case ExprKind::member_access: {
      const auto& root = root_of(r);
      if (root.kind != ExprKind::identifier) return false;
      if (is_builtin_root(root.text)) return false;
      if (auto t = type_of(root.text)) {
        if (is_elementary_type(*t)) return false;
        if (r.kind == ExprKind::index && !element_type(*t)) return false;
      }
      return true;
    }
    case ExprKind::call: {
      const auto* callee = r.callee();
      if (callee == nullptr) return false;
      if (callee->kind == ExprKind::identifier) {
        const auto& name = callee->text;
        if (frontend::is_elementary_type_name(name) || name == "payable") return false;
        if (names_.is_struct(name) || names_.is_enum(name) || names_.is_library(name)) return false;
        return starts_upper(name);  // conversion to a contract/interface type
      }
      return is_external_call(r);
    }
    default:
      return false;
  }
}

bool Scope::is_external_call(const Expression& call) const {
  if (call.kind != ExprKind::call) return false;
  const auto* callee = call.callee();
  if (callee == nullptr || callee->kind != ExprKind::member_access || callee->children.empty()) return false;
  const auto& member = callee->text;
  if (is_low_level_member(member)) return true;
  if (std::find(kValueMembers.begin(), kValueMembers.end(), member) != kValueMembers.end() || is_try_member(member)) {
    return false;
  }
  return receiver_is_contract(callee->children.front());
}

bool Scope::is_enum_conversion(const Expression& call) const {
  if (call.kind != ExprKind::call || call.arguments().size() != 1) return false;
  const auto* callee = call.callee();
  if (callee == nullptr) return false;
  if (callee->kind == ExprKind::identifier || callee->kind == ExprKind::member_access) {
    return names_.is_enum(callee->text);
  }
  return false;
}

bool Scope::references_param(const Expression& e) const {
  return frontend::any_of(e, [&](const Expression& x) { return x.kind == ExprKind::identifier && is_param(x.text); });
}

}  // namespace solbench::usage
