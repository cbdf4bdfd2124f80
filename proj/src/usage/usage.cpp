#include "solbench/usage/usage.hpp"

#include <map>
#include <memory>

#include "solbench/frontend/walk.hpp"

namespace solbench::usage {

using frontend::ExprKind;
using frontend::Expression;
using frontend::Statement;
using frontend::StmtKind;

std::string_view category_name(UsageCategory c) {
  switch (c) {
    case UsageCategory::require_function_arguments: return "function_arguments";
    case UsageCategory::require_external_calls: return "external_calls";
    case UsageCategory::require_unclassified: return "unclassified";
    case UsageCategory::try_external_calls: return "external_calls";
    case UsageCategory::try_external_contract_creation: return "external_contract_creation";
    case UsageCategory::revert_function_form: return "function_form";
    case UsageCategory::revert_statement_form: return "statement_form";
    case UsageCategory::assert_overflow_underflow: return "overflow_underflow";
    case UsageCategory::assert_division_by_zero: return "division_by_zero";
    case UsageCategory::assert_array_operations: return "array_operations";
    case UsageCategory::assert_program_logic: return "program_logic";
    case UsageCategory::assert_enum_type_conversion: return "enum_type_conversion";
  }
  return "unclassified";
}

EhFeature owning_feature(UsageCategory c) {
  switch (c) {
    case UsageCategory::require_function_arguments:
    case UsageCategory::require_external_calls:
    case UsageCategory::require_unclassified:
      return EhFeature::require;
    case UsageCategory::try_external_calls:
    case UsageCategory::try_external_contract_creation:
      return EhFeature::try_catch;
    case UsageCategory::revert_function_form:
    case UsageCategory::revert_statement_form:
      return EhFeature::revert;
    default:
      return EhFeature::assert_call;
  }
}

std::optional<UsageCategory> category_from_string(EhFeature feature, std::string_view name) {
  for (auto c : kAllUsageCategories) {
    if (owning_feature(c) == feature && category_name(c) == name) return c;
  }
  return std::nullopt;
}

std::span<const std::uint8_t> panic_codes(UsageCategory c) {
  static constexpr std::uint8_t overflow[] = {0x11};
  static constexpr std::uint8_t division[] = {0x12};
  static constexpr std::uint8_t array[] = {0x22, 0x31, 0x32, 0x41};
  static constexpr std::uint8_t logic[] = {0x01, 0x51};
  static constexpr std::uint8_t enums[] = {0x21};
  switch (c) {
    case UsageCategory::assert_overflow_underflow: return overflow;
    case UsageCategory::assert_division_by_zero: return division;
    case UsageCategory::assert_array_operations: return array;
    case UsageCategory::assert_program_logic: return logic;
    case UsageCategory::assert_enum_type_conversion: return enums;
    default: return {};
  }
}

std::string_view to_string(RuleId r) {
  switch (r) {
    case RuleId::external_call_check: return "external_call_check";
    case RuleId::argument_check: return "argument_check";
    case RuleId::arithmetic_check: return "arithmetic_check";
    case RuleId::error_or_message: return "error_or_message";
    case RuleId::array_length_check: return "array_length_check";
    case RuleId::enum_conversion: return "enum_conversion";
    case RuleId::array_pop: return "array_pop";
    case RuleId::contract_creation: return "contract_creation";
    case RuleId::value_comparison: return "value_comparison";
  }
  return "value_comparison";
}

namespace {

bool is_pop_call(const Expression& e) { return e.is_member_call("pop") && e.arguments().empty(); }

bool touches_array(const Expression& cond) {
  return frontend::any_of(cond, [](const Expression& x) {
    return (x.kind == ExprKind::member_access && x.text == "length") || x.kind == ExprKind::index || is_pop_call(x);
  });
}

const Expression* first_argument(const Expression& call) {
  const auto args = call.arguments();
  return args.empty() ? nullptr : &args.front();
}

bool creates_contract(const Expression& e) {
  return frontend::any_of(e, [](const Expression& x) {
    const auto* callee = x.callee();
    return callee != nullptr && callee->kind == ExprKind::new_expr;
  });
}

}  // namespace

RuleId rule_for(UsageCategory c, const Expression* condition) {
  switch (c) {
    case UsageCategory::require_external_calls:
    case UsageCategory::try_external_calls:
      return RuleId::external_call_check;
    case UsageCategory::require_function_arguments: return RuleId::argument_check;
    case UsageCategory::try_external_contract_creation: return RuleId::contract_creation;
    case UsageCategory::revert_function_form:
    case UsageCategory::revert_statement_form:
      return RuleId::error_or_message;
    case UsageCategory::assert_overflow_underflow:
    case UsageCategory::assert_division_by_zero:
      return RuleId::arithmetic_check;
    case UsageCategory::assert_array_operations:
      return condition != nullptr && frontend::any_of(*condition, is_pop_call) ? RuleId::array_pop
                                                                               : RuleId::array_length_check;
    case UsageCategory::assert_enum_type_conversion: return RuleId::enum_conversion;
    case UsageCategory::require_unclassified:
    case UsageCategory::assert_program_logic:
      return RuleId::value_comparison;
  }
  return RuleId::value_comparison;
}

UsageCategory classify_require(const Expression& call, const Scope& scope) {
  const auto* cond = first_argument(call);
  if (cond == nullptr) return UsageCategory::require_unclassified;
  if (frontend::any_of(*cond, [&](const Expression& x) { return scope.is_external_call(x); })) {
    return UsageCategory::require_external_calls;
  }
  if (scope.references_param(*cond)) return UsageCategory::require_function_arguments;
  return UsageCategory::require_unclassified;
}

UsageCategory classify_assert(const Expression& call, const Scope& scope) {
  const auto* cond = first_argument(call);
  if (cond == nullptr) return UsageCategory::assert_program_logic;
  const bool overflow = frontend::any_of(*cond, [&](const Expression& x) {
    return (x.is_binary("+") || x.is_binary("-") || x.is_binary("*")) && scope.is_integer(x.children[0]) &&
           scope.is_integer(x.children[1]);
  });
  if (overflow) return UsageCategory::assert_overflow_underflow;
  if (frontend::any_of(*cond, [](const Expression& x) { return x.is_binary("/"); })) {
    return UsageCategory::assert_division_by_zero;
  }
  if (touches_array(*cond)) return UsageCategory::assert_array_operations;
  if (frontend::any_of(*cond, [&](const Expression& x) { return scope.is_enum_conversion(x); })) {
    return UsageCategory::assert_enum_type_conversion;
  }
  return UsageCategory::assert_program_logic;
}

UsageCategory classify_revert(const Statement&) { return UsageCategory::revert_function_form; }

UsageCategory classify_revert(const Expression&) { return UsageCategory::revert_statement_form; }

UsageCategory classify_try(const Statement& try_stmt) {
  if (!try_stmt.exprs.empty() && creates_contract(try_stmt.exprs.front())) {
    return UsageCategory::try_external_contract_creation;
  }
  return UsageCategory::try_external_calls;
}

std::vector<UsageRecord> detect_usages(const frontend::SourceUnit& unit) {
  const UnitNames names(unit);
  std::map<std::pair<const frontend::FunctionDef*, const frontend::ContractDef*>, std::unique_ptr<Scope>> scopes;
  auto scope_for = [&](const frontend::WalkMatch& m) -> const Scope& {
    auto& slot = scopes[{m.function, m.contract}];
    if (!slot) slot = std::make_unique<Scope>(unit, names, m.contract, m.function);
    return *slot;
  };

  std::vector<UsageRecord> out;
  const auto matches = frontend::walk(unit, [](const frontend::NodeRef& n) {
    if (const auto* const* s = std::get_if<const Statement*>(&n)) {
      return (*s)->kind == StmtKind::revert_stmt || (*s)->kind == StmtKind::try_catch;
    }
    const auto* e = std::get<const Expression*>(n);
    return e->is_call_to("require") || e->is_call_to("assert") || e->is_call_to("revert");
  });

  for (const auto& m : matches) {
    UsageRecord r;
    r.contract_name = m.contract != nullptr ? m.contract->name : std::string();
    r.function_name = m.function != nullptr ? m.function->name : std::string();
    if (m.function != nullptr && r.function_name.empty()) r.function_name = std::string(to_string(m.function->kind));
    const Expression* condition = nullptr;
    if (const auto* const* s = std::get_if<const Statement*>(&m.node)) {
      const auto& stmt = **s;
      r.span = stmt.span;
      if (stmt.kind == StmtKind::revert_stmt) {
        r.category = classify_revert(stmt);
        r.message_present = true;
      } else {
        r.category = classify_try(stmt);
      }
    } else {
      const auto& call = *std::get<const Expression*>(m.node);
      r.span = call.span;
      const auto& scope = scope_for(m);
      condition = first_argument(call);
      if (call.is_call_to("require")) {
        r.category = classify_require(call, scope);
        r.message_present = call.arguments().size() >= 2;
      } else if (call.is_call_to("assert")) {
        r.category = classify_assert(call, scope);
      } else {
        r.category = classify_revert(call);
        r.message_present = !call.arguments().empty();
      }
    }
    r.feature = owning_feature(r.category);
    r.rule = rule_for(r.category, condition);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace solbench::usage
