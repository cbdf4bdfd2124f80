#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/frontend/ast.hpp"
#include "solbench/usage/scope.hpp"
#include "solbench/version/eh_timeline.hpp"

namespace solbench::usage {

using version::EhFeature;

enum class UsageCategory {
  require_function_arguments,
  require_external_calls,
  require_unclassified,  // neither arguments nor external calls; not part of category tallies
  try_external_calls,
  try_external_contract_creation,
  revert_function_form,
  revert_statement_form,
  assert_overflow_underflow,
  assert_division_by_zero,
  assert_array_operations,
  assert_program_logic,
  assert_enum_type_conversion,
};

inline constexpr UsageCategory kAllUsageCategories[] = {
    UsageCategory::require_function_arguments, UsageCategory::require_external_calls,
    UsageCategory::require_unclassified,       UsageCategory::try_external_calls,
    UsageCategory::try_external_contract_creation, UsageCategory::revert_function_form,
    UsageCategory::revert_statement_form,      UsageCategory::assert_overflow_underflow,
    UsageCategory::assert_division_by_zero,    UsageCategory::assert_array_operations,
    UsageCategory::assert_program_logic,       UsageCategory::assert_enum_type_conversion,
};

/// Short name without the feature prefix: "function_arguments", "external_calls", ...
[[nodiscard]] std::string_view category_name(UsageCategory c);
[[nodiscard]] std::optional<UsageCategory> category_from_string(EhFeature feature, std::string_view name);
[[nodiscard]] EhFeature owning_feature(UsageCategory c);
/// Panic codes raised by the checks an assert category stands for (empty for non-assert categories).
[[nodiscard]] std::span<const std::uint8_t> panic_codes(UsageCategory c);

/// The nine usage productions of the rule grammar.
enum class RuleId {
  external_call_check,   // eh(c.f com (t|f), t|er)
  argument_check,        // eh(t com t, t)
  arithmetic_check,      // eh(t op t)
  error_or_message,      // eh(er | t)
  array_length_check,    // eh(arr.l com t) & u
  enum_conversion,       // eh(e(t))
  array_pop,             // eh(arr.pop())
  contract_creation,     // eh(new c.f)
  value_comparison,      // eh(t com t)
};

[[nodiscard]] std::string_view to_string(RuleId r);

struct UsageRecord {
  EhFeature feature = EhFeature::require;
  UsageCategory category = UsageCategory::require_unclassified;
  RuleId rule = RuleId::value_comparison;
  frontend::SourceSpan span;
  std::string contract_name;
  std::string function_name;
  bool message_present = false;

  friend bool operator==(const UsageRecord&, const UsageRecord&) = default;
};

/// One record per require/assert call, revert call or statement and try statement,
/// in source order.
[[nodiscard]] std::vector<UsageRecord> detect_usages(const frontend::SourceUnit& unit);

[[nodiscard]] UsageCategory classify_require(const frontend::Expression& call, const Scope& scope);
[[nodiscard]] UsageCategory classify_assert(const frontend::Expression& call, const Scope& scope);
/// `node` is either a revert statement or a `revert(...)` call expression.
[[nodiscard]] UsageCategory classify_revert(const frontend::Statement& revert_stmt);
[[nodiscard]] UsageCategory classify_revert(const frontend::Expression& revert_call);
[[nodiscard]] UsageCategory classify_try(const frontend::Statement& try_stmt);

/// Rule that produced a category for the given condition.
[[nodiscard]] RuleId rule_for(UsageCategory c, const frontend::Expression* condition);

}  // namespace solbench::usage
