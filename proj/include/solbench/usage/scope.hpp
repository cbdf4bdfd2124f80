#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "solbench/frontend/ast.hpp"

namespace solbench::usage {

/// Names declared across a whole unit: enums, structs, contracts and libraries.
class UnitNames {
 public:
  explicit UnitNames(const frontend::SourceUnit& unit);

  [[nodiscard]] bool is_enum(std::string_view name) const { return enums_.contains(std::string(name)); }
  [[nodiscard]] bool is_struct(std::string_view name) const { return structs_.contains(std::string(name)); }
  [[nodiscard]] bool is_library(std::string_view name) const { return libraries_.contains(std::string(name)); }
  [[nodiscard]] bool is_contract(std::string_view name) const { return contracts_.contains(std::string(name)); }
  [[nodiscard]] const frontend::FunctionDef* modifier(std::string_view name) const;

 private:
  std::unordered_set<std::string> enums_, structs_, libraries_, contracts_;
  std::unordered_map<std::string, const frontend::FunctionDef*> modifiers_;
};

/// Syntactic environment of one function: parameters, every local declared
/// anywhere in its body (flow-insensitive) and the state variables of the unit.
/// There is no cross-file resolution; unknown names stay unknown.
class Scope {
 public:
  Scope(const frontend::SourceUnit& unit, const UnitNames& names, const frontend::ContractDef* contract,
        const frontend::FunctionDef* function);

  [[nodiscard]] const frontend::FunctionDef* function() const { return function_; }
  [[nodiscard]] const frontend::ContractDef* contract() const { return contract_; }
  [[nodiscard]] const UnitNames& names() const { return names_; }

  [[nodiscard]] bool is_param(std::string_view name) const { return params_.contains(std::string(name)); }
  [[nodiscard]] std::optional<std::string> type_of(std::string_view name) const;
  /// Declared type of identifiers and of index expressions over declared mappings/arrays.
  [[nodiscard]] std::optional<std::string> type_of(const frontend::Expression& e) const;

  [[nodiscard]] bool is_integer(const frontend::Expression& e) const;
  /// Member call on another contract (or a low-level call on an address).
  [[nodiscard]] bool is_external_call(const frontend::Expression& call) const;
  /// `E(x)` / `Lib.E(x)` where E names an enum declared in the unit.
  [[nodiscard]] bool is_enum_conversion(const frontend::Expression& call) const;
  /// Some parameter of the function is referenced inside `e`.
  [[nodiscard]] bool references_param(const frontend::Expression& e) const;

 private:
  [[nodiscard]] bool receiver_is_contract(const frontend::Expression& r) const;
  [[nodiscard]] bool is_contract_type(std::string_view type_name) const;

  const UnitNames& names_;
  const frontend::ContractDef* contract_;
  const frontend::FunctionDef* function_;
  std::unordered_set<std::string> params_;
  std::unordered_map<std::string, std::string> vars_;
};

[[nodiscard]] bool is_elementary_type(std::string_view type_name);
/// Value type of `mapping(K => V)` or element type of `T[]` / `T[n]`.
[[nodiscard]] std::optional<std::string> element_type(std::string_view type_name);
/// Identifier or dotted member chain (`a`, `map.keys`); empty for anything else.
[[nodiscard]] std::string chain_of(const frontend::Expression& e);
/// Low-level address members that always leave the contract.
[[nodiscard]] bool is_low_level_member(std::string_view member);
/// Global objects that are never contracts.
[[nodiscard]] bool is_builtin_root(std::string_view name);

}  // namespace solbench::usage
