#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "solbench/frontend/ast.hpp"

namespace solbench::frontend {

using NodeRef = std::variant<const Statement*, const Expression*>;

struct WalkMatch {
  NodeRef node;
  const FunctionDef* function = nullptr;  // null for state variable initializers
  const ContractDef* contract = nullptr;  // null for free functions
};

/// Pre-order traversal of every statement and expression in the unit, in
/// source order; returns the nodes accepted by `pred`.
[[nodiscard]] std::vector<WalkMatch> walk(const SourceUnit& unit, const std::function<bool(const NodeRef&)>& pred);

/// Convenience: expressions only.
[[nodiscard]] std::vector<WalkMatch> walk_expressions(const SourceUnit& unit,
                                                      const std::function<bool(const Expression&)>& pred);

// Pre-order visitors over a subtree. Expressions inside statements are visited too.
void visit(const Expression& e, const std::function<void(const Expression&)>& f);
void visit(const Statement& s, const std::function<void(const Expression&)>& f);
void visit(std::span<const Statement> body, const std::function<void(const Expression&)>& f);
void visit_statements(std::span<const Statement> body, const std::function<void(const Statement&)>& f);

/// True when some node of `e` (itself included) satisfies `pred`.
[[nodiscard]] bool any_of(const Expression& e, const std::function<bool(const Expression&)>& pred);

}  // namespace solbench::frontend
