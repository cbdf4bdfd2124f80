#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "solbench/frontend/ast.hpp"
#include "solbench/frontend/lexer.hpp"

namespace solbench::frontend {

/// Builds a SourceUnit from a token stream. Never fails: unrecognised input is
/// recorded as opaque regions/statements and a diagnostic at the recovery point.
[[nodiscard]] SourceUnit parse(std::span<const Token> tokens);

/// sanitize_utf8 + tokenize + parse.
[[nodiscard]] SourceUnit parse_source(std::string_view text, std::uint32_t file_id = 0);

[[nodiscard]] inline const std::vector<PragmaDirective>& pragmas(const SourceUnit& unit) { return unit.pragmas; }

/// Conjunction of every parseable `pragma solidity` range in the unit; empty
/// when the unit has none.
[[nodiscard]] std::optional<version::VersionRange> effective_range(const SourceUnit& unit);

}  // namespace solbench::frontend
