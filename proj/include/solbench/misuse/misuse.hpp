#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/frontend/ast.hpp"
#include "solbench/version/eh_timeline.hpp"
#include "solbench/version/solc_version.hpp"

namespace solbench::misuse {

using version::EhFeature;

enum class MisuseCategory { ECall, FAA, ECon, AA, PA, DZ, ETC };

inline constexpr std::array<MisuseCategory, 7> kAllMisuseCategories = {
    MisuseCategory::ECall, MisuseCategory::FAA, MisuseCategory::ECon, MisuseCategory::AA,
    MisuseCategory::PA,    MisuseCategory::DZ,  MisuseCategory::ETC,
};

[[nodiscard]] std::string_view to_string(MisuseCategory c);
[[nodiscard]] std::optional<MisuseCategory> misuse_category_from_string(std::string_view s);
/// Features that count as a proper guard for the category.
[[nodiscard]] std::span<const EhFeature> legal_guards(MisuseCategory c);
/// The feature reported as missing (first legal guard).
[[nodiscard]] EhFeature required_feature(MisuseCategory c);
/// DZ and PA: the compiler checks these by default from 0.8.7 on.
[[nodiscard]] bool version_gated(MisuseCategory c);

/// A place where the documentation asks for an EH guard. The pointers refer
/// into the SourceUnit the site was produced from.
struct CandidateSite {
  MisuseCategory kind = MisuseCategory::ECall;
  frontend::SourceSpan span;
  const frontend::Expression* subject = nullptr;  // null for FAA
  const frontend::Param* param = nullptr;         // FAA only
  /// Expression a guard has to test: divisor, popped array, allocation length,
  /// converted value. Null for ECall/ECon/FAA.
  const frontend::Expression* key = nullptr;
  const frontend::FunctionDef* function = nullptr;
  const frontend::ContractDef* contract = nullptr;
  std::string contract_name;
  std::string function_name;
  std::string evidence;
};

enum class GuardKind { eh_guarded, if_guarded, unguarded };

struct GuardVerdict {
  GuardKind kind = GuardKind::unguarded;
  std::optional<EhFeature> feature;  // set iff kind == eh_guarded

  friend bool operator==(const GuardVerdict&, const GuardVerdict&) = default;
};

[[nodiscard]] std::string_view to_string(GuardKind k);

struct MisuseRecord {
  MisuseCategory category = MisuseCategory::ECall;
  frontend::SourceSpan span;
  EhFeature required_feature = EhFeature::require;
  std::string evidence;
  bool suppressed_by_version = false;
  std::string contract_name;
  std::string function_name;

  friend bool operator==(const MisuseRecord&, const MisuseRecord&) = default;
};

/// Sites inside function and modifier bodies, ordered by position.
[[nodiscard]] std::vector<CandidateSite> candidate_sites(const frontend::SourceUnit& unit);

[[nodiscard]] GuardVerdict is_guarded(const CandidateSite& site, const frontend::SourceUnit& unit);

/// True when the lowest release admitted by `range` already ships the
/// default overflow/underflow, division and pop checks.
[[nodiscard]] bool compiler_checks_by_default(const std::optional<version::VersionRange>& range,
                                              std::span<const version::SolcVersion> releases);

/// One record per unguarded site.
[[nodiscard]] std::vector<MisuseRecord> detect_misuses(const frontend::SourceUnit& unit,
                                                       const std::optional<version::VersionRange>& range,
                                                       std::span<const version::SolcVersion> releases);
/// Uses the unit's own pragma range and the built-in release list.
[[nodiscard]] std::vector<MisuseRecord> detect_misuses(const frontend::SourceUnit& unit);

struct CategoryTally {
  std::size_t total_cases = 0;
  std::size_t guarded = 0;
  std::size_t missing = 0;
  std::size_t suppressed = 0;  // counted as guarded
  double missing_pct = 0.0;

  friend bool operator==(const CategoryTally&, const CategoryTally&) = default;
};

using Tally = std::array<CategoryTally, kAllMisuseCategories.size()>;

[[nodiscard]] inline CategoryTally& at(Tally& t, MisuseCategory c) { return t[static_cast<std::size_t>(c)]; }
[[nodiscard]] inline const CategoryTally& at(const Tally& t, MisuseCategory c) {
  return t[static_cast<std::size_t>(c)];
}

[[nodiscard]] Tally tally(std::span<const MisuseRecord> misuses, std::span<const CandidateSite> sites);
/// Associative merge of two shard tallies.
[[nodiscard]] Tally merge(const Tally& a, const Tally& b);

}  // namespace solbench::misuse
