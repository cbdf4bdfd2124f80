#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solbench::version {

/// A released solc compiler version. Pre-release and nightly builds are not modelled.
struct SolcVersion {
  std::uint32_t major = 0;
  std::uint32_t minor = 0;
  std::uint32_t patch = 0;

  friend constexpr auto operator<=>(const SolcVersion&, const SolcVersion&) = default;

  [[nodiscard]] std::string to_string() const;
};

class VersionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "0.8.19" or "v0.8.19". All three components are required.
/// Throws VersionError on anything else.
[[nodiscard]] SolcVersion parse_version(std::string_view text);

enum class Relation { ge, gt, le, lt, eq, caret };

struct Comparator {
  Relation relation = Relation::eq;
  SolcVersion version;

  [[nodiscard]] bool satisfied_by(const SolcVersion& v) const;
  [[nodiscard]] std::string to_string() const;
};

/// Conjunction of comparators, as written after `pragma solidity`.
struct VersionRange {
  std::vector<Comparator> comparators;

  [[nodiscard]] bool satisfies(const SolcVersion& v) const;
  [[nodiscard]] std::string to_string() const;
  /// Conjunction of two ranges (used when a file carries several pragmas).
  [[nodiscard]] VersionRange intersect(const VersionRange& other) const;
};

/// Exclusive upper bound of a caret range: bump the left-most non-zero component.
[[nodiscard]] SolcVersion caret_upper_bound(const SolcVersion& v);

/// Parses a pragma version expression (`^0.8.0`, `>=0.4.22 <0.6.0`, `0.4.24`,
/// `~0.5.0`, `0.4.0 - 0.5.0`, partial versions such as `^0.8`).
/// Disjunctions (`||`) and pre-release tags are rejected with VersionError.
[[nodiscard]] VersionRange parse_range(std::string_view text);

/// Smallest entry of the ascending `releases` list satisfying `range`.
[[nodiscard]] std::optional<SolcVersion> min_satisfying(const VersionRange& range,
                                                        std::span<const SolcVersion> releases);

/// All entries of `releases` satisfying `range`, in order.
[[nodiscard]] std::vector<SolcVersion> all_satisfying(const VersionRange& range,
                                                      std::span<const SolcVersion> releases);

}  // namespace solbench::version
