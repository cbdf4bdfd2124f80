#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solbench/version/solc_version.hpp"

namespace solbench::version {

using Date = std::chrono::year_month_day;

/// ISO-8601 calendar date ("2021-08-11").
[[nodiscard]] std::string format_date(const Date& d);
/// Accepts "YYYY-MM-DD", optionally followed by a time part which is ignored.
[[nodiscard]] std::optional<Date> parse_date(std::string_view text);

enum class EhFeature {
  throw_stmt,
  require,
  assert_call,
  revert,
  try_catch,
  error_messages_in_require_revert,
  panic_error_types,
  panic_error_in_catch,
  smtchecker_default,
};

[[nodiscard]] std::string_view to_string(EhFeature f);
[[nodiscard]] std::optional<EhFeature> feature_from_string(std::string_view s);

enum class FeatureStatus { absent, available, deprecated };

[[nodiscard]] std::string_view to_string(FeatureStatus s);

struct Release {
  SolcVersion version;
  Date date;
};

struct EhChangeEvent {
  SolcVersion version;
  Date date;
  std::string description;
  std::vector<EhFeature> affected;
};

/// Every solc release from 0.1.1 to 0.8.19, ascending by version.
[[nodiscard]] std::span<const Release> releases();
/// Just the versions of releases(), ascending.
[[nodiscard]] std::span<const SolcVersion> release_versions();
[[nodiscard]] std::optional<Date> release_date(const SolcVersion& v);

/// The 13 releases that changed error handling, ascending.
[[nodiscard]] std::span<const EhChangeEvent> timeline();

/// Availability of an EH feature in a given compiler release.
[[nodiscard]] FeatureStatus feature_status(EhFeature feature, const SolcVersion& v);

/// First release where error-handling builtins (require/assert/revert) exist.
inline constexpr SolcVersion kFirstEhRelease{0, 4, 10};
/// SMTChecker runs by default from here on; DZ and PA checks move into the compiler.
inline constexpr SolcVersion kSmtCheckerDefault{0, 8, 7};

struct IntervalStats {
  double mean_days = 0.0;
  double median_days = 0.0;
};

class TooFewEvents : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mean and median gap in days between consecutive dates (sorted chronologically first).
[[nodiscard]] IntervalStats interval_stats(std::vector<Date> dates);
[[nodiscard]] IntervalStats release_interval_stats(std::span<const EhChangeEvent> events);
[[nodiscard]] IntervalStats release_interval_stats(std::span<const Release> all);

[[nodiscard]] nlohmann::json timeline_to_json(std::span<const EhChangeEvent> events);

}  // namespace solbench::version
