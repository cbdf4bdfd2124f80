#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "solbench/frontend/ast.hpp"
#include "solbench/misuse/misuse.hpp"
#include "solbench/usage/usage.hpp"
#include "solbench/version/eh_timeline.hpp"
#include "solbench/version/solc_version.hpp"

namespace solbench::evolution {

using version::Date;
using version::SolcVersion;

struct TimeBucket {
  int year = 1970;
  int quarter = 1;  // 1..4

  [[nodiscard]] static TimeBucket of(const Date& d);
  [[nodiscard]] static TimeBucket of_unix(std::int64_t seconds);
  /// "2020-Q2"; throws std::invalid_argument.
  [[nodiscard]] static TimeBucket parse(std::string_view text);
  [[nodiscard]] TimeBucket next() const;
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const TimeBucket&, const TimeBucket&) = default;
};

[[nodiscard]] Date date_of_unix(std::int64_t seconds);

using Bucket = std::variant<TimeBucket, SolcVersion>;

[[nodiscard]] std::string bucket_string(const Bucket& b);

struct Point {
  Bucket bucket;
  std::uint64_t count = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Series {
  std::string label;
  std::vector<Point> points;  // strictly increasing buckets, all of one kind
  bool cumulative = false;

  friend bool operator==(const Series&, const Series&) = default;
};

/// One observed EH usage or misuse, with whatever the corpus knows about its contract.
struct Record {
  std::string label;  // feature name ("require") or misuse category ("DZ")
  std::optional<version::EhFeature> feature;
  std::optional<misuse::MisuseCategory> misuse;
  std::optional<Date> date;
  bool dated_by_block = false;
  std::optional<version::VersionRange> pragma;
};

[[nodiscard]] Record usage_record(version::EhFeature feature);
[[nodiscard]] Record misuse_record(misuse::MisuseCategory category);

struct RecordContext {
  std::optional<Date> date;
  bool dated_by_block = false;
  /// Range used for version attribution; defaults to the unit's own pragmas.
  std::optional<version::VersionRange> pragma;
};

/// Usage records (one per detected usage, plus `throw` statements) and
/// unsuppressed misuse records found in `unit`.
[[nodiscard]] std::vector<Record> collect_records(const frontend::SourceUnit& unit, const RecordContext& ctx);

/// Labels emitted even when no record carries them.
[[nodiscard]] std::vector<std::string> usage_labels();
[[nodiscard]] std::vector<std::string> misuse_labels();

struct QuarterSeries {
  std::vector<Series> series;  // sorted by label
  std::size_t dated = 0;
  std::size_t undated = 0;  // excluded from every series
  std::size_t dated_by_retrieval = 0;
};

/// Per-label counts for every quarter between the earliest and latest dated
/// record (zero-filled). Every label in `labels` gets a series.
[[nodiscard]] QuarterSeries bucket_by_quarter(std::span<const Record> records, std::span<const std::string> labels = {});

/// Releases the record counts towards: those satisfying `pragma_range`, from
/// 0.4.10 on, where the record's feature exists, and (for DZ/PA misuses) before
/// the compiler checks them itself.
[[nodiscard]] std::vector<SolcVersion> attribute_to_versions(const Record& record,
                                                             const version::VersionRange& pragma_range,
                                                             std::span<const SolcVersion> releases);

struct VersionSeries {
  std::vector<Series> series;  // sorted by label
  std::size_t attributed = 0;
  std::size_t unresolved = 0;  // records without a pragma or with no matching release
};

/// Axis: every entry of `releases` from 0.4.10 on.
[[nodiscard]] VersionSeries bucket_by_version(std::span<const Record> records,
                                              std::span<const SolcVersion> releases = version::release_versions(),
                                              std::span<const std::string> labels = {});

/// Running totals of `s`.
[[nodiscard]] Series cumulative(const Series& s);

struct GrowthStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std_dev = 0.0;  // sample (n - 1); 0 for a single rate
};

class TooFewPoints : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// r_i = (c_i - c_{i-1}) / max(c_{i-1}, 1).
[[nodiscard]] std::vector<double> growth_steps(std::span<const double> counts);
[[nodiscard]] GrowthStats growth_rates(std::span<const double> counts);
[[nodiscard]] GrowthStats growth_rates(const Series& s);

inline constexpr std::string_view kGrowthFormula = "r_i = (c_i - c_{i-1}) / max(c_{i-1}, 1)";
inline constexpr std::string_view kDatingPolicy =
    "contract creation block timestamp when known, else retrieval time (counted as dated_by_retrieval)";

enum class Format { csv, json };

/// Throws std::invalid_argument for anything but "csv" and "json".
[[nodiscard]] Format parse_format(std::string_view s);

/// Rows ordered by bucket, then label. Header `bucket,label,count` for
/// quarters and `version,label,count` for versions.
[[nodiscard]] std::string emit_table(std::span<const Series> series, Format format);
/// Inverse of emit_table; series come back sorted by label, non-cumulative.
[[nodiscard]] std::vector<Series> parse_table(std::string_view text, Format format);

struct LabelGrowth {
  std::string label;
  GrowthStats stats;
};

/// Growth stats of every series with at least two points.
[[nodiscard]] std::vector<LabelGrowth> growth_table(std::span<const Series> series);
[[nodiscard]] std::string emit_growth_table(std::span<const LabelGrowth> rows, Format format);

struct Metadata {
  std::string bucket;  // "quarter" or "version"
  bool cumulative = false;
  std::size_t records = 0;
  std::size_t excluded = 0;  // undated or unresolved
  std::size_t dated_by_retrieval = 0;
};

/// Sidecar describing how a table was produced.
[[nodiscard]] nlohmann::json metadata_json(const Metadata& m);

}  // namespace solbench::evolution
