#include "solbench/version/eh_timeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>

namespace solbench::version {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;

// Public solc release history. Dates are the GitHub release dates; where the
// EH change table lists a different day for the same release, that day is used.
const std::array<Release, 102> kReleases{{
    {{0, 1, 1}, Date{year{2015}, month{8u}, day{4u}}},
    {{0, 1, 2}, Date{year{2015}, month{8u}, day{20u}}},
    {{0, 1, 3}, Date{year{2015}, month{9u}, day{23u}}},
    {{0, 1, 4}, Date{year{2015}, month{9u}, day{30u}}},
    {{0, 1, 5}, Date{year{2015}, month{10u}, day{7u}}},
    {{0, 1, 6}, Date{year{2015}, month{10u}, day{16u}}},
    {{0, 1, 7}, Date{year{2015}, month{11u}, day{17u}}},
    {{0, 2, 0}, Date{year{2015}, month{12u}, day{2u}}},
    {{0, 2, 1}, Date{year{2016}, month{1u}, day{30u}}},
    {{0, 2, 2}, Date{year{2016}, month{2u}, day{17u}}},
    {{0, 3, 0}, Date{year{2016}, month{3u}, day{11u}}},
    {{0, 3, 1}, Date{year{2016}, month{3u}, day{31u}}},
    {{0, 3, 2}, Date{year{2016}, month{4u}, day{22u}}},
    {{0, 3, 3}, Date{year{2016}, month{5u}, day{27u}}},
    {{0, 3, 4}, Date{year{2016}, month{6u}, day{8u}}},
    {{0, 3, 5}, Date{year{2016}, month{6u}, day{10u}}},
    {{0, 3, 6}, Date{year{2016}, month{8u}, day{10u}}},
    {{0, 4, 0}, Date{year{2016}, month{9u}, day{8u}}},
    {{0, 4, 1}, Date{year{2016}, month{9u}, day{9u}}},
    {{0, 4, 2}, Date{year{2016}, month{9u}, day{17u}}},
    {{0, 4, 3}, Date{year{2016}, month{10u}, day{25u}}},
    {{0, 4, 4}, Date{year{2016}, month{10u}, day{31u}}},
    {{0, 4, 5}, Date{year{2016}, month{11u}, day{21u}}},
    {{0, 4, 6}, Date{year{2016}, month{11u}, day{22u}}},
    {{0, 4, 7}, Date{year{2016}, month{12u}, day{15u}}},
    {{0, 4, 8}, Date{year{2017}, month{1u}, day{13u}}},
    {{0, 4, 9}, Date{year{2017}, month{1u}, day{31u}}},
    {{0, 4, 10}, Date{year{2017}, month{3u}, day{15u}}},
    {{0, 4, 11}, Date{year{2017}, month{5u}, day{3u}}},
    {{0, 4, 12}, Date{year{2017}, month{7u}, day{3u}}},
    {{0, 4, 13}, Date{year{2017}, month{7u}, day{6u}}},
    {{0, 4, 14}, Date{year{2017}, month{7u}, day{31u}}},
    {{0, 4, 15}, Date{year{2017}, month{8u}, day{8u}}},
    {{0, 4, 16}, Date{year{2017}, month{8u}, day{24u}}},
    {{0, 4, 17}, Date{year{2017}, month{9u}, day{21u}}},
    {{0, 4, 18}, Date{year{2017}, month{10u}, day{18u}}},
    {{0, 4, 19}, Date{year{2017}, month{11u}, day{30u}}},
    {{0, 4, 20}, Date{year{2018}, month{2u}, day{14u}}},
    {{0, 4, 21}, Date{year{2018}, month{3u}, day{8u}}},
    {{0, 4, 22}, Date{year{2018}, month{4u}, day{17u}}},
    {{0, 4, 23}, Date{year{2018}, month{4u}, day{19u}}},
    {{0, 4, 24}, Date{year{2018}, month{5u}, day{16u}}},
    {{0, 4, 25}, Date{year{2018}, month{9u}, day{12u}}},
    {{0, 4, 26}, Date{year{2019}, month{4u}, day{29u}}},
    {{0, 5, 0}, Date{year{2018}, month{11u}, day{13u}}},
    {{0, 5, 1}, Date{year{2018}, month{12u}, day{3u}}},
    {{0, 5, 2}, Date{year{2018}, month{12u}, day{19u}}},
    {{0, 5, 3}, Date{year{2019}, month{1u}, day{22u}}},
    {{0, 5, 4}, Date{year{2019}, month{2u}, day{12u}}},
    {{0, 5, 5}, Date{year{2019}, month{3u}, day{5u}}},
    {{0, 5, 6}, Date{year{2019}, month{3u}, day{13u}}},
    {{0, 5, 7}, Date{year{2019}, month{3u}, day{26u}}},
    {{0, 5, 8}, Date{year{2019}, month{4u}, day{30u}}},
    {{0, 5, 9}, Date{year{2019}, month{5u}, day{28u}}},
    {{0, 5, 10}, Date{year{2019}, month{6u}, day{25u}}},
    {{0, 5, 11}, Date{year{2019}, month{8u}, day{12u}}},
    {{0, 5, 12}, Date{year{2019}, month{10u}, day{1u}}},
    {{0, 5, 13}, Date{year{2019}, month{11u}, day{14u}}},
    {{0, 5, 14}, Date{year{2019}, month{12u}, day{9u}}},
    {{0, 5, 15}, Date{year{2019}, month{12u}, day{17u}}},
    {{0, 5, 16}, Date{year{2020}, month{1u}, day{2u}}},
    {{0, 5, 17}, Date{year{2020}, month{3u}, day{17u}}},
    {{0, 6, 0}, Date{year{2019}, month{12u}, day{18u}}},
    {{0, 6, 1}, Date{year{2020}, month{1u}, day{2u}}},
    {{0, 6, 2}, Date{year{2020}, month{1u}, day{27u}}},
    {{0, 6, 3}, Date{year{2020}, month{2u}, day{18u}}},
    {{0, 6, 4}, Date{year{2020}, month{3u}, day{10u}}},
    {{0, 6, 5}, Date{year{2020}, month{4u}, day{6u}}},
    {{0, 6, 6}, Date{year{2020}, month{4u}, day{9u}}},
    {{0, 6, 7}, Date{year{2020}, month{5u}, day{4u}}},
    {{0, 6, 8}, Date{year{2020}, month{5u}, day{14u}}},
    {{0, 6, 9}, Date{year{2020}, month{6u}, day{4u}}},
    {{0, 6, 10}, Date{year{2020}, month{6u}, day{11u}}},
    {{0, 6, 11}, Date{year{2020}, month{7u}, day{7u}}},
    {{0, 6, 12}, Date{year{2020}, month{7u}, day{22u}}},
    {{0, 7, 0}, Date{year{2020}, month{7u}, day{28u}}},
    {{0, 7, 1}, Date{year{2020}, month{9u}, day{2u}}},
    {{0, 7, 2}, Date{year{2020}, month{9u}, day{28u}}},
    {{0, 7, 3}, Date{year{2020}, month{10u}, day{7u}}},
    {{0, 7, 4}, Date{year{2020}, month{10u}, day{19u}}},
    {{0, 7, 5}, Date{year{2020}, month{11u}, day{18u}}},
    {{0, 7, 6}, Date{year{2020}, month{12u}, day{16u}}},
    {{0, 8, 0}, Date{year{2020}, month{12u}, day{16u}}},
    {{0, 8, 1}, Date{year{2021}, month{1u}, day{27u}}},
    {{0, 8, 2}, Date{year{2021}, month{3u}, day{2u}}},
    {{0, 8, 3}, Date{year{2021}, month{3u}, day{23u}}},
    {{0, 8, 4}, Date{year{2021}, month{4u}, day{21u}}},
    {{0, 8, 5}, Date{year{2021}, month{6u}, day{10u}}},
    {{0, 8, 6}, Date{year{2021}, month{6u}, day{22u}}},
    {{0, 8, 7}, Date{year{2021}, month{8u}, day{11u}}},
    {{0, 8, 8}, Date{year{2021}, month{9u}, day{27u}}},
    {{0, 8, 9}, Date{year{2021}, month{9u}, day{29u}}},
    {{0, 8, 10}, Date{year{2021}, month{11u}, day{9u}}},
    {{0, 8, 11}, Date{year{2021}, month{12u}, day{20u}}},
    {{0, 8, 12}, Date{year{2022}, month{2u}, day{16u}}},
    {{0, 8, 13}, Date{year{2022}, month{3u}, day{16u}}},
    {{0, 8, 14}, Date{year{2022}, month{5u}, day{17u}}},
    {{0, 8, 15}, Date{year{2022}, month{6u}, day{15u}}},
    {{0, 8, 16}, Date{year{2022}, month{8u}, day{8u}}},
    {{0, 8, 17}, Date{year{2022}, month{9u}, day{8u}}},
    {{0, 8, 18}, Date{year{2023}, month{2u}, day{1u}}},
    {{0, 8, 19}, Date{year{2023}, month{2u}, day{22u}}},
}};

std::vector<SolcVersion> collect_versions() {
  std::vector<SolcVersion> out;
  out.reserve(kReleases.size());
  for (const auto& r : kReleases) out.push_back(r.version);
  return out;
}

constexpr Date make_date(int y, unsigned m, unsigned d) { return Date{year{y}, month{m}, day{d}}; }

std::vector<EhChangeEvent> build_timeline() {
  using F = EhFeature;
  return {
      {{0, 1, 3}, make_date(2015, 9, 23), "Introduction of throw", {F::throw_stmt}},
      {{0, 4, 0}, make_date(2016, 9, 8), "Compiler version specified via pragma", {}},
      {{0, 4, 10}, make_date(2017, 3, 15),
       "Introduction of require(condition) and assert(condition); revert() opcode aborts with state rollback without "
       "consuming all gas",
       {F::require, F::assert_call, F::revert}},
      {{0, 4, 13}, make_date(2017, 7, 6), "Deprecation of throw in favour of require(), assert(), revert()",
       {F::throw_stmt}},
      {{0, 4, 16}, make_date(2017, 8, 24), "Automated overflow and assert checking", {F::assert_call}},
      {{0, 4, 22}, make_date(2018, 4, 17), "Error messages in require and revert",
       {F::error_messages_in_require_revert}},
      {{0, 6, 0}, make_date(2019, 12, 18), "Introduction of try/catch", {F::try_catch}},
      {{0, 6, 9}, make_date(2020, 6, 4), "SMTChecker supports require and assert", {F::require, F::assert_call}},
      {{0, 7, 2}, make_date(2020, 9, 28), "SMTChecker supports revert()", {F::revert}},
      {{0, 8, 0}, make_date(2020, 12, 16), "Introduction of Panic(uint) and Error(string)", {F::panic_error_types}},
      {{0, 8, 1}, make_date(2021, 1, 27), "Panic(uint) and Error(string) can be caught and decoded in try/catch",
       {F::panic_error_in_catch, F::try_catch}},
      {{0, 8, 4}, make_date(2021, 4, 21), "Start of deprecation of pragma experimental SMTChecker",
       {F::smtchecker_default}},
      {{0, 8, 7}, make_date(2021, 8, 11),
       "SMTChecker checks overflow/underflow and runs by default", {F::smtchecker_default}},
  };
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc{} || p != text.data() + pos + len) return std::nullopt;
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  Date out{year{*y}, month{static_cast<unsigned>(*m)}, day{static_cast<unsigned>(*d)}};
  if (!out.ok()) return std::nullopt;
  return out;
}

std::string_view to_string(EhFeature f) {
  switch (f) {
    case EhFeature::throw_stmt: return "throw";
    case EhFeature::require: return "require";
    case EhFeature::assert_call: return "assert";
    case EhFeature::revert: return "revert";
    case EhFeature::try_catch: return "try_catch";
    case EhFeature::error_messages_in_require_revert: return "error_messages_in_require_revert";
    case EhFeature::panic_error_types: return "panic_error_types";
    case EhFeature::panic_error_in_catch: return "panic_error_in_catch";
    case EhFeature::smtchecker_default: return "smtchecker_default";
  }
  return "unknown";
}

std::optional<EhFeature> feature_from_string(std::string_view s) {
  for (auto f : {EhFeature::throw_stmt, EhFeature::require, EhFeature::assert_call, EhFeature::revert,
                 EhFeature::try_catch, EhFeature::error_messages_in_require_revert, EhFeature::panic_error_types,
                 EhFeature::panic_error_in_catch, EhFeature::smtchecker_default}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::string_view to_string(FeatureStatus s) {
  switch (s) {
    case FeatureStatus::absent: return "absent";
    case FeatureStatus::available: return "available";
    case FeatureStatus::deprecated: return "deprecated";
  }
  return "unknown";
}

std::span<const Release> releases() { return kReleases; }

std::span<const SolcVersion> release_versions() {
  static const std::vector<SolcVersion> versions = collect_versions();
  return versions;
}

std::optional<Date> release_date(const SolcVersion& v) {
  auto it = std::find_if(kReleases.begin(), kReleases.end(), [&](const Release& r) { return r.version == v; });
  if (it == kReleases.end()) return std::nullopt;
  return it->date;
}

std::span<const EhChangeEvent> timeline() {
  static const std::vector<EhChangeEvent> events = build_timeline();
  return events;
}

FeatureStatus feature_status(EhFeature feature, const SolcVersion& v) {
  auto from = [&](SolcVersion since) { return v >= since ? FeatureStatus::available : FeatureStatus::absent; };
  switch (feature) {
    case EhFeature::throw_stmt:
      if (v < SolcVersion{0, 1, 3}) return FeatureStatus::absent;
      return v < SolcVersion{0, 4, 13} ? FeatureStatus::available : FeatureStatus::deprecated;
    case EhFeature::require:
    case EhFeature::assert_call:
    case EhFeature::revert: return from(kFirstEhRelease);
    case EhFeature::try_catch: return from({0, 6, 0});
    case EhFeature::error_messages_in_require_revert: return from({0, 4, 22});
    case EhFeature::panic_error_types: return from({0, 8, 0});
    case EhFeature::panic_error_in_catch: return from({0, 8, 1});
    case EhFeature::smtchecker_default: return from(kSmtCheckerDefault);
  }
  return FeatureStatus::absent;
}

IntervalStats interval_stats(std::vector<Date> dates) {
  if (dates.size() < 2) throw TooFewEvents("interval statistics need at least two dates");
  std::sort(dates.begin(), dates.end());
  std::vector<double> gaps;
  gaps.reserve(dates.size() - 1);
  double total = 0.0;
  for (std::size_t i = 1; i < dates.size(); ++i) {
    const auto days = (std::chrono::sys_days{dates[i]} - std::chrono::sys_days{dates[i - 1]}).count();
    gaps.push_back(static_cast<double>(days));
    total += static_cast<double>(days);
  }
  return {total / static_cast<double>(gaps.size()), median_of(std::move(gaps))};
}

IntervalStats release_interval_stats(std::span<const EhChangeEvent> events) {
  std::vector<Date> dates;
  for (const auto& e : events) dates.push_back(e.date);
  return interval_stats(std::move(dates));
}

IntervalStats release_interval_stats(std::span<const Release> all) {
  std::vector<Date> dates;
  for (const auto& r : all) dates.push_back(r.date);
  return interval_stats(std::move(dates));
}

nlohmann::json timeline_to_json(std::span<const EhChangeEvent> events) {
  auto out = nlohmann::json::array();
  for (const auto& e : events) {
    nlohmann::json affected = nlohmann::json::array();
    for (auto f : e.affected) affected.push_back(std::string(to_string(f)));
    out.push_back({{"version", e.version.to_string()},
                   {"date", format_date(e.date)},
                   {"description", e.description},
                   {"affected", std::move(affected)}});
  }
  return out;
}

}  // namespace solbench::version
