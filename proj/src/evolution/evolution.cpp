#include "solbench/evolution/evolution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "solbench/frontend/parser.hpp"
#include "solbench/frontend/walk.hpp"

namespace solbench::evolution {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <class T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double d) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return ec == std::errc{} ? std::string(buf, p) : std::to_string(d);
}

std::vector<std::string> label_set(std::span<const Record> records, std::span<const std::string> labels) {
  std::set<std::string> all(labels.begin(), labels.end());
  for (const auto& r : records) all.insert(r.label);
  return {all.begin(), all.end()};
}

struct Row {
  Bucket bucket;
  std::string label;
  std::uint64_t count;
};

// All points share one bucket kind; returns that kind's index (0 when there are no points).
std::size_t bucket_kind(std::span<const Series> series) {
  std::optional<std::size_t> kind;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (kind && *kind != p.bucket.index()) throw std::invalid_argument("series mix quarter and version buckets");
      kind = p.bucket.index();
    }
  }
  return kind.value_or(0);
}

const char* bucket_column(std::size_t kind) { return kind == 0 ? "bucket" : "version"; }

Bucket parse_bucket(std::string_view text, std::size_t kind) {
  if (kind == 0) return TimeBucket::parse(text);
  return version::parse_version(text);
}

std::vector<Series> group_rows(std::vector<Row> rows) {
  std::map<std::string, Series> by_label;
  for (auto& r : rows) {
    auto& s = by_label[r.label];
    s.label = r.label;
    s.points.push_back({std::move(r.bucket), r.count});
  }
  std::vector<Series> out;
  for (auto& [label, s] : by_label) {
    std::sort(s.points.begin(), s.points.end(), [](const Point& a, const Point& b) { return a.bucket < b.bucket; });
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      if (s.points[i - 1].bucket == s.points[i].bucket) {
        throw std::invalid_argument("duplicate row for " + label + " at " + bucket_string(s.points[i].bucket));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TimeBucket TimeBucket::of(const Date& d) {
  return {static_cast<int>(d.year()), static_cast<int>((static_cast<unsigned>(d.month()) + 2) / 3)};
}

Date date_of_unix(std::int64_t seconds) {
  return Date{std::chrono::floor<std::chrono::days>(std::chrono::sys_seconds{std::chrono::seconds{seconds}})};
}

TimeBucket TimeBucket::of_unix(std::int64_t seconds) { return of(date_of_unix(seconds)); }

TimeBucket TimeBucket::parse(std::string_view text) {
  const auto dash = text.find("-Q");
  if (dash == std::string_view::npos || dash + 3 != text.size()) {
    throw std::invalid_argument("bad quarter: '" + std::string(text) + "'");
  }
  const TimeBucket b{parse_number<int>(text.substr(0, dash), "year"), parse_number<int>(text.substr(dash + 2), "quarter")};
  if (b.quarter < 1 || b.quarter > 4) throw std::invalid_argument("bad quarter: '" + std::string(text) + "'");
  return b;
}

TimeBucket TimeBucket::next() const { return quarter == 4 ? TimeBucket{year + 1, 1} : TimeBucket{year, quarter + 1}; }

std::string TimeBucket::to_string() const { return std::to_string(year) + "-Q" + std::to_string(quarter); }

std::string bucket_string(const Bucket& b) {
  return std::visit([](const auto& v) { return v.to_string(); }, b);
}

Record usage_record(version::EhFeature feature) {
  Record r;
  r.label = std::string(version::to_string(feature));
  r.feature = feature;
  return r;
}

Record misuse_record(misuse::MisuseCategory category) {
  Record r;
  r.label = std::string(misuse::to_string(category));
  r.feature = misuse::required_feature(category);
  r.misuse = category;
  return r;
}

std::vector<Record> collect_records(const frontend::SourceUnit& unit, const RecordContext& ctx) {
  const auto range = ctx.pragma ? ctx.pragma : frontend::effective_range(unit);
  std::vector<Record> out;
  auto stamp = [&](Record r) {
    r.date = ctx.date;
    r.dated_by_block = ctx.dated_by_block;
    r.pragma = range;
    out.push_back(std::move(r));
  };
  for (const auto& u : usage::detect_usages(unit)) stamp(usage_record(u.feature));
  const auto throws = frontend::walk_expressions(unit, [](const frontend::Expression& e) {
    return e.kind == frontend::ExprKind::identifier && e.text == "throw";
  });
  for (std::size_t i = 0; i < throws.size(); ++i) stamp(usage_record(version::EhFeature::throw_stmt));
  for (const auto& m : misuse::detect_misuses(unit, range, version::release_versions())) {
    if (!m.suppressed_by_version) stamp(misuse_record(m.category));
  }
  return out;
}

std::vector<std::string> usage_labels() {
  using F = version::EhFeature;
  std::vector<std::string> out;
  for (const auto f : {F::require, F::assert_call, F::revert, F::try_catch, F::throw_stmt}) {
    out.emplace_back(version::to_string(f));
  }
  return out;
}

std::vector<std::string> misuse_labels() {
  std::vector<std::string> out;
  for (const auto c : misuse::kAllMisuseCategories) out.emplace_back(misuse::to_string(c));
  return out;
}

QuarterSeries bucket_by_quarter(std::span<const Record> records, std::span<const std::string> labels) {
  QuarterSeries out;
  std::map<std::pair<std::string, TimeBucket>, std::uint64_t> counts;
  std::optional<TimeBucket> lo, hi;
  for (const auto& r : records) {
    if (!r.date) {
      ++out.undated;
      continue;
    }
    ++out.dated;
    if (!r.dated_by_block) ++out.dated_by_retrieval;
    const auto b = TimeBucket::of(*r.date);
    ++counts[{r.label, b}];
    if (!lo || b < *lo) lo = b;
    if (!hi || *hi < b) hi = b;
  }
  for (const auto& label : label_set(records, labels)) {
    Series s{label, {}, false};
    if (lo) {
      for (auto b = *lo; b <= *hi; b = b.next()) {
        const auto it = counts.find({label, b});
        s.points.push_back({b, it == counts.end() ? 0 : it->second});
      }
    }
    out.series.push_back(std::move(s));
  }
  return out;
}

std::vector<SolcVersion> attribute_to_versions(const Record& record, const version::VersionRange& pragma_range,
                                               std::span<const SolcVersion> releases) {
  std::vector<SolcVersion> out;
  for (const auto& v : releases) {
    if (v < version::kFirstEhRelease || !pragma_range.satisfies(v)) continue;
    if (record.feature && version::feature_status(*record.feature, v) == version::FeatureStatus::absent) continue;
    if (record.misuse && misuse::version_gated(*record.misuse) && v >= version::kSmtCheckerDefault) continue;
    out.push_back(v);
  }
  return out;
}

VersionSeries bucket_by_version(std::span<const Record> records, std::span<const SolcVersion> releases,
                                std::span<const std::string> labels) {
  VersionSeries out;
  std::vector<SolcVersion> axis;
  std::copy_if(releases.begin(), releases.end(), std::back_inserter(axis),
               [](const SolcVersion& v) { return v >= version::kFirstEhRelease; });
  std::map<std::string, std::map<SolcVersion, std::uint64_t>> counts;
  for (const auto& r : records) {
    const auto vs = r.pragma ? attribute_to_versions(r, *r.pragma, axis) : std::vector<SolcVersion>{};
    if (vs.empty()) {
      ++out.unresolved;
      continue;
    }
    ++out.attributed;
    auto& per = counts[r.label];
    for (const auto& v : vs) ++per[v];
  }
  for (const auto& label : label_set(records, labels)) {
    Series s{label, {}, false};
    const auto it = counts.find(label);
    for (const auto& v : axis) {
      std::uint64_t c = 0;
      if (it != counts.end()) {
        const auto jt = it->second.find(v);
        if (jt != it->second.end()) c = jt->second;
      }
      s.points.push_back({v, c});
    }
    out.series.push_back(std::move(s));
  }
  return out;
}

Series cumulative(const Series& s) {
  Series out = s;
  std::uint64_t running = 0;
  for (auto& p : out.points) {
    running += p.count;
    p.count = running;
  }
  out.cumulative = true;
  return out;
}

std::vector<double> growth_steps(std::span<const double> counts) {
  std::vector<double> r;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    r.push_back((counts[i] - counts[i - 1]) / std::max(counts[i - 1], 1.0));
  }
  return r;
}

GrowthStats growth_rates(std::span<const double> counts) {
  if (counts.size() < 2) throw TooFewPoints("growth rates need at least two points");
  auto r = growth_steps(counts);
  std::sort(r.begin(), r.end());
  const auto n = r.size();
  GrowthStats g;
  g.min = r.front();
  g.max = r.back();
  g.mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  g.median = n % 2 == 1 ? r[n / 2] : (r[n / 2 - 1] + r[n / 2]) / 2.0;
  if (n > 1) {
    double ss = 0.0;
    for (const double x : r) ss += (x - g.mean) * (x - g.mean);
    g.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  g.mean = std::clamp(g.mean, g.min, g.max);
  return g;
}

GrowthStats growth_rates(const Series& s) {
  std::vector<double> counts;
  for (const auto& p : s.points) counts.push_back(static_cast<double>(p.count));
  return growth_rates(counts);
}

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

std::string emit_table(std::span<const Series> series, Format format) {
  if (series.empty()) throw std::invalid_argument("no series to emit");
  const auto kind = bucket_kind(series);
  std::vector<Row> rows;
  for (const auto& s : series) {
    if (s.label.empty() || s.label.find_first_of(",\"\r\n") != std::string::npos) {
      throw std::invalid_argument("unsupported label '" + s.label + "'");
    }
    for (const auto& p : s.points) rows.push_back({p.bucket, s.label, p.count});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.bucket != b.bucket) return a.bucket < b.bucket;
    return a.label < b.label;
  });
  const std::string col = bucket_column(kind);
  if (format == Format::csv) {
    std::string out = col + ",label,count\n";
    for (const auto& r : rows) out += bucket_string(r.bucket) + "," + r.label + "," + std::to_string(r.count) + "\n";
    return out;
  }
  json arr = json::array();
  for (const auto& r : rows) arr.push_back({{col, bucket_string(r.bucket)}, {"label", r.label}, {"count", r.count}});
  return arr.dump(2) + "\n";
}

std::vector<Series> parse_table(std::string_view text, Format format) {
  std::vector<Row> rows;
  if (format == Format::csv) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty table");
    const auto header = trim(line);
    std::size_t kind = 0;
    if (header == "version,label,count") {
      kind = 1;
    } else if (header != "bucket,label,count") {
      throw std::invalid_argument("bad header '" + std::string(header) + "'");
    }
    while (std::getline(in, line)) {
      const auto l = trim(line);
      if (l.empty()) continue;
      const auto a = l.find(','), b = l.rfind(',');
      if (a == std::string_view::npos || a == b) throw std::invalid_argument("bad row '" + std::string(l) + "'");
      rows.push_back({parse_bucket(l.substr(0, a), kind), std::string(l.substr(a + 1, b - a - 1)),
                      parse_number<std::uint64_t>(l.substr(b + 1), "count")});
    }
  } else {
    const auto arr = json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("table JSON must be an array");
    for (const auto& o : arr) {
      const std::size_t kind = o.contains("version") ? 1 : 0;
      rows.push_back({parse_bucket(o.at(bucket_column(kind)).get<std::string>(), kind), o.at("label").get<std::string>(),
                      o.at("count").get<std::uint64_t>()});
    }
  }
  return group_rows(std::move(rows));
}

std::vector<LabelGrowth> growth_table(std::span<const Series> series) {
  std::vector<LabelGrowth> out;
  for (const auto& s : series) {
    if (s.points.size() >= 2) out.push_back({s.label, growth_rates(s)});
  }
  return out;
}

std::string emit_growth_table(std::span<const LabelGrowth> rows, Format format) {
  if (format == Format::csv) {
    std::string out = "label,min,max,mean,median,std_dev\n";
    for (const auto& r : rows) {
      out += r.label + "," + format_double(r.stats.min) + "," + format_double(r.stats.max) + "," +
             format_double(r.stats.mean) + "," + format_double(r.stats.median) + "," + format_double(r.stats.std_dev) +
             "\n";
    }
    return out;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"label", r.label},
                   {"min", r.stats.min},
                   {"max", r.stats.max},
                   {"mean", r.stats.mean},
                   {"median", r.stats.median},
                   {"std_dev", r.stats.std_dev}});
  }
  return arr.dump(2) + "\n";
}

json metadata_json(const Metadata& m) {
  return {{"bucket", m.bucket},
          {"cumulative", m.cumulative},
          {"growth_rate_formula", kGrowthFormula},
          {"growth_rate_period", m.bucket},
          {"growth_rate_std_dev", "sample (n - 1)"},
          {"dating_policy", kDatingPolicy},
          {"records", m.records},
          {"excluded", m.excluded},
          {"dated_by_retrieval", m.dated_by_retrieval}};
}

}  // namespace solbench::evolution
