#include <gtest/gtest.h>

#include <random>

#include "solbench/evolution/evolution.hpp"
#include "solbench/frontend/parser.hpp"

using namespace solbench::evolution;
using solbench::version::parse_range;
using solbench::version::release_versions;
using solbench::version::SolcVersion;
namespace chr = std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{chr::year{y}, chr::month{m}, chr::day{d}}; }

Record dated(std::string label, Date d) {
  Record r;
  r.label = std::move(label);
  r.date = d;
  r.dated_by_block = true;
  return r;
}

std::vector<std::string> names(const std::vector<SolcVersion>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.to_string());
  return out;
}

}  // namespace

TEST(Quarter, Arithmetic) {
  EXPECT_EQ(TimeBucket::of(ymd(2020, 6, 15)), (TimeBucket{2020, 2}));
  EXPECT_EQ(TimeBucket::of(ymd(2020, 1, 1)), (TimeBucket{2020, 1}));
  EXPECT_EQ(TimeBucket::of(ymd(2019, 12, 31)), (TimeBucket{2019, 4}));
  EXPECT_EQ(TimeBucket::of(ymd(2021, 7, 1)), (TimeBucket{2021, 3}));
  EXPECT_EQ(TimeBucket::of_unix(1592179200), (TimeBucket{2020, 2}));  // 2020-06-15T00:00:00Z
  EXPECT_EQ(TimeBucket::of_unix(1593561599), (TimeBucket{2020, 2}));  // 2020-06-30T23:59:59Z
  EXPECT_EQ(TimeBucket::of_unix(1593561600), (TimeBucket{2020, 3}));
  EXPECT_EQ((TimeBucket{2019, 4}).next(), (TimeBucket{2020, 1}));
  EXPECT_EQ((TimeBucket{2020, 2}).to_string(), "2020-Q2");
  EXPECT_EQ(TimeBucket::parse("2020-Q2"), (TimeBucket{2020, 2}));
  EXPECT_THROW((void)TimeBucket::parse("2020-Q5"), std::invalid_argument);
  EXPECT_THROW((void)TimeBucket::parse("2020Q1"), std::invalid_argument);
  EXPECT_LT((TimeBucket{2019, 4}), (TimeBucket{2020, 1}));
}

TEST(Quarter, CountsPerLabel) {
  std::vector<Record> rs = {dated("require", ymd(2020, 1, 5)), dated("require", ymd(2020, 2, 5)),
                            dated("require", ymd(2020, 3, 31)), dated("require", ymd(2020, 4, 1))};
  const auto q = bucket_by_quarter(rs);
  ASSERT_EQ(q.series.size(), 1u);
  const std::vector<Point> want = {{TimeBucket{2020, 1}, 3}, {TimeBucket{2020, 2}, 1}};
  EXPECT_EQ(q.series[0].points, want);
  EXPECT_EQ(q.dated, 4u);
}

TEST(Quarter, ZeroFillsAndReportsUndated) {
  std::vector<Record> rs = {dated("revert", ymd(2020, 2, 1)), dated("require", ymd(2020, 11, 1))};
  Record undated;
  undated.label = "assert";
  rs.push_back(undated);
  auto retrieval = dated("require", ymd(2020, 11, 2));
  retrieval.dated_by_block = false;
  rs.push_back(retrieval);
  const std::vector<std::string> fixed = {"try_catch"};
  const auto q = bucket_by_quarter(rs, fixed);
  EXPECT_EQ(q.undated, 1u);
  EXPECT_EQ(q.dated, 3u);
  EXPECT_EQ(q.dated_by_retrieval, 1u);
  ASSERT_EQ(q.series.size(), 4u);
  EXPECT_EQ(q.series[0].label, "assert");
  EXPECT_EQ(q.series[3].label, "try_catch");
  for (const auto& s : q.series) {
    ASSERT_EQ(s.points.size(), 4u) << s.label;
    std::uint64_t total = 0;
    for (const auto& p : s.points) total += p.count;
    EXPECT_EQ(total, s.label == "require" ? 2u : s.label == "revert" ? 1u : 0u) << s.label;
  }
  EXPECT_EQ(q.series[1].points[3].count, 2u);
}

TEST(Quarter, ConservationOverRandomRecords) {
  std::mt19937 rng(7);
  const std::vector<std::string> labels = {"require", "assert", "revert", "DZ", "ECall"};
  for (int round = 0; round < 50; ++round) {
    std::vector<Record> rs;
    std::map<std::string, std::size_t> expected;
    const int n = static_cast<int>(rng() % 200);
    std::size_t undated = 0;
    for (int i = 0; i < n; ++i) {
      const auto& label = labels[rng() % labels.size()];
      if (rng() % 10 == 0) {
        Record r;
        r.label = label;
        rs.push_back(r);
        ++undated;
        continue;
      }
      rs.push_back(dated(label, ymd(2017 + static_cast<int>(rng() % 6), 1 + rng() % 12, 1 + rng() % 28)));
      ++expected[label];
    }
    const auto q = bucket_by_quarter(rs);
    EXPECT_EQ(q.undated, undated);
    std::size_t total = 0;
    for (const auto& s : q.series) {
      std::size_t sum = 0;
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        sum += s.points[i].count;
        if (i > 0) {
          EXPECT_EQ(std::get<TimeBucket>(s.points[i - 1].bucket).next(), std::get<TimeBucket>(s.points[i].bucket));
        }
      }
      EXPECT_EQ(sum, expected[s.label]) << s.label;
      total += sum;
    }
    EXPECT_EQ(total, rs.size() - undated);
  }
}

TEST(Versions, RangeMembership) {
  const auto req = usage_record(solbench::version::EhFeature::require);
  EXPECT_EQ(names(attribute_to_versions(req, parse_range(">=0.8.17 <0.8.19"), release_versions())),
            (std::vector<std::string>{"0.8.17", "0.8.18"}));
  EXPECT_EQ(names(attribute_to_versions(req, parse_range("=0.4.10"), release_versions())),
            (std::vector<std::string>{"0.4.10"}));
  const auto early = attribute_to_versions(req, parse_range("^0.4.0"), release_versions());
  ASSERT_FALSE(early.empty());
  EXPECT_EQ(early.front().to_string(), "0.4.10");
  EXPECT_EQ(early.back().to_string(), "0.4.26");
  EXPECT_TRUE(attribute_to_versions(req, parse_range("<0.4.10"), release_versions()).empty());
}

TEST(Versions, FeatureAvailability) {
  const auto tc = usage_record(solbench::version::EhFeature::try_catch);
  const auto got = attribute_to_versions(tc, parse_range(">=0.5.0 <0.7.0"), release_versions());
  std::vector<std::string> want;
  for (int p = 0; p <= 12; ++p) want.push_back("0.6." + std::to_string(p));
  EXPECT_EQ(names(got), want);

  const auto th = usage_record(solbench::version::EhFeature::throw_stmt);
  EXPECT_EQ(names(attribute_to_versions(th, parse_range(">=0.3.0 <0.4.12"), release_versions())),
            (std::vector<std::string>{"0.4.10", "0.4.11"}));
}

TEST(Versions, CompilerCheckedMisusesStopAtZeroEightSeven) {
  const auto dz = misuse_record(solbench::misuse::MisuseCategory::DZ);
  const auto got = attribute_to_versions(dz, parse_range("^0.8.0"), release_versions());
  EXPECT_EQ(names(got), (std::vector<std::string>{"0.8.0", "0.8.1", "0.8.2", "0.8.3", "0.8.4", "0.8.5", "0.8.6"}));
  EXPECT_TRUE(attribute_to_versions(dz, parse_range("^0.8.7"), release_versions()).empty());
  const auto ecall = misuse_record(solbench::misuse::MisuseCategory::ECall);
  EXPECT_EQ(attribute_to_versions(ecall, parse_range("^0.8.7"), release_versions()).size(), 13u);  // 0.8.7 .. 0.8.19
}

TEST(Versions, BucketingMatchesBruteForce) {
  std::mt19937 rng(11);
  const auto rel = release_versions();
  const std::vector<std::string> pragmas = {"^0.4.11", ">=0.5.0 <0.7.0", "^0.8.0", "=0.6.4", "^0.7.0", "^0.8.7"};
  std::vector<Record> rs;
  for (int i = 0; i < 300; ++i) {
    using F = solbench::version::EhFeature;
    auto r = rng() % 3 == 0 ? misuse_record(solbench::misuse::MisuseCategory::PA)
                            : usage_record(rng() % 2 ? F::require : F::try_catch);
    if (rng() % 8) r.pragma = parse_range(pragmas[rng() % pragmas.size()]);
    rs.push_back(r);
  }
  const auto vs = bucket_by_version(rs);
  for (const auto& s : vs.series) {
    for (const auto& p : s.points) {
      const auto v = std::get<SolcVersion>(p.bucket);
      std::uint64_t want = 0;
      for (const auto& r : rs) {
        if (r.label != s.label || !r.pragma || !r.pragma->satisfies(v) || v < SolcVersion{0, 4, 10}) continue;
        if (r.label == "try_catch" && v < SolcVersion{0, 6, 0}) continue;
        if (r.label == "PA" && v >= SolcVersion{0, 8, 7}) continue;
        ++want;
      }
      EXPECT_EQ(p.count, want) << s.label << " " << v.to_string();
    }
    EXPECT_EQ(std::get<SolcVersion>(s.points.front().bucket).to_string(), "0.4.10");
    EXPECT_EQ(s.points.size(), static_cast<std::size_t>(std::count_if(rel.begin(), rel.end(), [](const SolcVersion& v) {
                return v >= SolcVersion{0, 4, 10};
              })));
  }
  EXPECT_EQ(vs.attributed + vs.unresolved, rs.size());
}

TEST(Growth, Examples) {
  const std::vector<double> a = {10, 20, 30};
  const auto g = growth_rates(a);
  EXPECT_DOUBLE_EQ(g.min, 0.5);
  EXPECT_DOUBLE_EQ(g.max, 1.0);
  EXPECT_DOUBLE_EQ(g.mean, 0.75);
  EXPECT_DOUBLE_EQ(g.median, 0.75);
  EXPECT_NEAR(g.std_dev, 0.3536, 1e-4);

  const std::vector<double> flat = {5, 5, 5};
  const auto z = growth_rates(flat);
  EXPECT_EQ(z.min, 0.0);
  EXPECT_EQ(z.max, 0.0);
  EXPECT_EQ(z.std_dev, 0.0);

  const std::vector<double> clamp = {0, 7};
  EXPECT_EQ(growth_steps(clamp), std::vector<double>{7.0});
  EXPECT_DOUBLE_EQ(growth_rates(clamp).mean, 7.0);

  const std::vector<double> one = {3};
  EXPECT_THROW((void)growth_rates(one), TooFewPoints);
}

TEST(Growth, FromSeries) {
  Series s{"require", {{TimeBucket{2020, 1}, 4}, {TimeBucket{2020, 2}, 2}, {TimeBucket{2020, 3}, 0}, {TimeBucket{2020, 4}, 3}}, false};
  const auto g = growth_rates(s);
  EXPECT_DOUBLE_EQ(g.min, -1.0);
  EXPECT_DOUBLE_EQ(g.max, 3.0);
  EXPECT_DOUBLE_EQ(g.median, -0.5);
  const std::vector<Series> list = {s, Series{"x", {{TimeBucket{2020, 1}, 1}}, false}};
  EXPECT_EQ(growth_table(list).size(), 1u);
}

TEST(Table, ExactCsv) {
  const std::vector<Series> one = {{"require", {{TimeBucket{2020, 2}, 3}}, false}};
  EXPECT_EQ(emit_table(one, Format::csv), "bucket,label,count\n2020-Q2,require,3\n");
  const std::vector<Series> two = {{"revert", {{TimeBucket{2020, 2}, 1}}, false},
                                   {"require", {{TimeBucket{2020, 2}, 2}, {TimeBucket{2020, 3}, 0}}, false}};
  EXPECT_EQ(emit_table(two, Format::csv), "bucket,label,count\n2020-Q2,require,2\n2020-Q2,revert,1\n2020-Q3,require,0\n");
  const std::vector<Series> ver = {{"require", {{SolcVersion{0, 4, 10}, 1}, {SolcVersion{0, 10, 0}, 2}}, false}};
  EXPECT_EQ(emit_table(ver, Format::csv), "version,label,count\n0.4.10,require,1\n0.10.0,require,2\n");
  const auto j = nlohmann::json::parse(emit_table(one, Format::json));
  EXPECT_EQ(j, nlohmann::json::parse(R"([{"bucket":"2020-Q2","label":"require","count":3}])"));
}

TEST(Table, Errors) {
  EXPECT_THROW((void)parse_format("xml"), std::invalid_argument);
  EXPECT_THROW((void)emit_table(std::vector<Series>{}, Format::csv), std::invalid_argument);
  const std::vector<Series> mixed = {{"a", {{TimeBucket{2020, 2}, 3}}, false}, {"b", {{SolcVersion{0, 5, 0}, 1}}, false}};
  EXPECT_THROW((void)emit_table(mixed, Format::csv), std::invalid_argument);
  EXPECT_THROW((void)parse_table("when,label,count\n", Format::csv), std::invalid_argument);
  EXPECT_THROW((void)parse_table("bucket,label,count\n2020-Q1,a,x\n", Format::csv), std::invalid_argument);
  EXPECT_THROW((void)parse_table("bucket,label,count\n2020-Q1,a,1\n2020-Q1,a,2\n", Format::csv), std::invalid_argument);
}

TEST(Table, RoundTripRandom) {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    const bool versions = rng() % 2;
    std::vector<Series> in;
    const int labels = 1 + static_cast<int>(rng() % 5);
    for (int l = 0; l < labels; ++l) {
      Series s{"L" + std::to_string(l) + (rng() % 2 ? "_x" : ""), {}, false};
      const int n = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < n; ++i) {
        const Bucket b = versions ? Bucket{SolcVersion{0, static_cast<std::uint32_t>(i / 3 + 4), static_cast<std::uint32_t>(i % 3 + rng() % 2 * 3)}}
                                  : Bucket{TimeBucket{2015 + i / 4, i % 4 + 1}};
        if (!s.points.empty() && !(s.points.back().bucket < b)) continue;
        s.points.push_back({b, rng() % 1000});
      }
      in.push_back(std::move(s));
    }
    std::sort(in.begin(), in.end(), [](const Series& a, const Series& b) { return a.label < b.label; });
    in.erase(std::unique(in.begin(), in.end(), [](const Series& a, const Series& b) { return a.label == b.label; }),
             in.end());
    for (const auto f : {Format::csv, Format::json}) {
      EXPECT_EQ(parse_table(emit_table(in, f), f), in) << round;
    }
  }
}

TEST(Series, CumulativeIsMonotone) {
  Series s{"r", {{TimeBucket{2020, 1}, 2}, {TimeBucket{2020, 2}, 0}, {TimeBucket{2020, 3}, 5}}, false};
  const auto c = cumulative(s);
  EXPECT_TRUE(c.cumulative);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].count, 2u);
  EXPECT_EQ(c.points[1].count, 2u);
  EXPECT_EQ(c.points[2].count, 7u);
}

TEST(Records, CollectFromSource) {
  const auto unit = solbench::frontend::parse_source(R"(pragma solidity ^0.8.0;
contract C {
  uint[] xs;
  function f(uint a, uint b) public returns (uint) {
    require(a > 0, "a");
    xs.pop();
    return a / b;
  }
}
)");
  RecordContext ctx;
  ctx.date = ymd(2021, 5, 1);
  ctx.dated_by_block = true;
  const auto rs = collect_records(unit, ctx);
  std::multiset<std::string> labels;
  for (const auto& r : rs) {
    labels.insert(r.label);
    EXPECT_EQ(r.date, ctx.date);
    ASSERT_TRUE(r.pragma.has_value());
  }
  EXPECT_EQ(labels, (std::multiset<std::string>{"DZ", "PA", "require"}));

  ctx.pragma = parse_range("^0.8.7");
  std::multiset<std::string> gated;
  for (const auto& r : collect_records(unit, ctx)) gated.insert(r.label);
  EXPECT_EQ(gated, (std::multiset<std::string>{"require"}));
}

TEST(Metadata, RecordsPolicies) {
  const auto j = metadata_json({"quarter", true, 10, 2, 1});
  EXPECT_EQ(j["growth_rate_formula"], std::string(kGrowthFormula));
  EXPECT_EQ(j["dating_policy"], std::string(kDatingPolicy));
  EXPECT_EQ(j["cumulative"], true);
  EXPECT_EQ(j["excluded"], 2);
}
