// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontend_invariants.hpp"
#include "oracle_annotations.hpp"
#include "solbench/cli/app.hpp"
#include "solbench/cli/scan.hpp"
#include "solbench/corpus/fixture_client.hpp"
#include "solbench/corpus/ingest.hpp"
#include "solbench/evolution/evolution.hpp"
#include "solbench/frontend/lexer.hpp"
#include "solbench/frontend/parser.hpp"
#include "solbench/misuse/misuse.hpp"
#include "solbench/usage/usage.hpp"
#include "solbench/version/eh_timeline.hpp"
#include "test_support.hpp"

using namespace solbench;
namespace fs = std::filesystem;
using nlohmann::json;
using misuse::MisuseCategory;
using testing::fixture_path;
using testing::read_fixture;

namespace {

struct Check {
  bool ok = true;
  std::string why;

  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("solbench_acceptance_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<fs::path> sol_files(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fixture_path(dir))) {
    if (e.path().extension() == ".sol") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  cli::ExitStatus status;
  std::string out;
  std::string err;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const auto st = cli::run(args, out, err, [](std::string_view) -> std::optional<std::string> { return std::nullopt; });
  return {st, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

// ---- AC1 ----

void listing_fidelity(Check& c) {
  using Kind = cli::Finding::Kind;
  const auto one = cli::scan_source("listing1.sol", read_fixture("listings/listing1.sol"));
  c.expect(one.findings.size() == 1, "listing1.sol: expected exactly one finding");
  if (!one.findings.empty()) {
    const auto& f = one.findings[0];
    c.expect(f.kind == Kind::misuse && f.category == "FAA" && f.feature == "require" && !f.suppressed_by_version,
             "listing1.sol: expected an unsuppressed FAA misuse requiring require");
  }

  struct Want {
    const char* file;
    const char* feature;
    const char* category;
  };
  for (const auto& w : {Want{"listings/listing2.sol", "require", "external_calls"},
                        Want{"listings/listing3.sol", "revert", "function_form"},
                        Want{"listings/listing4.sol", "assert", "enum_type_conversion"}}) {
    const auto r = cli::scan_source(w.file, read_fixture(w.file));
    std::vector<std::pair<std::string, std::string>> usages;
    for (const auto& f : r.findings) {
      if (f.kind == Kind::usage) usages.emplace_back(f.feature, f.category);
    }
    c.expect(usages == std::vector<std::pair<std::string, std::string>>{{w.feature, w.category}},
             std::string(w.file) + ": expected " + w.feature + "/" + w.category);
  }

  const auto combined = cli::scan_source("listings_2_3_4.sol", read_fixture("listings/listings_2_3_4.sol"));
  std::vector<std::string> got;
  for (const auto& f : combined.findings) {
    if (f.kind == Kind::usage) got.push_back(f.feature + "/" + f.category);
  }
  c.expect(got == std::vector<std::string>{"require/external_calls", "revert/function_form", "assert/enum_type_conversion"},
           "listings_2_3_4.sol: expected exactly three usage findings");

  // Zero-checked address parameters never produce an FAA misuse.
  const auto unit = frontend::parse_source(read_fixture("listings/listings_2_3_4.sol"));
  for (const auto& s : misuse::candidate_sites(unit)) {
    if (s.kind != MisuseCategory::FAA) continue;
    const bool guarded = misuse::is_guarded(s, unit).kind != misuse::GuardKind::unguarded;
    for (const auto& m : misuse::detect_misuses(unit)) {
      c.expect(!(guarded && m.category == MisuseCategory::FAA && m.span == s.span), "FAA misuse on a guarded parameter");
    }
  }
}

// ---- AC2 ----

void category_suite(Check& c) {
  for (const auto cat : misuse::kAllMisuseCategories) {
    const std::string name(misuse::to_string(cat));
    const auto bad = cli::scan_source(name + ".sol", read_fixture("categories/" + name + ".sol"), {true, false, 0});
    c.expect(bad.findings.size() == 1, name + ": expected exactly one misuse, got " + std::to_string(bad.findings.size()));
    if (bad.findings.size() == 1) {
      c.expect(bad.findings[0].category == name && !bad.findings[0].suppressed_by_version,
               name + ": wrong category " + bad.findings[0].category);
    }
    const auto good =
        cli::scan_source(name + "_guarded.sol", read_fixture("categories/" + name + "_guarded.sol"), {true, false, 0});
    c.expect(good.findings.empty(), name + "_guarded: expected no misuse, got " + std::to_string(good.findings.size()));
  }
}

// ---- AC3 ----

void timeline_stats(Check& c) {
  const auto events = version::timeline();
  c.expect(events.size() == 13, "timeline length " + std::to_string(events.size()));
  const auto s = version::release_interval_stats(events);
  std::ostringstream msg;
  msg << "mean " << s.mean_days << ", median " << s.median_days;
  c.expect(std::abs(s.mean_days - 179.08) <= 0.5, msg.str());
  c.expect(std::abs(s.median_days - 112.5) <= 2.0, msg.str());
  const auto tl = cli_run({"timeline", "--format", "json"});
  c.expect(tl.status == cli::ExitStatus::ok && json::parse(tl.out).size() == 13, "timeline command");
}

// ---- AC4 ----

std::map<MisuseCategory, std::pair<int, int>> gated_counts(const std::string& pragma) {
  std::map<MisuseCategory, std::pair<int, int>> out;  // unsuppressed, suppressed
  for (const auto& p : sol_files("gating")) {
    auto text = slurp(p);
    text.replace(text.find("__PRAGMA__"), 10, pragma);
    for (const auto& m : misuse::detect_misuses(frontend::parse_source(text))) {
      auto& slot = out[m.category];
      ++(m.suppressed_by_version ? slot.second : slot.first);
    }
  }
  return out;
}

void version_gating(Check& c) {
  c.expect(sol_files("gating").size() == 10, "expected 10 gating contracts");
  auto modern = gated_counts("^0.8.7");
  auto legacy = gated_counts("^0.4.24");
  for (const auto cat : {MisuseCategory::DZ, MisuseCategory::PA}) {
    const std::string n(misuse::to_string(cat));
    c.expect(modern[cat].first == 0, n + ": unsuppressed under ^0.8.7");
    c.expect(modern[cat].second >= 1, n + ": nothing suppressed under ^0.8.7");
    c.expect(legacy[cat].first >= 1, n + ": none reported under ^0.4.24");
    c.expect(legacy[cat].first == modern[cat].second, n + ": gating changed the site count");
  }
}

// ---- AC5 ----

struct GenSite {
  MisuseCategory kind;
  std::uint32_t line;
  std::string verdict;  // eh, if, none, suppressed

  auto operator<=>(const GenSite&) const = default;
};

struct GenContract {
  std::string text;
  std::vector<GenSite> sites;
};

class Generator {
 public:
  explicit Generator(std::uint32_t seed) : rng_(seed) {}

  GenContract next(int index) {
    lines_.clear();
    GenContract g;
    static const char* pragmas[] = {"^0.6.12", "^0.8.0", "^0.8.9"};
    const std::string pragma = pragmas[rng_() % 3];
    const bool gated = pragma == "^0.8.9";
    add("pragma solidity " + pragma + ";");
    add("interface IToken { function transfer(address to, uint256 v) external returns (bool); }");
    add("contract Child { uint256 public x; }");
    add("contract Gen" + std::to_string(index) + " {");
    add("  IToken token;");
    add("  uint256[] arr;");
    add("  enum Mode { A, B, C }");
    add("  Mode mode;");
    add("  address owner;");
    const int functions = 1 + static_cast<int>(rng_() % 8);
    for (int i = 0; i < functions; ++i) {
      const auto kind = misuse::kAllMisuseCategories[rng_() % 7];
      static const char* guards[] = {"eh", "if", "none"};
      std::string verdict = guards[rng_() % 3];
      const auto line = emit(kind, verdict, "f" + std::to_string(i));
      if (verdict == "none" && gated && misuse::version_gated(kind)) verdict = "suppressed";
      g.sites.push_back({kind, line, verdict});
    }
    add("}");
    for (const auto& l : lines_) g.text += l + "\n";
    std::sort(g.sites.begin(), g.sites.end());
    return g;
  }

 private:
  std::uint32_t add(const std::string& l) {
    lines_.push_back(l);
    return static_cast<std::uint32_t>(lines_.size());
  }

  // Returns the line holding the site.
  std::uint32_t emit(MisuseCategory kind, const std::string& g, const std::string& fn) {
    std::uint32_t site = 0;
    switch (kind) {
      case MisuseCategory::ECall:
        add("  function " + fn + "(uint256 v) external {");
        if (g == "none") site = add("    token.transfer(owner, v);");
        if (g == "if") site = add("    if (!token.transfer(owner, v)) { return; }");
        if (g == "eh") {
          site = rng_() % 2 ? add("    require(token.transfer(owner, v), \"transfer\");")
                            : add("    try token.transfer(owner, v) returns (bool) { } catch { }");
        }
        break;
      case MisuseCategory::FAA:
        site = add("  function " + fn + "(address a) external {");
        if (g == "eh") add("    require(a != address(0), \"zero\");");
        if (g == "if") add("    if (a == address(0)) { return; }");
        add("    owner = a;");
        break;
      case MisuseCategory::ECon:
        add("  function " + fn + "() external {");
        if (g == "eh") {
          site = add("    try new Child() returns (Child) { } catch { }");
        } else {
          site = add("    Child c = new Child();");
          if (g == "if") add("    if (address(c) == address(0)) { return; }");
        }
        break;
      case MisuseCategory::AA:
        add("  function " + fn + "(uint256 n) external pure {");
        if (g == "eh") add("    assert(n > 0);");
        if (g == "if") add("    if (n == 0) { return; }");
        site = add("    uint256[] memory m = new uint256[](n);");
        break;
      case MisuseCategory::PA:
        add("  function " + fn + "() external {");
        if (g == "eh") add("    assert(arr.length > 0);");
        site = add(g == "if" ? "    if (arr.length > 0) { arr.pop(); }" : "    arr.pop();");
        break;
      case MisuseCategory::DZ:
        add("  function " + fn + "(uint256 x, uint256 y) external pure returns (uint256) {");
        if (g == "eh") add("    assert(y != 0);");
        if (g == "if") add("    if (y == 0) { return 0; }");
        site = add("    return x / y;");
        break;
      case MisuseCategory::ETC:
        add("  function " + fn + "(uint256 k) external {");
        if (g == "eh") add("    assert(k <= 2);");
        if (g == "if") add("    if (k > 2) { return; }");
        site = add("    mode = Mode(k);");
        break;
    }
    add("  }");
    return site;
  }

  std::mt19937 rng_;
  std::vector<std::string> lines_;
};

std::string verdict_word(const misuse::GuardVerdict& v, bool suppressed) {
  switch (v.kind) {
    case misuse::GuardKind::eh_guarded: return "eh";
    case misuse::GuardKind::if_guarded: return "if";
    case misuse::GuardKind::unguarded: return suppressed ? "suppressed" : "none";
  }
  return "?";
}

void partition(Check& c) {
  Generator gen(20240601);
  misuse::Tally total{};
  std::map<MisuseCategory, std::size_t> want_total, want_missing;
  for (int i = 0; i < 500 && c.ok; ++i) {
    const auto g = gen.next(i);
    const auto unit = frontend::parse_source(g.text);
    const auto sites = misuse::candidate_sites(unit);
    const auto misuses = misuse::detect_misuses(unit);
    const bool gated = misuse::compiler_checks_by_default(frontend::effective_range(unit), version::release_versions());

    std::vector<GenSite> got;
    for (const auto& s : sites) {
      got.push_back({s.kind, s.span.start_line, verdict_word(misuse::is_guarded(s, unit), gated && misuse::version_gated(s.kind))});
    }
    std::sort(got.begin(), got.end());
    c.expect(got == g.sites, "contract " + std::to_string(i) + ": sites or verdicts differ from ground truth\n" + g.text);

    std::vector<GenSite> reported, truth;
    for (const auto& m : misuses) {
      reported.push_back({m.category, m.span.start_line, m.suppressed_by_version ? "suppressed" : "none"});
    }
    for (const auto& s : g.sites) {
      if (s.verdict == "none" || s.verdict == "suppressed") truth.push_back(s);
    }
    std::sort(reported.begin(), reported.end());
    c.expect(reported == truth, "contract " + std::to_string(i) + ": phantom or missed misuse\n" + g.text);

    const auto t = misuse::tally(misuses, sites);
    for (const auto cat : misuse::kAllMisuseCategories) {
      const auto& ct = misuse::at(t, cat);
      c.expect(ct.total_cases == ct.guarded + ct.missing, "partition broken for " + std::string(misuse::to_string(cat)));
    }
    total = misuse::merge(total, t);
    for (const auto& s : g.sites) {
      ++want_total[s.kind];
      if (s.verdict == "none") ++want_missing[s.kind];
    }
  }
  for (const auto cat : misuse::kAllMisuseCategories) {
    const auto& ct = misuse::at(total, cat);
    const std::string n(misuse::to_string(cat));
    c.expect(ct.total_cases == want_total[cat], n + ": total differs from generator");
    c.expect(ct.missing == want_missing[cat], n + ": missing differs from generator");
    c.expect(ct.total_cases == ct.guarded + ct.missing, n + ": merged partition broken");
  }
}

// ---- AC6 ----

void oracle_corpus(Check& c) {
  const auto files = sol_files("oracle");
  c.expect(files.size() == 30, "expected 30 oracle contracts");
  std::size_t sites = 0;
  for (const auto& p : files) {
    const auto text = slurp(p);
    const auto want = testing::read_annotations(text);
    const auto unit = frontend::parse_source(text);
    const bool gated = misuse::compiler_checks_by_default(frontend::effective_range(unit), version::release_versions());
    std::vector<testing::SiteKey> got_sites;
    for (const auto& s : misuse::candidate_sites(unit)) {
      got_sites.emplace_back(std::string(misuse::to_string(s.kind)), s.span.start_line,
                             verdict_word(misuse::is_guarded(s, unit), gated && misuse::version_gated(s.kind)));
    }
    std::sort(got_sites.begin(), got_sites.end());
    c.expect(got_sites == want.sites, p.filename().string() + ": sites differ from annotations");
    std::vector<testing::UsageKey> got_usages;
    for (const auto& u : usage::detect_usages(unit)) {
      got_usages.emplace_back(std::string(version::to_string(u.feature)), std::string(usage::category_name(u.category)),
                              u.span.start_line);
    }
    std::sort(got_usages.begin(), got_usages.end());
    c.expect(got_usages == want.usages, p.filename().string() + ": usages differ from annotations");
    sites += want.sites.size();
  }
  c.expect(sites > 0, "no annotated sites");
}

// ---- AC7 ----

evolution::GrowthStats reference_growth(const std::vector<double>& counts) {
  std::vector<double> r;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    const double prev = counts[i - 1] < 1.0 ? 1.0 : counts[i - 1];
    r.push_back((counts[i] - counts[i - 1]) / prev);
  }
  evolution::GrowthStats g;
  g.min = *std::min_element(r.begin(), r.end());
  g.max = *std::max_element(r.begin(), r.end());
  long double sum = 0;
  for (const double x : r) sum += x;
  g.mean = static_cast<double>(sum / r.size());
  auto sorted = r;
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  g.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  long double ss = 0;
  for (const double x : r) ss += (x - g.mean) * (x - g.mean);
  g.std_dev = n > 1 ? std::sqrt(static_cast<double>(ss / (n - 1))) : 0.0;
  return g;
}

void growth_oracle(Check& c) {
  std::mt19937_64 rng(42);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> counts(2 + rng() % 40);
    const auto scale = 1 + rng() % 5000;
    for (auto& x : counts) x = static_cast<double>(rng() % 4 == 0 ? 0 : rng() % scale);
    evolution::Series s{"s", {}, false};
    evolution::TimeBucket b{2017, 1};
    for (const double x : counts) {
      s.points.push_back({b, static_cast<std::uint64_t>(x)});
      b = b.next();
    }
    const auto got = evolution::growth_rates(s);
    const auto want = reference_growth(counts);
    const bool same = close(got.min, want.min) && close(got.max, want.max) && close(got.mean, want.mean) &&
                      close(got.median, want.median) && close(got.std_dev, want.std_dev);
    c.expect(same, "series " + std::to_string(i) + " differs from the reference");
    c.expect(got.min <= got.median && got.median <= got.max && got.min <= got.mean && got.mean <= got.max,
             "ordering invariant");
  }
}

// ---- AC8 ----

void parser_robustness(Check& c) {
  std::vector<std::string> seeds;
  for (const char* dir : {"oracle", "listings", "categories", "gating"}) {
    for (const auto& p : sol_files(dir)) seeds.push_back(slurp(p));
  }
  static const char* snippets[] = {"{", "}", "(", ")", ";", "\"", "'", "/*", "*/", "//", "\n", "pragma solidity ^0.8.0;",
                                   "contract X {", "function f(", "require(", "try ", "catch", "new ", "[]", "unchecked {",
                                   "assembly {", "\\", "\xC3", "\xFF\xFE", "0x", "hex\"", "unicode\"", "=>", "..."};
  std::mt19937 rng(8);
  auto byte = [&] { return static_cast<char>(rng() % 256); };
  std::size_t inputs = 0;
  for (int i = 0; i < 10000 && c.ok; ++i) {
    std::string text;
    const int mode = static_cast<int>(rng() % 10);
    if (mode == 0) {
      text.resize(rng() % 2048);
      for (auto& ch : text) ch = byte();
    } else {
      text = seeds[rng() % seeds.size()];
      const int edits = 1 + static_cast<int>(rng() % 8);
      for (int e = 0; e < edits && !text.empty(); ++e) {
        const auto at = rng() % text.size();
        switch (rng() % 6) {
          case 0: text[at] = byte(); break;
          case 1: text.insert(at, snippets[rng() % std::size(snippets)]); break;
          case 2: text.erase(at, rng() % 64); break;
          case 3: text.insert(at, text.substr(rng() % text.size(), rng() % 128)); break;
          case 4: text.resize(at); break;
          default: {
            const auto& other = seeds[rng() % seeds.size()];
            text = text.substr(0, at) + other.substr(rng() % other.size());
          }
        }
      }
    }
    ++inputs;
    const auto toks = frontend::tokenize(text);
    const auto unit = frontend::parse(toks);
    for (const auto& err : {testing::check_lossless(text, toks), testing::check_coverage(text, toks, unit),
                            testing::check_tree_spans(text, unit)}) {
      c.expect(err.empty(), "input " + std::to_string(i) + ": " + err);
    }
    for (const auto& u : usage::detect_usages(unit)) {
      c.expect(testing::span_ok(u.span, text.size()), "usage span out of bounds");
    }
    for (const auto& m : misuse::detect_misuses(unit)) {
      c.expect(testing::span_ok(m.span, text.size()), "misuse span out of bounds");
    }
  }
  c.expect(inputs == 10000, "stopped after " + std::to_string(inputs) + " inputs");
}

// ---- AC9 ----

void ingestion(Check& c) {
  TempDir dir("ingest");
  auto client = corpus::FixtureClient::from_file(fixture_path("ingest/five_contracts.json"));
  corpus::IngestOptions opts;
  opts.pacing.sleep = [](std::chrono::nanoseconds) {};
  {
    auto store = corpus::CorpusStore::open(dir.path);
    const auto r = corpus::ingest(client, {0, 1000}, store, opts);
    c.expect(r.listed == 5, "expected 5 listed contracts");
    c.expect(store.entries().size() == 4, "expected 4 manifest entries");
    std::size_t aliases = 0;
    for (const auto& e : store.entries()) aliases += e.aliases.size();
    c.expect(aliases == 1, "expected 1 alias");
    c.expect(r.delta() == 5, "first delta");
  }
  {
    auto store = corpus::CorpusStore::open(dir.path);
    const auto r = corpus::ingest(client, {0, 1000}, store, opts);
    c.expect(r.delta() == 0 && store.entries().size() == 4, "re-ingest changed the manifest");
  }
  // The CLI sleeps for real on throttled responses; the in-process run above covers that path.
  TempDir cli_dir("ingest_cli");
  auto fixture = json::parse(read_fixture("ingest/five_contracts.json"));
  for (auto& entry : fixture.at("contracts")) entry.erase("throttle");
  const auto fixture_file = (cli_dir.path / "fixture.json").string();
  std::ofstream(fixture_file) << fixture.dump();
  const auto store_dir = (cli_dir.path / "corpus").string();
  const std::vector<std::string> args = {"ingest", "--fixture", fixture_file, "--from-block", "0",
                                         "--to-block", "1000", "--out", store_dir};
  const auto first = cli_run(args);
  c.expect(first.status == cli::ExitStatus::ok && first_line(first.out) == "ingested 4 unique, 1 alias",
           "CLI summary: " + first_line(first.out));
  const auto second = cli_run(args);
  c.expect(first_line(second.out) == "ingested 0 unique, 0 alias", "CLI re-run: " + first_line(second.out));
}

// ---- AC10 ----

void try_catch_attribution(Check& c) {
  TempDir dir("try_catch");
  const auto ing = cli_run({"ingest", "--fixture", fixture_path("ingest/try_catch.json").string(), "--from-block", "0",
                            "--to-block", "1000", "--out", dir.path.string()});
  c.expect(ing.status == cli::ExitStatus::ok, "ingest failed: " + ing.err);
  const auto ev = cli_run({"evolve", "--corpus", dir.path.string(), "--bucket", "version", "--format", "json"});
  c.expect(ev.status == cli::ExitStatus::ok, "evolve failed: " + ev.err);
  if (!c.ok) return;
  const auto doc = json::parse(ev.out);
  std::map<std::string, std::uint64_t> got;
  for (const auto& row : doc.at("series")) {
    if (row.at("label") == "try_catch") got[row.at("version").get<std::string>()] = row.at("count").get<std::uint64_t>();
  }
  const auto range = version::parse_range(">=0.5.0 <0.7.0");
  std::size_t attributed = 0;
  for (const auto& v : version::release_versions()) {
    const bool want = range.satisfies(v) && v >= version::SolcVersion{0, 6, 0} && v < version::SolcVersion{0, 7, 0};
    const auto it = got.find(v.to_string());
    const std::uint64_t count = it == got.end() ? 0 : it->second;
    c.expect(count == (want ? 1u : 0u), "try_catch count " + std::to_string(count) + " at " + v.to_string());
    attributed += count;
  }
  c.expect(attributed == 13, "expected attribution to the 13 releases 0.6.0 .. 0.6.12");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "listing fidelity", 1.0, listing_fidelity},
      {2, "per-category misuse suite", 1.0, category_suite},
      {3, "timeline statistics", 1.0, timeline_stats},
      {4, "version gating", 1.0, version_gating},
      {5, "partition property (500 synthetic contracts)", 30.0, partition},
      {6, "oracle corpus (30 annotated contracts)", 5.0, oracle_corpus},
      {7, "growth-rate oracle (1000 series)", 5.0, growth_oracle},
      {8, "parser robustness (10000 fuzzed inputs)", 60.0, parser_robustness},
      {9, "ingestion idempotence and dedup", 1.0, ingestion},
      {10, "try/catch version attribution", 1.0, try_catch_attribution},
  };
  int failed = 0;
  for (const auto& ac : criteria) {
    if (!only.empty() && !only.count(ac.id)) continue;
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ac.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.expect(secs < ac.limit_seconds, "took longer than " + std::to_string(ac.limit_seconds) + " s");
    std::cout << "AC" << ac.id << " " << (check.ok ? "PASS" : "FAIL") << " " << ac.name << " (" << std::fixed
              << std::setprecision(3) << secs << " s)";
    if (!check.ok) {
      std::cout << ": " << check.why;
      ++failed;
    }
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
