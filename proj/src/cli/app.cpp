#include "solbench/cli/app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "solbench/cli/scan.hpp"
#include "solbench/corpus/etherscan_client.hpp"
#include "solbench/corpus/fixture_client.hpp"
#include "solbench/corpus/ingest.hpp"
#include "solbench/corpus/stats.hpp"
#include "solbench/evolution/evolution.hpp"
#include "solbench/frontend/parser.hpp"
#include "solbench/version/eh_timeline.hpp"

#ifndef SOLBENCH_VERSION
#define SOLBENCH_VERSION "0.0.0"
#endif

namespace solbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << data) || !f.flush()) throw IoError("cannot write " + path);
}

// ---- scan ----

struct ScanArgs {
  std::vector<std::string> paths;
  std::string format = "json";
  std::string out;
  bool misuses_only = false;
  bool usages_only = false;
  bool fail_on_misuse = true;
  unsigned jobs = 0;
};

ExitStatus do_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> paths(a.paths.begin(), a.paths.end());
  std::vector<fs::path> files;
  try {
    files = collect_inputs(paths);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (files.empty()) throw UsageError("no .sol inputs");
  const auto report = scan_files(files, {a.misuses_only, a.usages_only, a.jobs});
  for (const auto& d : report.diagnostics) err << "solbench: " << d.file << ": " << d.message << "\n";
  std::string text;
  if (a.format == "json") {
    text = to_json(report).dump(2) + "\n";
  } else if (a.format == "csv") {
    text = to_csv(report);
  } else {
    text = to_text(report);
  }
  write_output(a.out, text, out);
  return a.fail_on_misuse && unsuppressed_misuses(report) > 0 ? ExitStatus::misuse_found : ExitStatus::ok;
}

// ---- ingest ----

struct IngestArgs {
  std::uint64_t from_block = 0;
  std::uint64_t to_block = 0;
  std::string out_dir;
  std::string fixture;
  std::string api_url;
  std::string api_key;
  double rate_limit = 5.0;
  bool stats = false;
};

ExitStatus do_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  const corpus::BlockRange range{a.from_block, a.to_block};
  try {
    range.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.rate_limit <= 0) throw UsageError("--rate-limit must be positive");

  std::unique_ptr<corpus::ExplorerClient> client;
  if (!a.fixture.empty()) {
    try {
      client = std::make_unique<corpus::FixtureClient>(corpus::FixtureClient::from_file(a.fixture));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad fixture: ") + e.what());
    }
  } else {
    corpus::EtherscanConfig cfg;
    cfg.api_key = !a.api_key.empty() ? a.api_key : env("ETHERSCAN_API_KEY").value_or("");
    if (cfg.api_key.empty()) throw UsageError("no API key: set ETHERSCAN_API_KEY or pass --api-key");
    if (!a.api_url.empty()) {
      cfg.base_url = a.api_url;
    } else if (auto url = env("SOLBENCH_API_URL"); url && !url->empty()) {
      cfg.base_url = *url;
    }
    cfg.rate_limit = a.rate_limit;
    try {
      client = std::make_unique<corpus::EtherscanClient>(cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  corpus::IngestReport report;
  try {
    auto store = corpus::CorpusStore::open(a.out_dir);
    report = corpus::ingest(*client, range, store, {});
    if (a.stats) {
      write_output((fs::path(a.out_dir) / "stats.json").string(), corpus::to_json(corpus::corpus_stats(store)).dump(2) + "\n", out);
    }
  } catch (const corpus::AuthError& e) {
    throw UsageError(std::string("explorer rejected the API key: ") + e.what());
  } catch (const corpus::ExplorerError& e) {
    throw IoError(e.what());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  out << "ingested " << report.added << " unique, " << report.aliases << " alias\n";
  out << "listed " << report.listed << ", known " << report.known << ", skipped " << report.skipped_empty
      << " empty, " << report.not_verified << " not verified, " << report.failed.size() << " failed\n";
  for (const auto& f : report.failed) err << "solbench: " << f.address << ": " << f.error << "\n";
  return report.failed.empty() ? ExitStatus::ok : ExitStatus::io_error;
}

// ---- evolve ----

struct EvolveArgs {
  std::string corpus_dir;
  std::string bucket = "quarter";
  std::string format = "csv";
  std::string only = "all";
  std::string out_dir;
  bool cumulative = false;
};

ExitStatus do_evolve(const EvolveArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::exists(fs::path(a.corpus_dir) / "manifest.json")) throw UsageError("no manifest in " + a.corpus_dir);
  std::vector<evolution::Record> records;
  std::size_t entries = 0;
  try {
    const auto store = corpus::CorpusStore::open(a.corpus_dir, corpus::CorpusStore::Mode::read);
    entries = store.entries().size();
    for (const auto& e : store.entries()) {
      evolution::RecordContext ctx;
      ctx.date = evolution::date_of_unix(e.dated_at());
      ctx.dated_by_block = e.dated_by_block();
      ctx.pragma = e.pragma_range();
      for (const auto& f : store.load_files(e)) {
        for (auto& r : evolution::collect_records(frontend::parse_source(f.text), ctx)) {
          const bool is_misuse = r.misuse.has_value();
          if ((a.only == "usages" && is_misuse) || (a.only == "misuses" && !is_misuse)) continue;
          records.push_back(std::move(r));
        }
      }
    }
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  if (entries == 0) throw UsageError("empty corpus");

  std::vector<std::string> labels;
  if (a.only != "misuses") labels = evolution::usage_labels();
  if (a.only != "usages") {
    const auto m = evolution::misuse_labels();
    labels.insert(labels.end(), m.begin(), m.end());
  }

  evolution::Metadata meta;
  meta.bucket = a.bucket;
  meta.cumulative = a.cumulative;
  meta.records = records.size();
  std::vector<evolution::Series> series;
  if (a.bucket == "quarter") {
    auto q = evolution::bucket_by_quarter(records, labels);
    series = std::move(q.series);
    meta.excluded = q.undated;
    meta.dated_by_retrieval = q.dated_by_retrieval;
  } else {
    auto v = evolution::bucket_by_version(records, version::release_versions(), labels);
    series = std::move(v.series);
    meta.excluded = v.unresolved;
  }
  if (meta.excluded > 0) err << "solbench: " << meta.excluded << " records excluded (undated or unresolved pragma)\n";

  const auto growth = evolution::growth_table(series);
  std::vector<evolution::Series> shown = series;
  if (a.cumulative) {
    for (auto& s : shown) s = evolution::cumulative(s);
  }
  const auto fmt = evolution::parse_format(a.format);
  const auto meta_json = evolution::metadata_json(meta);

  if (!a.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw IoError("cannot create " + a.out_dir);
    const std::string ext = fmt == evolution::Format::csv ? ".csv" : ".json";
    const auto dir = fs::path(a.out_dir);
    write_output((dir / ("series" + ext)).string(), evolution::emit_table(shown, fmt), out);
    write_output((dir / ("growth" + ext)).string(), evolution::emit_growth_table(growth, fmt), out);
    write_output((dir / "metadata.json").string(), meta_json.dump(2) + "\n", out);
    out << "wrote " << shown.size() << " series over " << entries << " contracts to " << a.out_dir << "\n";
    return ExitStatus::ok;
  }
  if (fmt == evolution::Format::csv) {
    out << evolution::emit_table(shown, fmt) << "\n" << evolution::emit_growth_table(growth, fmt);
  } else {
    out << json{{"metadata", meta_json},
                {"series", json::parse(evolution::emit_table(shown, fmt))},
                {"growth", json::parse(evolution::emit_growth_table(growth, fmt))}}
               .dump(2)
        << "\n";
  }
  return ExitStatus::ok;
}

// ---- timeline ----

ExitStatus do_timeline(const std::string& format, const std::string& out_path, std::ostream& out) {
  const auto events = version::timeline();
  std::ostringstream s;
  if (format == "json") {
    s << version::timeline_to_json(events).dump(2) << "\n";
  } else if (format == "csv") {
    s << "version,date,description,affected\n";
    for (const auto& e : events) {
      std::string affected;
      for (const auto f : e.affected) affected += (affected.empty() ? "" : ";") + std::string(version::to_string(f));
      s << e.version.to_string() << "," << version::format_date(e.date) << ",\"" << e.description << "\"," << affected
        << "\n";
    }
  } else {
    for (const auto& e : events) {
      s << std::left << std::setw(8) << e.version.to_string() << version::format_date(e.date) << "  " << e.description
        << "\n";
    }
    const auto st = version::release_interval_stats(events);
    s << events.size() << " events; mean interval " << std::fixed << std::setprecision(2) << st.mean_days
      << " days, median " << st.median_days << " days\n";
  }
  write_output(out_path, s.str(), out);
  return ExitStatus::ok;
}

}  // namespace

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

ExitStatus run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Error-handling usage and misuse analyzer for Solidity sources", "solbench"};
  app.set_version_flag("--version", SOLBENCH_VERSION);
  app.require_subcommand(1);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Report EH usages and misuses in .sol files");
  scan_cmd->add_option("paths", scan.paths, "Files or directories")->required();
  scan_cmd->add_option("--format", scan.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  scan_cmd->add_option("-o,--out", scan.out, "Write the report here instead of stdout");
  auto* mo = scan_cmd->add_flag("--misuses-only", scan.misuses_only, "Omit usage findings");
  scan_cmd->add_flag("--usages-only", scan.usages_only, "Omit misuse findings")->excludes(mo);
  scan_cmd->add_flag("--fail-on-misuse,!--no-fail-on-misuse", scan.fail_on_misuse,
                     "Exit 1 when an unsuppressed misuse is found (default on)");
  scan_cmd->add_option("-j,--jobs", scan.jobs, "Worker threads (0: all cores)");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Fetch verified contracts created in a block range");
  ingest_cmd->add_option("--from-block", ingest.from_block, "First block")->required();
  ingest_cmd->add_option("--to-block", ingest.to_block, "Last block (inclusive)")->required();
  ingest_cmd->add_option("--out", ingest.out_dir, "Corpus directory")->required();
  ingest_cmd->add_option("--fixture", ingest.fixture, "Read contracts from a JSON fixture instead of the explorer");
  ingest_cmd->add_option("--api-url", ingest.api_url, "Explorer API base URL (default: $SOLBENCH_API_URL or Etherscan)");
  ingest_cmd->add_option("--api-key", ingest.api_key, "Explorer API key (default: $ETHERSCAN_API_KEY)");
  ingest_cmd->add_option("--rate-limit", ingest.rate_limit, "Requests per second")->capture_default_str();
  ingest_cmd->add_flag("--stats", ingest.stats, "Also write stats.json into the corpus directory");

  EvolveArgs evolve;
  auto* evolve_cmd = app.add_subcommand("evolve", "Usage and misuse series over quarters or compiler versions");
  evolve_cmd->add_option("--corpus", evolve.corpus_dir, "Corpus directory written by ingest")->required();
  evolve_cmd->add_option("--bucket", evolve.bucket, "quarter or version")
      ->check(CLI::IsMember({"quarter", "version"}))
      ->capture_default_str();
  evolve_cmd->add_flag("--cumulative", evolve.cumulative, "Emit running totals");
  evolve_cmd->add_option("--format", evolve.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  evolve_cmd->add_option("--only", evolve.only, "usages, misuses or all")
      ->check(CLI::IsMember({"usages", "misuses", "all"}))
      ->capture_default_str();
  evolve_cmd->add_option("--out", evolve.out_dir, "Write series, growth and metadata files into this directory");

  std::string timeline_format = "text";
  std::string timeline_out;
  auto* timeline_cmd = app.add_subcommand("timeline", "Compiler releases that changed error handling");
  timeline_cmd->add_option("--format", timeline_format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  timeline_cmd->add_option("-o,--out", timeline_out, "Write here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitStatus::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitStatus::ok;
  } catch (const CLI::CallForVersion&) {
    out << SOLBENCH_VERSION << "\n";
    return ExitStatus::ok;
  } catch (const CLI::ParseError& e) {
    err << "solbench: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return ExitStatus::usage_error;
  }

  try {
    if (*scan_cmd) return do_scan(scan, out, err);
    if (*ingest_cmd) return do_ingest(ingest, out, err, env);
    if (*evolve_cmd) return do_evolve(evolve, out, err);
    return do_timeline(timeline_format, timeline_out, out);
  } catch (const UsageError& e) {
    err << "solbench: " << e.what() << "\n";
    return ExitStatus::usage_error;
  } catch (const IoError& e) {
    err << "solbench: " << e.what() << "\n";
    return ExitStatus::io_error;
  } catch (const std::exception& e) {
    err << "solbench: " << e.what() << "\n";
    return ExitStatus::io_error;
  }
}

}  // namespace solbench::cli
