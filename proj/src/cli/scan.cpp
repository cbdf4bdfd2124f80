#include "solbench/cli/scan.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "solbench/frontend/parser.hpp"
#include "solbench/usage/usage.hpp"

#ifndef SOLBENCH_VERSION
#define SOLBENCH_VERSION "0.0.0"
#endif

namespace solbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kSnippetLimit = 120;

std::string snippet_at(std::string_view text, const frontend::SourceSpan& span) {
  if (span.begin >= text.size()) return {};
  auto s = text.substr(span.begin, std::min(span.end, text.size()) - span.begin);
  s = s.substr(0, s.find('\n'));
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s.substr(0, kSnippetLimit));
  std::replace(out.begin(), out.end(), '\t', ' ');
  return out;
}

bool finding_less(const Finding& a, const Finding& b) {
  return std::tie(a.file, a.line, a.col, a.kind, a.category, a.feature, a.snippet) <
         std::tie(b.file, b.line, b.col, b.kind, b.category, b.feature, b.snippet);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read error");
  return ss.str();
}

ScanReport empty_report() {
  ScanReport r;
  r.tool_version = SOLBENCH_VERSION;
  return r;
}

}  // namespace

std::string_view to_string(Finding::Kind k) { return k == Finding::Kind::usage ? "usage" : "misuse"; }

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (auto it = fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec);
           !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (it->is_regular_file(ec) && it->path().extension() == ".sol") out.push_back(it->path().lexically_normal());
      }
    } else if (fs::exists(p, ec)) {
      if (p.extension() == ".sol") out.push_back(p.lexically_normal());
    } else {
      throw std::invalid_argument("no such file or directory: " + p.string());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ScanReport scan_source(const std::string& file, std::string_view text, const ScanOptions& options) {
  auto r = empty_report();
  r.inputs.push_back(file);
  const auto unit = frontend::parse_source(text);
  if (!options.misuses_only) {
    for (const auto& u : usage::detect_usages(unit)) {
      r.findings.push_back({Finding::Kind::usage, std::string(version::to_string(u.feature)),
                            std::string(usage::category_name(u.category)), file, u.span.start_line, u.span.start_col,
                            snippet_at(text, u.span), false, u.contract_name, u.function_name});
    }
  }
  const auto sites = misuse::candidate_sites(unit);
  const auto misuses = misuse::detect_misuses(unit);
  r.summary = misuse::tally(misuses, sites);
  if (!options.usages_only) {
    for (const auto& m : misuses) {
      r.findings.push_back({Finding::Kind::misuse, std::string(version::to_string(m.required_feature)),
                            std::string(misuse::to_string(m.category)), file, m.span.start_line, m.span.start_col,
                            m.evidence, m.suppressed_by_version, m.contract_name, m.function_name});
    }
  }
  std::stable_sort(r.findings.begin(), r.findings.end(), finding_less);
  return r;
}

ScanReport scan_files(const std::vector<fs::path>& files, const ScanOptions& options) {
  std::vector<ScanReport> parts(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const auto name = files[i].generic_string();
      try {
        parts[i] = scan_source(name, read_file(files[i]), options);
      } catch (const std::exception& e) {
        parts[i] = empty_report();
        parts[i].inputs.push_back(name);
        parts[i].diagnostics.push_back({name, e.what()});
      }
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(files.size(), 1)));
  std::vector<std::thread> threads;
  for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  auto out = empty_report();
  for (const auto& p : parts) out = merge_reports(out, p);
  return out;
}

ScanReport merge_reports(const ScanReport& a, const ScanReport& b) {
  ScanReport r = a;
  r.inputs.insert(r.inputs.end(), b.inputs.begin(), b.inputs.end());
  std::sort(r.inputs.begin(), r.inputs.end());
  r.findings.insert(r.findings.end(), b.findings.begin(), b.findings.end());
  std::stable_sort(r.findings.begin(), r.findings.end(), finding_less);
  r.diagnostics.insert(r.diagnostics.end(), b.diagnostics.begin(), b.diagnostics.end());
  std::sort(r.diagnostics.begin(), r.diagnostics.end(),
            [](const Diagnostic& x, const Diagnostic& y) { return std::tie(x.file, x.message) < std::tie(y.file, y.message); });
  r.summary = misuse::merge(a.summary, b.summary);
  return r;
}

std::size_t unsuppressed_misuses(const ScanReport& r) {
  return static_cast<std::size_t>(std::count_if(r.findings.begin(), r.findings.end(), [](const Finding& f) {
    return f.kind == Finding::Kind::misuse && !f.suppressed_by_version;
  }));
}

json to_json(const ScanReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) {
    findings.push_back({{"kind", to_string(f.kind)},
                        {"feature", f.feature},
                        {"category", f.category},
                        {"file", f.file},
                        {"line", f.line},
                        {"col", f.col},
                        {"snippet", f.snippet},
                        {"suppressed_by_version", f.suppressed_by_version},
                        {"contract", f.contract},
                        {"function", f.function}});
  }
  json summary = json::object();
  for (const auto c : misuse::kAllMisuseCategories) {
    const auto& t = misuse::at(r.summary, c);
    summary[std::string(misuse::to_string(c))] = {{"total_cases", t.total_cases},
                                                  {"guarded", t.guarded},
                                                  {"missing", t.missing},
                                                  {"suppressed", t.suppressed},
                                                  {"missing_pct", 100.0 * t.missing_pct}};
  }
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back({{"file", d.file}, {"message", d.message}});
  return {{"schema", kReportSchema},
          {"tool_version", r.tool_version},
          {"inputs", r.inputs},
          {"findings", findings},
          {"summary", summary},
          {"diagnostics", diagnostics}};
}

std::string to_csv(const ScanReport& r) {
  std::string out = "kind,feature,category,file,line,col,suppressed_by_version,contract,function,snippet\n";
  for (const auto& f : r.findings) {
    out += std::string(to_string(f.kind)) + "," + f.feature + "," + f.category + "," + csv_field(f.file) + "," +
           std::to_string(f.line) + "," + std::to_string(f.col) + "," + (f.suppressed_by_version ? "true" : "false") +
           "," + csv_field(f.contract) + "," + csv_field(f.function) + "," + csv_field(f.snippet) + "\n";
  }
  return out;
}

std::string to_text(const ScanReport& r) {
  std::ostringstream out;
  for (const auto& f : r.findings) {
    out << f.file << ":" << f.line << ":" << f.col << ": ";
    if (f.kind == Finding::Kind::usage) {
      out << "usage " << f.feature << "/" << f.category;
    } else {
      out << "misuse " << f.category << " (needs " << f.feature << ")";
      if (f.suppressed_by_version) out << " [checked by compiler]";
    }
    if (!f.contract.empty()) out << " in " << f.contract << (f.function.empty() ? "" : "." + f.function);
    out << ": " << f.snippet << "\n";
  }
  for (const auto& d : r.diagnostics) out << d.file << ": error: " << d.message << "\n";
  out << "\ncategory  cases  guarded  missing  suppressed  missing%\n";
  for (const auto c : misuse::kAllMisuseCategories) {
    const auto& t = misuse::at(r.summary, c);
    out << std::left << std::setw(8) << misuse::to_string(c) << std::right << std::setw(7) << t.total_cases
        << std::setw(9) << t.guarded << std::setw(9) << t.missing << std::setw(12) << t.suppressed << std::setw(10)
        << std::fixed << std::setprecision(1) << 100.0 * t.missing_pct << "\n";
  }
  out << r.inputs.size() << " files, " << r.findings.size() << " findings, " << unsuppressed_misuses(r)
      << " unsuppressed misuses\n";
  return out.str();
}

}  // namespace solbench::cli
