#include "solbench/corpus/stats.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "solbench/frontend/parser.hpp"
#include "solbench/frontend/walk.hpp"
#include "solbench/usage/usage.hpp"

namespace solbench::corpus {

namespace fs = std::filesystem;

namespace {

struct FileFacts {
  std::size_t loc = 0;
  std::size_t functions = 0;
  std::size_t modifiers = 0;
  std::size_t constructors = 0;
  bool has_eh = false;
};

FileFacts facts_of(std::string_view text) {
  FileFacts f;
  f.loc = count_loc(text);
  const auto unit = frontend::parse_source(text);
  auto count = [&](const frontend::FunctionDef& fn) {
    switch (fn.kind) {
      case frontend::FunctionKind::modifier: ++f.modifiers; break;
      case frontend::FunctionKind::constructor: ++f.constructors; break;
      default: ++f.functions; break;
    }
  };
  for (const auto& c : unit.contracts) {
    for (const auto& fn : c.functions) count(fn);
  }
  for (const auto& fn : unit.free_functions) count(fn);
  f.has_eh = !usage::detect_usages(unit).empty() ||
             !frontend::walk_expressions(unit, [](const frontend::Expression& e) {
                return e.kind == frontend::ExprKind::identifier && e.text == "throw";
              }).empty();
  return f;
}

// One contract = its files; digests are computed here rather than trusted from metadata.
CorpusStats compute(const std::vector<std::vector<SourceFile>>& contracts) {
  CorpusStats s;
  s.contracts = contracts.size();
  std::map<std::string, FileFacts> distinct;
  std::vector<std::size_t> per_contract;
  std::size_t with_eh = 0;
  for (const auto& files : contracts) {
    per_contract.push_back(files.size());
    s.source_files += files.size();
    bool eh = false;
    for (const auto& f : files) {
      const auto h = file_hash(f.text);
      auto it = distinct.find(h);
      if (it == distinct.end()) it = distinct.emplace(h, facts_of(f.text)).first;
      eh = eh || it->second.has_eh;
    }
    if (eh) ++with_eh;
  }
  s.unique_source_files = distinct.size();
  for (const auto& [h, f] : distinct) {
    s.loc += f.loc;
    s.functions += f.functions;
    s.modifiers += f.modifiers;
    s.constructors += f.constructors;
  }
  if (s.unique_source_files > 0) s.avg_loc_per_file = static_cast<double>(s.loc) / static_cast<double>(s.unique_source_files);
  if (s.contracts > 0) {
    s.avg_files_per_contract = static_cast<double>(s.source_files) / static_cast<double>(s.contracts);
    std::sort(per_contract.begin(), per_contract.end());
    const auto n = per_contract.size();
    s.median_files_per_contract = n % 2 == 1 ? static_cast<double>(per_contract[n / 2])
                                             : (static_cast<double>(per_contract[n / 2 - 1]) +
                                                static_cast<double>(per_contract[n / 2])) / 2.0;
    s.pct_with_eh = 100.0 * static_cast<double>(with_eh) / static_cast<double>(s.contracts);
  }
  return s;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t count_loc(std::string_view text) {
  std::size_t n = 0;
  bool blank = true;
  for (const char c : text) {
    if (c == '\n' || c == '\r') {
      if (!blank) ++n;
      blank = true;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
    }
  }
  if (!blank) ++n;
  return n;
}

CorpusStats corpus_stats(const CorpusStore& store) {
  std::vector<std::vector<SourceFile>> contracts;
  for (const auto& e : store.entries()) contracts.push_back(store.load_files(e));
  return compute(contracts);
}

CorpusStats rescan_stats(const fs::path& root) {
  std::vector<std::vector<SourceFile>> contracts;
  const auto dir = root / "contracts";
  if (!fs::is_directory(dir)) return compute(contracts);
  std::vector<fs::path> entries;
  for (const auto& d : fs::directory_iterator(dir)) {
    if (d.is_directory() && fs::exists(d.path() / "record.json")) entries.push_back(d.path());
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) {
    std::vector<SourceFile> files;
    const auto src = e / "src";
    if (fs::is_directory(src)) {
      for (const auto& f : fs::recursive_directory_iterator(src)) {
        if (f.is_regular_file() && f.path().extension() == ".sol") {
          files.push_back({fs::relative(f.path(), src).generic_string(), read_all(f.path())});
        }
      }
    }
    contracts.push_back(std::move(files));
  }
  return compute(contracts);
}

nlohmann::json to_json(const CorpusStats& s) {
  return {{"contracts", s.contracts},
          {"source_files", s.source_files},
          {"unique_source_files", s.unique_source_files},
          {"loc", s.loc},
          {"loc_definition", "non-blank lines, comments included"},
          {"avg_loc_per_file", s.avg_loc_per_file},
          {"avg_files_per_contract", s.avg_files_per_contract},
          {"median_files_per_contract", s.median_files_per_contract},
          {"functions", s.functions},
          {"modifiers", s.modifiers},
          {"constructors", s.constructors},
          {"pct_with_eh", s.pct_with_eh}};
}

}  // namespace solbench::corpus
