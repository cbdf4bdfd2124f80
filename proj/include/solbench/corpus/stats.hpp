#pragma once

#include <cstddef>
#include <filesystem>

#include <json.hpp>

#include "solbench/corpus/store.hpp"

namespace solbench::corpus {

/// Descriptive statistics over the deduplicated corpus (one entry per content
/// hash). LOC counts non-blank lines, comments included; LOC, functions,
/// modifiers and constructors are summed over distinct files.
struct CorpusStats {
  std::size_t contracts = 0;
  std::size_t source_files = 0;
  std::size_t unique_source_files = 0;
  std::size_t loc = 0;
  double avg_loc_per_file = 0.0;
  double avg_files_per_contract = 0.0;
  double median_files_per_contract = 0.0;
  std::size_t functions = 0;
  std::size_t modifiers = 0;
  std::size_t constructors = 0;
  double pct_with_eh = 0.0;  // percent of contracts with at least one EH construct

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

[[nodiscard]] std::size_t count_loc(std::string_view text);

/// From the manifest and the stored files.
[[nodiscard]] CorpusStats corpus_stats(const CorpusStore& store);

/// Independent re-scan: walks contracts/*/ on disk, reading every record.json
/// and every .sol file found under src/, without the manifest.
[[nodiscard]] CorpusStats rescan_stats(const std::filesystem::path& root);

[[nodiscard]] nlohmann::json to_json(const CorpusStats& s);

}  // namespace solbench::corpus
