#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solbench/misuse/misuse.hpp"

namespace solbench::cli {

inline constexpr int kReportSchema = 1;

struct Finding {
  enum class Kind { usage, misuse };
  Kind kind = Kind::usage;
  std::string feature;   // EH feature used, or required for a misuse
  std::string category;  // usage category or misuse category
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::string snippet;
  bool suppressed_by_version = false;
  std::string contract;
  std::string function;

  friend bool operator==(const Finding&, const Finding&) = default;
};

[[nodiscard]] std::string_view to_string(Finding::Kind k);

struct Diagnostic {
  std::string file;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ScanReport {
  std::string tool_version;
  std::vector<std::string> inputs;
  std::vector<Finding> findings;  // ordered by (file, line, col)
  misuse::Tally summary{};
  std::vector<Diagnostic> diagnostics;

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

struct ScanOptions {
  bool misuses_only = false;
  bool usages_only = false;
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// `.sol` files named directly or found under directories, sorted and unique.
/// Throws std::invalid_argument for a path that does not exist.
[[nodiscard]] std::vector<std::filesystem::path> collect_inputs(const std::vector<std::filesystem::path>& paths);

/// Report for one file's text; `file` is used as the finding location.
[[nodiscard]] ScanReport scan_source(const std::string& file, std::string_view text, const ScanOptions& options = {});

/// Files are read and analyzed in parallel; unreadable files become diagnostics.
[[nodiscard]] ScanReport scan_files(const std::vector<std::filesystem::path>& files, const ScanOptions& options = {});

/// Union of two reports over disjoint inputs, re-sorted.
[[nodiscard]] ScanReport merge_reports(const ScanReport& a, const ScanReport& b);

[[nodiscard]] std::size_t unsuppressed_misuses(const ScanReport& r);

[[nodiscard]] nlohmann::json to_json(const ScanReport& r);
[[nodiscard]] std::string to_csv(const ScanReport& r);
[[nodiscard]] std::string to_text(const ScanReport& r);

}  // namespace solbench::cli
