#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "solbench/corpus/content_hash.hpp"
#include "solbench/version/solc_version.hpp"

namespace solbench::corpus {

struct ContractRecord {
  std::string address;
  std::string contract_name;
  std::vector<SourceFile> files;
  /// Conjunction of the files' pragma ranges; nullopt when none parses.
  std::optional<std::string> pragma;
  std::string content_hash;
  std::int64_t retrieved_at = 0;  // unix seconds
  std::uint64_t block_number = 0;
  std::optional<std::int64_t> block_timestamp;
};

/// Builds a record from fetched files: computes the digest and the pragma range.
[[nodiscard]] ContractRecord make_record(std::string address, std::vector<SourceFile> files, std::uint64_t block,
                                         std::optional<std::int64_t> block_timestamp, std::int64_t retrieved_at,
                                         std::string contract_name = {});

struct StoredFile {
  std::string path;    // relative to the entry's src/ directory
  std::string sha256;  // file_hash of the text
};

struct ManifestEntry {
  std::string hash;
  std::string address;
  std::vector<std::string> aliases;
  std::string contract_name;
  std::uint64_t block_number = 0;
  std::optional<std::int64_t> block_timestamp;
  std::int64_t retrieved_at = 0;
  std::optional<std::string> pragma;
  std::vector<StoredFile> files;

  [[nodiscard]] std::optional<version::VersionRange> pragma_range() const;
  /// Block timestamp when known, else retrieval time.
  [[nodiscard]] std::int64_t dated_at() const { return block_timestamp.value_or(retrieved_at); }
  [[nodiscard]] bool dated_by_block() const { return block_timestamp.has_value(); }
};

struct ManifestCounters {
  std::size_t contracts = 0;     // unique entries + aliases
  std::size_t files = 0;         // files of every contract, aliases included
  std::size_t unique_files = 0;  // distinct file digests
  std::size_t duplicates = 0;    // aliases
  std::size_t skipped_empty = 0;
  std::size_t not_verified = 0;

  friend bool operator==(const ManifestCounters&, const ManifestCounters&) = default;
};

/// Directory layout:
///   manifest.json                    index of every entry
///   contracts/<hash>/record.json     metadata of one entry (aliases included)
///   contracts/<hash>/src/<path>      files as fetched, unnormalized
///   .lock                            flock(2) target
///
/// A writable store holds an exclusive lock for its lifetime, so concurrent
/// ingests serialize; readers take a shared lock while loading.
class CorpusStore {
 public:
  enum class Mode { read, write };
  enum class AddOutcome { added, alias, known };

  /// Throws std::runtime_error on I/O failure or a corrupt manifest.
  static CorpusStore open(const std::filesystem::path& root, Mode mode = Mode::write);

  CorpusStore(CorpusStore&&) noexcept;
  CorpusStore& operator=(CorpusStore&&) noexcept;
  ~CorpusStore();

  [[nodiscard]] const std::filesystem::path& root() const { return root_; }
  [[nodiscard]] const std::vector<ManifestEntry>& entries() const { return entries_; }
  [[nodiscard]] const ManifestEntry* find_hash(const std::string& hash) const;
  /// Canonical address, alias or recorded skip.
  [[nodiscard]] bool knows_address(const std::string& address) const;
  [[nodiscard]] ManifestCounters counters() const;

  /// Writes the entry's files (new hash) or records an alias. Manifest changes
  /// become durable on commit().
  AddOutcome add(const ContractRecord& record);
  enum class SkipReason { empty, not_verified };
  void record_skip(const std::string& address, SkipReason reason);
  /// Atomically replaces manifest.json.
  void commit();

  [[nodiscard]] std::vector<SourceFile> load_files(const ManifestEntry& entry) const;
  [[nodiscard]] std::filesystem::path entry_dir(const std::string& hash) const;

  [[nodiscard]] nlohmann::json manifest_json() const;

 private:
  CorpusStore() = default;
  void load();
  void write_record(const ManifestEntry& e) const;

  std::filesystem::path root_;
  Mode mode_ = Mode::read;
  int lock_fd_ = -1;
  std::vector<ManifestEntry> entries_;
  std::map<std::string, std::size_t> by_hash_;
  std::map<std::string, std::size_t> by_address_;  // canonical and alias addresses
  std::map<std::string, SkipReason> skipped_;
};

[[nodiscard]] nlohmann::json entry_to_json(const ManifestEntry& e);
[[nodiscard]] ManifestEntry entry_from_json(const nlohmann::json& j);

/// Relative path safe to create under a directory: no root, no `..`, `/` separators.
[[nodiscard]] std::string sanitize_relative_path(std::string_view path);

/// Writes `data` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace solbench::corpus
