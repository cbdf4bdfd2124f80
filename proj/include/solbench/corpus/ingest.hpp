#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "solbench/corpus/explorer.hpp"
#include "solbench/corpus/store.hpp"

namespace solbench::corpus {

struct IngestOptions {
  RetryPolicy retry;
  Pacing pacing;
  /// Unix seconds used for `retrieved_at`.
  std::function<std::int64_t()> clock;
  std::size_t commit_every = 25;
};

struct FailedAddress {
  std::string address;
  std::string error;
};

struct IngestReport {
  std::size_t listed = 0;
  std::size_t added = 0;
  std::size_t aliases = 0;
  std::size_t known = 0;  // already in the store (or previously skipped)
  std::size_t skipped_empty = 0;
  std::size_t not_verified = 0;
  std::vector<FailedAddress> failed;

  /// Manifest delta: new entries plus new aliases.
  [[nodiscard]] std::size_t delta() const { return added + aliases; }
};

/// Lists creations in `range`, fetches every unknown address and stores it.
/// Transport failures on single addresses are reported and skipped; the
/// manifest is committed periodically and before returning or rethrowing.
/// Listing failures and AuthError propagate.
IngestReport ingest(ExplorerClient& client, const BlockRange& range, CorpusStore& store,
                    const IngestOptions& options = {});

}  // namespace solbench::corpus
