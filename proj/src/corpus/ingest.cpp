#include "solbench/corpus/ingest.hpp"

#include <algorithm>
#include <chrono>

namespace solbench::corpus {

namespace {

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

bool all_blank(const std::vector<SourceFile>& files) {
  return std::all_of(files.begin(), files.end(), [](const SourceFile& f) { return normalize_for_hash(f.text).empty(); });
}

}  // namespace

IngestReport ingest(ExplorerClient& client, const BlockRange& range, CorpusStore& store,
                    const IngestOptions& options) {
  IngestReport report;
  const auto addresses = list_contract_addresses(client, range, options.retry, options.pacing);
  report.listed = addresses.size();
  std::size_t pending = 0;
  auto maybe_commit = [&] {
    if (++pending >= std::max<std::size_t>(options.commit_every, 1)) {
      store.commit();
      pending = 0;
    }
  };

  try {
    for (const auto& a : addresses) {
      if (store.knows_address(a.address)) {
        ++report.known;
        continue;
      }
      std::optional<std::vector<SourceFile>> files;
      try {
        files = fetch_source(client, a.address, options.retry, options.pacing);
      } catch (const AuthError&) {
        throw;
      } catch (const std::exception& e) {
        report.failed.push_back({a.address, e.what()});
        continue;
      }
      if (!files) {
        store.record_skip(a.address, CorpusStore::SkipReason::not_verified);
        ++report.not_verified;
      } else if (files->empty() || all_blank(*files)) {
        store.record_skip(a.address, CorpusStore::SkipReason::empty);
        ++report.skipped_empty;
      } else {
        const auto retrieved = options.clock ? options.clock() : unix_now();
        const auto record = make_record(a.address, std::move(*files), a.block_number, a.block_timestamp, retrieved);
        switch (store.add(record)) {
          case CorpusStore::AddOutcome::added: ++report.added; break;
          case CorpusStore::AddOutcome::alias: ++report.aliases; break;
          case CorpusStore::AddOutcome::known: ++report.known; break;
        }
      }
      maybe_commit();
    }
  } catch (...) {
    store.commit();
    throw;
  }
  store.commit();
  return report;
}

}  // namespace solbench::corpus
