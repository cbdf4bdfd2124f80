#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "solbench/corpus/explorer.hpp"

namespace solbench::corpus {

/// Offline explorer backed by a JSON document:
///
///   {"contracts": [{"address": "0x..", "block": 12, "timestamp": 1600000000,
///                   "verified": true, "contract_name": "Token",
///                   "files": {"Token.sol": "..."},       // or
///                   "source_code": "<explorer SourceCode field>",
///                   "throttle": 2}]}                     // fail this many get_source calls first
class FixtureClient : public ExplorerClient {
 public:
  explicit FixtureClient(const nlohmann::json& doc);
  /// Throws std::runtime_error when the file cannot be read or parsed.
  static FixtureClient from_file(const std::filesystem::path& path);

  std::vector<AddressEntry> list_addresses(const BlockRange& range) override;
  FetchResult get_source(const std::string& address) override;

  [[nodiscard]] std::size_t source_requests() const { return source_requests_; }

 private:
  struct Entry {
    AddressEntry where;
    FetchResult result;
    int throttle = 0;
  };
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> by_address_;
  std::size_t source_requests_ = 0;
};

}  // namespace solbench::corpus
