#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "solbench/corpus/explorer.hpp"

namespace solbench::corpus {

struct EtherscanConfig {
  std::string base_url = "https://api.etherscan.io/api";
  std::string api_key;
  double rate_limit = 5.0;  // requests per second
  std::chrono::seconds timeout{30};
  /// Applied to each HTTP request.
  RetryPolicy retry{3, std::chrono::milliseconds(1000), 2.0, std::chrono::milliseconds(30000)};
  Pacing pacing;
};

/// Etherscan-compatible HTTP client. Creations are found by scanning blocks
/// (`eth_getBlockByNumber`) for transactions without a recipient and reading
/// the receipt's `contractAddress`; sources come from `getsourcecode`.
class EtherscanClient : public ExplorerClient {
 public:
  explicit EtherscanClient(EtherscanConfig config);
  ~EtherscanClient() override;

  std::vector<AddressEntry> list_addresses(const BlockRange& range) override;
  FetchResult get_source(const std::string& address) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace solbench::corpus
