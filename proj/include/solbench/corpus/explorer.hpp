#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solbench/corpus/content_hash.hpp"

namespace solbench::corpus {

struct BlockRange {
  std::uint64_t start_block = 0;
  std::uint64_t end_block = 0;

  /// Throws std::invalid_argument when start > end.
  void validate() const;
};

struct AddressEntry {
  std::string address;  // 0x-prefixed, lowercase
  std::uint64_t block_number = 0;
  std::optional<std::int64_t> block_timestamp;  // unix seconds

  friend bool operator==(const AddressEntry&, const AddressEntry&) = default;
};

struct FetchResult {
  bool verified = false;
  std::string contract_name;
  std::string compiler_version;
  std::vector<SourceFile> files;
};

class ExplorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Network failure or 5xx; retried.
class TransportError : public ExplorerError {
 public:
  using ExplorerError::ExplorerError;
};
/// Throttled by the server; retried after backoff.
class RateLimitError : public ExplorerError {
 public:
  using ExplorerError::ExplorerError;
};
/// Missing or rejected API key; never retried.
class AuthError : public ExplorerError {
 public:
  using ExplorerError::ExplorerError;
};

class ExplorerClient {
 public:
  virtual ~ExplorerClient() = default;
  /// Contract creations in the range, in any order.
  virtual std::vector<AddressEntry> list_addresses(const BlockRange& range) = 0;
  virtual FetchResult get_source(const std::string& address) = 0;
};

/// Time source and sleeper, replaceable in tests.
struct Pacing {
  std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
  std::function<void(std::chrono::nanoseconds)> sleep;  // defaults to std::this_thread::sleep_for

  void wait(std::chrono::nanoseconds d) const;
};

/// Token bucket: `rate` tokens per second, at most `burst` stored.
class RateLimiter {
 public:
  explicit RateLimiter(double rate = 5.0, double burst = 1.0, Pacing pacing = {});
  void acquire();
  [[nodiscard]] double rate() const { return rate_; }

 private:
  double rate_;
  double burst_;
  double tokens_;
  Pacing pacing_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

/// Runs `op`, retrying TransportError / RateLimitError with exponential backoff.
/// AuthError and anything else propagate at once.
template <class F>
auto with_retry(const RetryPolicy& policy, const Pacing& pacing, F&& op) -> decltype(op()) {
  auto backoff = std::chrono::duration<double, std::milli>(policy.initial_backoff);
  for (int attempt = 1;; ++attempt) {
    try {
      return op();
    } catch (const AuthError&) {
      throw;
    } catch (const ExplorerError&) {
      if (attempt >= policy.max_attempts) throw;
    }
    pacing.wait(std::chrono::duration_cast<std::chrono::nanoseconds>(backoff));
    backoff = std::min(backoff * policy.multiplier, std::chrono::duration<double, std::milli>(policy.max_backoff));
  }
}

/// 0x followed by 40 hex digits.
[[nodiscard]] bool is_well_formed_address(std::string_view address);

/// Deduplicated (first occurrence wins), sorted by block then address.
[[nodiscard]] std::vector<AddressEntry> list_contract_addresses(ExplorerClient& client, const BlockRange& range,
                                                                const RetryPolicy& policy = {},
                                                                const Pacing& pacing = {});

/// Source files of a verified contract, or nullopt when the address has no
/// public source. Non-Solidity entries of multi-file submissions (metadata,
/// settings) are dropped. Throws std::invalid_argument on a malformed address.
[[nodiscard]] std::optional<std::vector<SourceFile>> fetch_source(ExplorerClient& client, const std::string& address,
                                                                  const RetryPolicy& policy = {},
                                                                  const Pacing& pacing = {});

/// Splits an explorer `SourceCode` field: plain text, `{sources: {...}}` or the
/// double-brace standard-JSON wrapper. Plain text is stored as `<name>.sol`.
[[nodiscard]] std::vector<SourceFile> split_explorer_source(std::string_view source_code,
                                                            std::string_view contract_name);

}  // namespace solbench::corpus
