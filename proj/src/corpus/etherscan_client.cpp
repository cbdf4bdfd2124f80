#include "solbench/corpus/etherscan_client.hpp"

#include <httplib.h>

#include <cstdio>
#include <json.hpp>
#include <regex>

namespace solbench::corpus {

using nlohmann::json;

namespace {

struct BaseUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // "/api"
};

BaseUrl split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw std::invalid_argument("invalid API base URL: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t from_hex(const json& v) {
  if (!v.is_string()) return 0;
  return std::stoull(v.get<std::string>(), nullptr, 16);
}

bool mentions(const json& v, std::string_view needle) {
  if (!v.is_string()) return false;
  std::string s = v.get<std::string>();
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s.find(needle) != std::string::npos;
}

// Error envelopes: {"status":"0","message":"NOTOK","result":"Max rate limit reached"} and
// JSON-RPC style {"error":{...}} / {"result":"Invalid API Key"}.
void check_envelope(const json& doc) {
  const json& result = doc.contains("result") ? doc["result"] : json();
  const json& message = doc.contains("message") ? doc["message"] : json();
  if (mentions(result, "rate limit") || mentions(message, "rate limit")) throw RateLimitError(result.dump());
  if (mentions(result, "api key") || mentions(message, "api key")) throw AuthError(result.dump());
  if (doc.contains("error")) throw TransportError("explorer error: " + doc["error"].dump());
}

}  // namespace

struct EtherscanClient::Impl {
  EtherscanConfig config;
  BaseUrl base;
  httplib::Client http;
  RateLimiter limiter;

  explicit Impl(EtherscanConfig c)
      : config(std::move(c)),
        base(split_url(config.base_url)),
        http(base.origin),
        limiter(config.rate_limit, 1.0, config.pacing) {
    http.set_connection_timeout(config.timeout);
    http.set_read_timeout(config.timeout);
    http.set_follow_location(true);
  }

  json get_once(httplib::Params params) {
    limiter.acquire();
    if (!config.api_key.empty()) params.emplace("apikey", config.api_key);
    auto res = http.Get(base.path, params, httplib::Headers{});
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status == 429) throw RateLimitError("HTTP 429");
    if (res->status == 401 || res->status == 403) throw AuthError("HTTP " + std::to_string(res->status));
    if (res->status >= 500) throw TransportError("HTTP " + std::to_string(res->status));
    if (res->status != 200) throw TransportError("unexpected HTTP " + std::to_string(res->status));
    auto doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw TransportError("malformed explorer response");
    check_envelope(doc);
    return doc;
  }

  json get(const httplib::Params& params) {
    return with_retry(config.retry, config.pacing, [&] { return get_once(params); });
  }
};

EtherscanClient::EtherscanClient(EtherscanConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

EtherscanClient::~EtherscanClient() = default;

std::vector<AddressEntry> EtherscanClient::list_addresses(const BlockRange& range) {
  range.validate();
  std::vector<AddressEntry> out;
  for (std::uint64_t b = range.start_block;; ++b) {
    const auto block = impl_->get({{"module", "proxy"}, {"action", "eth_getBlockByNumber"}, {"tag", hex(b)},
                                   {"boolean", "true"}});
    const auto& result = block["result"];
    if (result.is_object()) {
      const auto ts = static_cast<std::int64_t>(from_hex(result.value("timestamp", json())));
      for (const auto& tx : result.value("transactions", json::array())) {
        if (!tx.is_object() || !(tx.contains("to") && tx["to"].is_null())) continue;
        const auto receipt = impl_->get({{"module", "proxy"},
                                         {"action", "eth_getTransactionReceipt"},
                                         {"txhash", tx.value("hash", std::string())}});
        const auto& r = receipt["result"];
        if (r.is_object() && r.contains("contractAddress") && r["contractAddress"].is_string()) {
          out.push_back({r["contractAddress"].get<std::string>(), b, ts});
        }
      }
    }
    if (b == range.end_block) break;
  }
  return out;
}

FetchResult EtherscanClient::get_source(const std::string& address) {
  const auto doc = impl_->get({{"module", "contract"}, {"action", "getsourcecode"}, {"address", address}});
  FetchResult out;
  const auto& result = doc["result"];
  if (!result.is_array() || result.empty() || !result[0].is_object()) return out;
  const auto& entry = result[0];
  const auto source = entry.value("SourceCode", std::string());
  out.contract_name = entry.value("ContractName", std::string());
  out.compiler_version = entry.value("CompilerVersion", std::string());
  out.files = split_explorer_source(source, out.contract_name);
  out.verified = !out.files.empty();
  return out;
}

}  // namespace solbench::corpus
