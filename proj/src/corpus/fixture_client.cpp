#include "solbench/corpus/fixture_client.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace solbench::corpus {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

FixtureClient::FixtureClient(const json& doc) {
  if (!doc.is_object() || !doc.contains("contracts") || !doc["contracts"].is_array()) {
    throw std::runtime_error("fixture: expected {\"contracts\": [...]}");
  }
  for (const auto& c : doc["contracts"]) {
    Entry e;
    e.where.address = lower(c.at("address").get<std::string>());
    e.where.block_number = c.value("block", std::uint64_t{0});
    if (c.contains("timestamp") && c["timestamp"].is_number_integer()) e.where.block_timestamp = c["timestamp"].get<std::int64_t>();
    e.result.contract_name = c.value("contract_name", std::string());
    e.result.compiler_version = c.value("compiler_version", std::string());
    if (c.contains("files") && c["files"].is_object()) {
      for (const auto& [path, text] : c["files"].items()) e.result.files.push_back({path, text.get<std::string>()});
    } else if (c.contains("source_code")) {
      e.result.files = split_explorer_source(c["source_code"].get<std::string>(), e.result.contract_name);
    }
    e.result.verified = c.value("verified", true);
    e.throttle = c.value("throttle", 0);
    by_address_[e.where.address] = entries_.size();
    entries_.push_back(std::move(e));
  }
}

FixtureClient FixtureClient::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read fixture " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("fixture is not valid JSON: " + path.string());
  return FixtureClient(doc);
}

std::vector<AddressEntry> FixtureClient::list_addresses(const BlockRange& range) {
  range.validate();
  std::vector<AddressEntry> out;
  for (const auto& e : entries_) {
    if (e.where.block_number >= range.start_block && e.where.block_number <= range.end_block) out.push_back(e.where);
  }
  return out;
}

FetchResult FixtureClient::get_source(const std::string& address) {
  ++source_requests_;
  auto it = by_address_.find(lower(address));
  if (it == by_address_.end()) return {};
  auto& e = entries_[it->second];
  if (e.throttle > 0) {
    --e.throttle;
    throw RateLimitError("fixture throttle");
  }
  return e.result;
}

}  // namespace solbench::corpus
