#include "solbench/corpus/explorer.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <thread>

#include <json.hpp>

namespace solbench::corpus {

void BlockRange::validate() const {
  if (start_block > end_block) throw std::invalid_argument("block range: start > end");
}

void Pacing::wait(std::chrono::nanoseconds d) const {
  if (d <= std::chrono::nanoseconds::zero()) return;
  if (sleep) {
    sleep(d);
  } else {
    std::this_thread::sleep_for(d);
  }
}

RateLimiter::RateLimiter(double rate, double burst, Pacing pacing)
    : rate_(rate), burst_(std::max(burst, 1.0)), tokens_(std::max(burst, 1.0)), pacing_(std::move(pacing)) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate limit must be positive");
  last_ = pacing_.now();
}

void RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  for (;;) {
    const auto now = pacing_.now();
    const std::chrono::duration<double> elapsed = now - last_;
    last_ = now;
    tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const std::chrono::duration<double> missing((1.0 - tokens_) / rate_);
    pacing_.wait(std::chrono::duration_cast<std::chrono::nanoseconds>(missing) + std::chrono::nanoseconds(1));
  }
}

bool is_well_formed_address(std::string_view a) {
  if (a.size() != 42 || !(a.starts_with("0x") || a.starts_with("0X"))) return false;
  return std::all_of(a.begin() + 2, a.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_solidity_path(std::string_view p) { return p.ends_with(".sol"); }

}  // namespace

std::vector<AddressEntry> list_contract_addresses(ExplorerClient& client, const BlockRange& range,
                                                  const RetryPolicy& policy, const Pacing& pacing) {
  range.validate();
  auto raw = with_retry(policy, pacing, [&] { return client.list_addresses(range); });
  std::vector<AddressEntry> out;
  std::set<std::string> seen;
  std::stable_sort(raw.begin(), raw.end(),
                   [](const AddressEntry& a, const AddressEntry& b) { return a.block_number < b.block_number; });
  for (auto& e : raw) {
    e.address = lower(e.address);
    if (e.block_number < range.start_block || e.block_number > range.end_block) continue;
    if (seen.insert(e.address).second) out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const AddressEntry& a, const AddressEntry& b) {
    return std::tie(a.block_number, a.address) < std::tie(b.block_number, b.address);
  });
  return out;
}

std::optional<std::vector<SourceFile>> fetch_source(ExplorerClient& client, const std::string& address,
                                                    const RetryPolicy& policy, const Pacing& pacing) {
  if (!is_well_formed_address(address)) throw std::invalid_argument("malformed address: " + address);
  auto result = with_retry(policy, pacing, [&] { return client.get_source(address); });
  if (!result.verified) return std::nullopt;
  std::vector<SourceFile> files;
  for (auto& f : result.files) {
    if (is_solidity_path(f.path)) files.push_back(std::move(f));
  }
  std::sort(files.begin(), files.end(), [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return files;
}

std::vector<SourceFile> split_explorer_source(std::string_view source_code, std::string_view contract_name) {
  std::string_view trimmed = source_code;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);

  if (trimmed.starts_with("{")) {
    std::string_view json_text = trimmed;
    if (trimmed.starts_with("{{") && trimmed.ends_with("}}")) json_text = trimmed.substr(1, trimmed.size() - 2);
    const auto doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_object()) {
      const auto& sources = doc.contains("sources") ? doc["sources"] : doc;
      std::vector<SourceFile> files;
      for (const auto& [path, entry] : sources.items()) {
        if (entry.is_object() && entry.contains("content") && entry["content"].is_string()) {
          files.push_back({path, entry["content"].get<std::string>()});
        }
      }
      if (!files.empty()) return files;
    }
  }
  if (trimmed.empty()) return {};
  std::string name = contract_name.empty() ? std::string("Contract") : std::string(contract_name);
  return {SourceFile{name + ".sol", std::string(source_code)}};
}

}  // namespace solbench::corpus
