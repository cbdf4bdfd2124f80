#include "solbench/corpus/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include "solbench/frontend/parser.hpp"

namespace solbench::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view to_string(CorpusStore::SkipReason r) {
  return r == CorpusStore::SkipReason::empty ? "empty" : "not_verified";
}

}  // namespace

ContractRecord make_record(std::string address, std::vector<SourceFile> files, std::uint64_t block,
                           std::optional<std::int64_t> block_timestamp, std::int64_t retrieved_at,
                           std::string contract_name) {
  ContractRecord r;
  r.address = std::move(address);
  r.contract_name = std::move(contract_name);
  r.block_number = block;
  r.block_timestamp = block_timestamp;
  r.retrieved_at = retrieved_at;
  std::optional<version::VersionRange> range;
  for (const auto& f : files) {
    if (auto fr = frontend::effective_range(frontend::parse_source(f.text))) {
      range = range ? range->intersect(*fr) : *fr;
    }
  }
  if (range) r.pragma = range->to_string();
  r.files = std::move(files);
  r.content_hash = content_hash(r.files);
  return r;
}

std::optional<version::VersionRange> ManifestEntry::pragma_range() const {
  if (!pragma) return std::nullopt;
  try {
    return version::parse_range(*pragma);
  } catch (const version::VersionError&) {
    return std::nullopt;
  }
}

std::string sanitize_relative_path(std::string_view path) {
  std::string p(path);
  std::replace(p.begin(), p.end(), '\\', '/');
  std::string out;
  std::stringstream ss(p);
  std::string seg;
  while (std::getline(ss, seg, '/')) {
    if (seg.empty() || seg == "." || seg == "..") continue;
    if (!out.empty()) out += '/';
    out += seg;
  }
  return out.empty() ? std::string("source.sol") : out;
}

void write_file_atomic(const fs::path& path, std::string_view data) {
  static std::atomic<unsigned> counter{0};
  fs::create_directories(path.parent_path());
  const auto tmp = path.parent_path() /
                   (path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

json entry_to_json(const ManifestEntry& e) {
  json files = json::array();
  for (const auto& f : e.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
  json j = {{"hash", e.hash},
            {"address", e.address},
            {"aliases", e.aliases},
            {"contract_name", e.contract_name},
            {"block", e.block_number},
            {"retrieved_at", e.retrieved_at},
            {"files", files}};
  j["timestamp"] = e.block_timestamp ? json(*e.block_timestamp) : json(nullptr);
  j["pragma"] = e.pragma ? json(*e.pragma) : json(nullptr);
  return j;
}

ManifestEntry entry_from_json(const json& j) {
  ManifestEntry e;
  e.hash = j.at("hash").get<std::string>();
  e.address = j.at("address").get<std::string>();
  e.aliases = j.value("aliases", std::vector<std::string>{});
  e.contract_name = j.value("contract_name", std::string());
  e.block_number = j.value("block", std::uint64_t{0});
  e.retrieved_at = j.value("retrieved_at", std::int64_t{0});
  if (j.contains("timestamp") && j["timestamp"].is_number_integer()) e.block_timestamp = j["timestamp"].get<std::int64_t>();
  if (j.contains("pragma") && j["pragma"].is_string()) e.pragma = j["pragma"].get<std::string>();
  for (const auto& f : j.value("files", json::array())) {
    e.files.push_back({f.at("path").get<std::string>(), f.value("sha256", std::string())});
  }
  return e;
}

CorpusStore CorpusStore::open(const fs::path& root, Mode mode) {
  CorpusStore s;
  s.root_ = root;
  s.mode_ = mode;
  std::error_code ec;
  if (mode == Mode::write) {
    fs::create_directories(root / "contracts", ec);
    if (ec) throw std::runtime_error("cannot create " + root.string() + ": " + ec.message());
  } else if (!fs::is_directory(root)) {
    throw std::runtime_error("no corpus at " + root.string());
  }
  const auto lock_path = root / ".lock";
  s.lock_fd_ = ::open(lock_path.c_str(), mode == Mode::write ? (O_RDWR | O_CREAT) : O_RDONLY, 0644);
  if (s.lock_fd_ >= 0 && ::flock(s.lock_fd_, mode == Mode::write ? LOCK_EX : LOCK_SH) != 0) {
    ::close(s.lock_fd_);
    s.lock_fd_ = -1;
    throw std::runtime_error("cannot lock " + lock_path.string());
  }
  if (s.lock_fd_ < 0 && mode == Mode::write) throw std::runtime_error("cannot open " + lock_path.string());
  s.load();
  if (mode == Mode::read && s.lock_fd_ >= 0) {
    ::flock(s.lock_fd_, LOCK_UN);
    ::close(s.lock_fd_);
    s.lock_fd_ = -1;
  }
  return s;
}

CorpusStore::CorpusStore(CorpusStore&& o) noexcept
    : root_(std::move(o.root_)),
      mode_(o.mode_),
      lock_fd_(std::exchange(o.lock_fd_, -1)),
      entries_(std::move(o.entries_)),
      by_hash_(std::move(o.by_hash_)),
      by_address_(std::move(o.by_address_)),
      skipped_(std::move(o.skipped_)) {}

CorpusStore& CorpusStore::operator=(CorpusStore&& o) noexcept {
  if (this != &o) {
    if (lock_fd_ >= 0) ::close(lock_fd_);
    root_ = std::move(o.root_);
    mode_ = o.mode_;
    lock_fd_ = std::exchange(o.lock_fd_, -1);
    entries_ = std::move(o.entries_);
    by_hash_ = std::move(o.by_hash_);
    by_address_ = std::move(o.by_address_);
    skipped_ = std::move(o.skipped_);
  }
  return *this;
}

CorpusStore::~CorpusStore() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

void CorpusStore::load() {
  const auto path = root_ / "manifest.json";
  if (!fs::exists(path)) return;
  const auto doc = json::parse(read_all(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw std::runtime_error("corrupt manifest: " + path.string());
  if (doc.value("version", 0) != kManifestVersion) throw std::runtime_error("unsupported manifest version");
  for (const auto& j : doc.value("entries", json::array())) {
    auto e = entry_from_json(j);
    const auto idx = entries_.size();
    by_hash_[e.hash] = idx;
    by_address_[e.address] = idx;
    for (const auto& a : e.aliases) by_address_[a] = idx;
    entries_.push_back(std::move(e));
  }
  for (const auto& s : doc.value("skipped", json::array())) {
    skipped_[s.at("address").get<std::string>()] =
        s.value("reason", std::string()) == "empty" ? SkipReason::empty : SkipReason::not_verified;
  }
}

const ManifestEntry* CorpusStore::find_hash(const std::string& hash) const {
  auto it = by_hash_.find(hash);
  return it == by_hash_.end() ? nullptr : &entries_[it->second];
}

bool CorpusStore::knows_address(const std::string& address) const {
  return by_address_.contains(address) || skipped_.contains(address);
}

ManifestCounters CorpusStore::counters() const {
  ManifestCounters c;
  std::set<std::string> unique;
  for (const auto& e : entries_) {
    c.contracts += 1 + e.aliases.size();
    c.duplicates += e.aliases.size();
    c.files += e.files.size() * (1 + e.aliases.size());
    for (const auto& f : e.files) unique.insert(f.sha256);
  }
  c.unique_files = unique.size();
  for (const auto& [addr, reason] : skipped_) {
    (reason == SkipReason::empty ? c.skipped_empty : c.not_verified) += 1;
  }
  return c;
}

fs::path CorpusStore::entry_dir(const std::string& hash) const { return root_ / "contracts" / hash; }

void CorpusStore::write_record(const ManifestEntry& e) const {
  write_file_atomic(entry_dir(e.hash) / "record.json", entry_to_json(e).dump(2) + "\n");
}

CorpusStore::AddOutcome CorpusStore::add(const ContractRecord& record) {
  if (mode_ != Mode::write) throw std::logic_error("corpus opened read-only");
  if (knows_address(record.address)) return AddOutcome::known;
  if (auto it = by_hash_.find(record.content_hash); it != by_hash_.end()) {
    auto& e = entries_[it->second];
    e.aliases.push_back(record.address);
    by_address_[record.address] = it->second;
    write_record(e);
    return AddOutcome::alias;
  }
  ManifestEntry e;
  e.hash = record.content_hash;
  e.address = record.address;
  e.contract_name = record.contract_name;
  e.block_number = record.block_number;
  e.block_timestamp = record.block_timestamp;
  e.retrieved_at = record.retrieved_at;
  e.pragma = record.pragma;
  const auto dir = entry_dir(e.hash);
  std::set<std::string> used;
  for (const auto& f : record.files) {
    auto rel = sanitize_relative_path(f.path);
    while (!used.insert(rel).second) rel = "_" + rel;
    write_file_atomic(dir / "src" / rel, f.text);
    e.files.push_back({rel, file_hash(f.text)});
  }
  write_record(e);
  const auto idx = entries_.size();
  by_hash_[e.hash] = idx;
  by_address_[e.address] = idx;
  entries_.push_back(std::move(e));
  return AddOutcome::added;
}

void CorpusStore::record_skip(const std::string& address, SkipReason reason) {
  if (mode_ != Mode::write) throw std::logic_error("corpus opened read-only");
  if (!knows_address(address)) skipped_[address] = reason;
}

json CorpusStore::manifest_json() const {
  json entries = json::array();
  for (const auto& e : entries_) entries.push_back(entry_to_json(e));
  json skipped = json::array();
  for (const auto& [addr, reason] : skipped_) skipped.push_back({{"address", addr}, {"reason", to_string(reason)}});
  const auto c = counters();
  return {{"version", kManifestVersion},
          {"entries", entries},
          {"skipped", skipped},
          {"counters",
           {{"contracts", c.contracts},
            {"files", c.files},
            {"unique_files", c.unique_files},
            {"duplicates", c.duplicates},
            {"skipped_empty", c.skipped_empty},
            {"not_verified", c.not_verified}}}};
}

void CorpusStore::commit() {
  if (mode_ != Mode::write) throw std::logic_error("corpus opened read-only");
  write_file_atomic(root_ / "manifest.json", manifest_json().dump(2) + "\n");
}

std::vector<SourceFile> CorpusStore::load_files(const ManifestEntry& entry) const {
  std::vector<SourceFile> out;
  for (const auto& f : entry.files) out.push_back({f.path, read_all(entry_dir(entry.hash) / "src" / f.path)});
  return out;
}

}  // namespace solbench::corpus
