#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "solbench/corpus/content_hash.hpp"
#include "solbench/corpus/etherscan_client.hpp"
#include "solbench/corpus/explorer.hpp"
#include "solbench/corpus/fixture_client.hpp"
#include "solbench/corpus/ingest.hpp"
#include "solbench/corpus/stats.hpp"
#include "solbench/corpus/store.hpp"
#include "test_support.hpp"

using namespace solbench::corpus;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> n{0};
    std::random_device rd;
    path = fs::temp_directory_path() / ("solbench_corpus_" + std::to_string(rd()) + "_" + std::to_string(n++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

Pacing no_sleep(std::vector<std::chrono::nanoseconds>* log = nullptr) {
  Pacing p;
  p.sleep = [log](std::chrono::nanoseconds d) {
    if (log) log->push_back(d);
  };
  return p;
}

IngestOptions fast_options() {
  IngestOptions o;
  o.pacing = no_sleep();
  o.clock = [] { return std::int64_t{1700000000}; };
  return o;
}

FixtureClient five() { return FixtureClient::from_file(solbench::testing::fixture_path("ingest/five_contracts.json")); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ContentHash, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ContentHash, Normalization) {
  EXPECT_EQ(normalize_for_hash("\xEF\xBB\xBF" "a  \r\nb\t\rc\n\n\n"), "a\nb\nc\n");
  EXPECT_EQ(normalize_for_hash("a"), "a\n");
  EXPECT_EQ(normalize_for_hash("  \n \n"), "");
  EXPECT_EQ(normalize_for_hash("  x"), "  x\n");
}

TEST(ContentHash, OrderAndWhitespaceInsensitive) {
  const std::vector<SourceFile> a = {{"A.sol", "contract A {}\n"}, {"B.sol", "contract B {}\n"}};
  const std::vector<SourceFile> b = {{"B.sol", "contract B {}   \r\n\r\n"}, {"A.sol", "contract A {}"}};
  EXPECT_EQ(content_hash(a), content_hash(b));
  const std::vector<SourceFile> c = {{"A.sol", "contract A {}\n"}, {"B.sol", "contract C {}\n"}};
  EXPECT_NE(content_hash(a), content_hash(c));
  EXPECT_EQ(content_hash(a).size(), 64u);
  EXPECT_THROW((void)content_hash(std::vector<SourceFile>{}), EmptyFileSetError);
}

TEST(Explorer, SplitsSourceShapes) {
  const auto plain = split_explorer_source("contract A {}", "A");
  ASSERT_EQ(plain.size(), 1u);
  EXPECT_EQ(plain[0].path, "A.sol");

  const json std_json = {{"language", "Solidity"},
                         {"sources", {{"a/X.sol", {{"content", "x"}}}, {"b/Y.sol", {{"content", "y"}}},
                                      {"c/Z.sol", {{"content", "z"}}}}},
                         {"settings", {{"optimizer", {{"enabled", true}}}}}};
  const auto wrapped = split_explorer_source("{" + std_json.dump() + "}", "X");
  ASSERT_EQ(wrapped.size(), 3u);
  EXPECT_EQ(wrapped[0].path, "a/X.sol");
  EXPECT_EQ(wrapped[2].text, "z");

  const json bare = {{"Q.sol", {{"content", "q"}}}};
  EXPECT_EQ(split_explorer_source(bare.dump(), "Q").at(0).path, "Q.sol");
  EXPECT_TRUE(split_explorer_source("", "A").empty());
}

TEST(Explorer, RateLimiterPacesRequests) {
  auto now = std::chrono::steady_clock::time_point{};
  Pacing p;
  p.now = [&] { return now; };
  p.sleep = [&](std::chrono::nanoseconds d) { now += d; };
  RateLimiter limiter(5.0, 1.0, p);
  for (int i = 0; i < 11; ++i) limiter.acquire();
  const double elapsed = std::chrono::duration<double>(now.time_since_epoch()).count();
  EXPECT_NEAR(elapsed, 2.0, 1e-3);
}

TEST(Explorer, RetriesThrottledRequestsWithBackoff) {
  auto client = five();
  std::vector<std::chrono::nanoseconds> sleeps;
  const auto files = fetch_source(client, "0x00000000000000000000000000000000000000a3", RetryPolicy{}, no_sleep(&sleeps));
  ASSERT_TRUE(files.has_value());
  EXPECT_EQ(files->size(), 1u);
  EXPECT_EQ(client.source_requests(), 3u);
  ASSERT_EQ(sleeps.size(), 2u);
  EXPECT_EQ(sleeps[0], std::chrono::milliseconds(500));
  EXPECT_EQ(sleeps[1], std::chrono::milliseconds(1000));
}

TEST(Explorer, AuthErrorsAreNotRetried) {
  int calls = 0;
  EXPECT_THROW(with_retry(RetryPolicy{}, no_sleep(), [&]() -> int {
                 ++calls;
                 throw AuthError("bad key");
               }),
               AuthError);
  EXPECT_EQ(calls, 1);
  calls = 0;
  EXPECT_THROW(with_retry(RetryPolicy{3}, no_sleep(), [&]() -> int {
                 ++calls;
                 throw TransportError("down");
               }),
               TransportError);
  EXPECT_EQ(calls, 3);
}

TEST(Explorer, ListsAddressesInBlockOrder) {
  auto client = five();
  const auto all = list_contract_addresses(client, {0, 1000});
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all[1].address, "0x00000000000000000000000000000000000000a2");
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end(),
                             [](const AddressEntry& a, const AddressEntry& b) { return a.block_number < b.block_number; }));
  EXPECT_EQ(list_contract_addresses(client, {100, 110}).size(), 3u);
  EXPECT_TRUE(list_contract_addresses(client, {101, 101}).empty());
  EXPECT_THROW((void)list_contract_addresses(client, {5, 4}), std::invalid_argument);
}

TEST(Explorer, FetchShapes) {
  auto client = five();
  const auto multi = fetch_source(client, "0x00000000000000000000000000000000000000a5", RetryPolicy{}, no_sleep());
  ASSERT_TRUE(multi.has_value());
  ASSERT_EQ(multi->size(), 3u);
  EXPECT_EQ((*multi)[0].path, "contracts/Base.sol");
  EXPECT_FALSE(fetch_source(client, "0x00000000000000000000000000000000000000ff").has_value());
  EXPECT_THROW((void)fetch_source(client, "0x123"), std::invalid_argument);
}

TEST(Ingest, DeduplicatesAndIsIdempotent) {
  TempDir dir;
  auto client = five();
  {
    auto store = CorpusStore::open(dir.path);
    const auto r = ingest(client, {0, 1000}, store, fast_options());
    EXPECT_EQ(r.listed, 5u);
    EXPECT_EQ(r.added, 4u);
    EXPECT_EQ(r.aliases, 1u);
    EXPECT_TRUE(r.failed.empty());
    EXPECT_EQ(store.entries().size(), 4u);
    const auto c = store.counters();
    EXPECT_EQ(c.contracts, 5u);
    EXPECT_EQ(c.duplicates, 1u);
    EXPECT_EQ(c.contracts, store.entries().size() + c.duplicates);
    EXPECT_EQ(c.files, 7u);  // 1 + 1 (alias) + 1 + 1 + 3
    EXPECT_EQ(c.unique_files, 6u);
  }
  {
    auto store = CorpusStore::open(dir.path);
    const auto before = slurp(dir.path / "manifest.json");
    const auto r = ingest(client, {0, 1000}, store, fast_options());
    EXPECT_EQ(r.delta(), 0u);
    EXPECT_EQ(r.known, 5u);
    EXPECT_EQ(slurp(dir.path / "manifest.json"), before);
  }
  const auto manifest = json::parse(slurp(dir.path / "manifest.json"));
  EXPECT_EQ(manifest["version"], 1);
  ASSERT_EQ(manifest["entries"].size(), 4u);
  EXPECT_EQ(manifest["entries"][0]["aliases"], json::array({"0x00000000000000000000000000000000000000a2"}));
  EXPECT_EQ(manifest["entries"][0]["pragma"], "^0.8.0");
  EXPECT_EQ(manifest["counters"]["duplicates"], 1);
}

TEST(Ingest, StoredFilesAreUnnormalized) {
  TempDir dir;
  auto client = five();
  auto store = CorpusStore::open(dir.path);
  (void)ingest(client, {0, 1000}, store, fast_options());
  const auto fixture = json::parse(slurp(solbench::testing::fixture_path("ingest/five_contracts.json")));
  const auto* e = &store.entries()[0];
  const auto files = store.load_files(*e);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].text, fixture["contracts"][0]["files"]["Token.sol"].get<std::string>());
  EXPECT_EQ(content_hash(files), e->hash);
  EXPECT_TRUE(fs::exists(store.entry_dir(e->hash) / "record.json"));
}

TEST(Ingest, SkipsEmptyAndUnverified) {
  TempDir dir;
  auto client = FixtureClient::from_file(solbench::testing::fixture_path("ingest/with_skips.json"));
  auto store = CorpusStore::open(dir.path);
  const auto r = ingest(client, {0, 1000}, store, fast_options());
  EXPECT_EQ(r.skipped_empty, 1u);
  EXPECT_EQ(r.not_verified, 1u);
  EXPECT_EQ(store.counters().skipped_empty, 1u);
  EXPECT_EQ(store.counters().not_verified, 1u);
  EXPECT_EQ(ingest(client, {0, 1000}, store, fast_options()).delta(), 0u);
  EXPECT_EQ(store.counters().skipped_empty, 1u);
}

namespace {

class FlakyClient : public ExplorerClient {
 public:
  explicit FlakyClient(FixtureClient inner) : inner_(std::move(inner)) {}
  std::vector<AddressEntry> list_addresses(const BlockRange& r) override { return inner_.list_addresses(r); }
  FetchResult get_source(const std::string& address) override {
    if (broken && address.ends_with("a4")) throw TransportError("connection reset");
    return inner_.get_source(address);
  }
  bool broken = true;

 private:
  FixtureClient inner_;
};

}  // namespace

TEST(Ingest, PartialFailureKeepsProgress) {
  TempDir dir;
  FlakyClient client(five());
  auto opts = fast_options();
  opts.retry.max_attempts = 3;
  {
    auto store = CorpusStore::open(dir.path);
    const auto r = ingest(client, {0, 1000}, store, opts);
    ASSERT_EQ(r.failed.size(), 1u);
    EXPECT_EQ(r.failed[0].address, "0x00000000000000000000000000000000000000a4");
    EXPECT_EQ(r.added, 3u);
  }
  client.broken = false;
  auto store = CorpusStore::open(dir.path);
  const auto r = ingest(client, {0, 1000}, store, opts);
  EXPECT_EQ(r.added, 1u);
  EXPECT_EQ(r.delta(), 1u);
  EXPECT_EQ(store.entries().size(), 4u);
}

TEST(Ingest, ConcurrentIngestsSerialize) {
  TempDir dir;
  std::vector<std::thread> threads;
  std::atomic<std::size_t> added{0}, aliases{0};
  for (int i = 0; i < 3; ++i) {
    threads.emplace_back([&] {
      auto client = five();
      auto store = CorpusStore::open(dir.path);
      const auto r = ingest(client, {0, 1000}, store, fast_options());
      added += r.added;
      aliases += r.aliases;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(added.load(), 4u);
  EXPECT_EQ(aliases.load(), 1u);
  const auto store = CorpusStore::open(dir.path, CorpusStore::Mode::read);
  EXPECT_EQ(store.entries().size(), 4u);
}

TEST(Stats, LocAndAverages) {
  TempDir dir;
  auto store = CorpusStore::open(dir.path);
  std::string ten, twenty;
  for (int i = 0; i < 10; ++i) ten += "// line " + std::to_string(i) + "\n\n";
  for (int i = 0; i < 20; ++i) twenty += "  // other " + std::to_string(i) + "\n   \n";
  (void)store.add(make_record("0x01", {{"A.sol", ten}}, 1, std::nullopt, 0));
  (void)store.add(make_record("0x02", {{"B.sol", twenty}}, 2, std::nullopt, 0));
  store.commit();
  const auto s = corpus_stats(store);
  EXPECT_EQ(s.contracts, 2u);
  EXPECT_EQ(s.loc, 30u);
  EXPECT_DOUBLE_EQ(s.avg_loc_per_file, 15.0);
  EXPECT_DOUBLE_EQ(s.avg_files_per_contract, 1.0);
  EXPECT_DOUBLE_EQ(s.median_files_per_contract, 1.0);
  EXPECT_EQ(count_loc("a\r\n\r\nb"), 2u);
}

TEST(Stats, CountsFunctionKindsAndEhShare) {
  TempDir dir;
  auto store = CorpusStore::open(dir.path);
  (void)store.add(make_record("0x01",
                              {{"A.sol", "contract A {\n  address o;\n  constructor() { o = msg.sender; }\n"
                                         "  modifier only() { require(msg.sender == o); _; }\n"
                                         "  function f() public only {}\n  function g() public {}\n}\n"}},
                              1, std::nullopt, 0));
  (void)store.add(make_record("0x02", {{"B.sol", "function h(uint a) pure { assert(a > 0); }\n"}}, 2, std::nullopt, 0));
  (void)store.add(make_record("0x03", {{"C.sol", "contract C { function k() public { revert(); } }\n"}}, 3, std::nullopt, 0));
  (void)store.add(make_record("0x04", {{"D.sol", "contract D { uint x; }\n"}}, 4, std::nullopt, 0));
  store.commit();
  const auto s = corpus_stats(store);
  EXPECT_EQ(s.functions, 4u);
  EXPECT_EQ(s.modifiers, 1u);
  EXPECT_EQ(s.constructors, 1u);
  EXPECT_DOUBLE_EQ(s.pct_with_eh, 75.0);
}

TEST(Stats, ManifestEqualsIndependentRescan) {
  TempDir dir;
  auto client = five();
  auto store = CorpusStore::open(dir.path);
  (void)ingest(client, {0, 1000}, store, fast_options());
  const auto a = corpus_stats(store);
  const auto b = rescan_stats(dir.path);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.contracts, 4u);
  EXPECT_EQ(a.source_files, 6u);
  EXPECT_EQ(a.unique_source_files, 6u);
  EXPECT_DOUBLE_EQ(a.median_files_per_contract, 1.0);
}

// Local stand-in for the explorer's HTTP API.
class FakeEtherscan : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/api", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  EtherscanConfig config() const {
    EtherscanConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/api";
    c.api_key = "KEY";
    c.rate_limit = 1000.0;
    c.pacing = no_sleep();
    return c;
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    ++requests;
    if (req.get_param_value("apikey") != "KEY") {
      res.set_content(R"({"status":"0","message":"NOTOK","result":"Invalid API Key"})", "application/json");
      return;
    }
    const auto action = req.get_param_value("action");
    if (action == "eth_getBlockByNumber") {
      const auto block = std::stoull(req.get_param_value("tag"), nullptr, 16);
      json txs = json::array();
      if (block == 7) {
        txs.push_back({{"hash", "0xt1"}, {"to", nullptr}});
        txs.push_back({{"hash", "0xt2"}, {"to", "0x00000000000000000000000000000000000000ee"}});
      }
      if (block == 8) txs.push_back({{"hash", "0xt3"}, {"to", nullptr}});
      res.set_content(json({{"jsonrpc", "2.0"}, {"id", 1}, {"result", {{"timestamp", "0x5ee6c000"}, {"transactions", txs}}}}).dump(),
                      "application/json");
    } else if (action == "eth_getTransactionReceipt") {
      const auto tx = req.get_param_value("txhash");
      const std::string addr = tx == "0xt1" ? "0x00000000000000000000000000000000000000c1"
                                            : "0x00000000000000000000000000000000000000c2";
      res.set_content(json({{"result", {{"contractAddress", addr}}}}).dump(), "application/json");
    } else if (action == "getsourcecode") {
      if (throttle_ > 0) {
        --throttle_;
        if (throttle_ % 2 == 0) {
          res.status = 429;
        } else {
          res.set_content(R"({"status":"0","message":"NOTOK","result":"Max rate limit reached"})", "application/json");
        }
        return;
      }
      const auto address = req.get_param_value("address");
      const std::string code = address.ends_with("c1") ? "pragma solidity ^0.8.0;\ncontract C1 {}\n" : "";
      res.set_content(json({{"status", "1"},
                            {"message", "OK"},
                            {"result", json::array({{{"SourceCode", code},
                                                     {"ContractName", code.empty() ? "" : "C1"},
                                                     {"CompilerVersion", "v0.8.7+commit.e28d00a7"}}})}})
                          .dump(),
                      "application/json");
    } else {
      res.status = 500;
    }
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int throttle_ = 0;
  std::atomic<int> requests{0};
};

TEST_F(FakeEtherscan, ScansBlocksForCreations) {
  EtherscanClient client(config());
  const auto addrs = list_contract_addresses(client, {6, 9});
  ASSERT_EQ(addrs.size(), 2u);
  EXPECT_EQ(addrs[0].address, "0x00000000000000000000000000000000000000c1");
  EXPECT_EQ(addrs[0].block_number, 7u);
  EXPECT_EQ(addrs[0].block_timestamp, 0x5ee6c000);
  EXPECT_EQ(addrs[1].block_number, 8u);
}

TEST_F(FakeEtherscan, FetchesSourceAndRetriesThrottle) {
  throttle_ = 2;
  EtherscanClient client(config());
  const auto files = fetch_source(client, "0x00000000000000000000000000000000000000c1", RetryPolicy{}, no_sleep());
  ASSERT_TRUE(files.has_value());
  ASSERT_EQ(files->size(), 1u);
  EXPECT_EQ((*files)[0].path, "C1.sol");
  EXPECT_FALSE(fetch_source(client, "0x00000000000000000000000000000000000000c2").has_value());
}

TEST_F(FakeEtherscan, RejectedKeyIsFatal) {
  auto c = config();
  c.api_key = "WRONG";
  EtherscanClient client(c);
  const int before = requests.load();
  EXPECT_THROW((void)fetch_source(client, "0x00000000000000000000000000000000000000c1", RetryPolicy{}, no_sleep()),
               AuthError);
  EXPECT_EQ(requests.load() - before, 1);
}

TEST_F(FakeEtherscan, EndToEndIngest) {
  TempDir dir;
  EtherscanClient client(config());
  auto store = CorpusStore::open(dir.path);
  const auto r = ingest(client, {6, 9}, store, fast_options());
  EXPECT_EQ(r.added, 1u);
  EXPECT_EQ(r.not_verified, 1u);
  ASSERT_EQ(store.entries().size(), 1u);
  EXPECT_EQ(store.entries()[0].block_timestamp, 0x5ee6c000);
}

TEST(Etherscan, UnreachableServerIsTransportError) {
  EtherscanConfig c;
  c.base_url = "http://127.0.0.1:1/api";
  c.timeout = std::chrono::seconds(1);
  c.retry.max_attempts = 1;
  c.pacing = no_sleep();
  EtherscanClient client(c);
  EXPECT_THROW((void)client.get_source("0x00000000000000000000000000000000000000c1"), TransportError);
  c.base_url = "ftp://x";
  EXPECT_THROW(EtherscanClient{c}, std::invalid_argument);
}
