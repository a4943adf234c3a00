#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqlaw/error.hpp"
#include "seqlaw/fetch.hpp"

#ifdef SEQLAW_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

using namespace seqlaw;

namespace {

// Local stand-in for the upstream server, serving canned machine-readable
// entries on an ephemeral port.
class FakeServer {
public:
    FakeServer() {
        server_.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            const std::string q = req.get_param_value("q");
            if (q == "id:A000045") {
                res.set_content(
                    "# Greetings.\n"
                    "%I A000045\n"
                    "%S A000045 0,1,1,2,3,5,8\n"
                    "%N A000045 Fibonacci numbers.\n"
                    "%K A000045 core,easy,nice,nonn\n",
                    "text/plain");
            } else if (q == "id:A000040") {
                res.set_content(
                    "%I A000040\n"
                    "%S A000040 2,3,5,7,11\n"
                    "%N A000040 The prime numbers.\n"
                    "%K A000040 core,nonn\n",
                    "text/plain");
            } else if (q == "id:A777777") {
                res.set_content("%S A777777 broken,tokens\n", "text/plain"); // malformed
            } else {
                res.set_content("# Greetings.\nNo results.\n", "text/plain");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int hits() const { return hits_; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> hits_{0};
};

std::filesystem::path fresh_cache() {
    auto dir = std::filesystem::temp_directory_path() / "seqlaw_fetch_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("fetch parses, caches and serves repeats offline") {
    FakeServer server;
    FetchOptions opts;
    opts.cache_dir = fresh_cache();
    opts.base_url = server.base_url();
    opts.rate_limit = 1000.0;
    OeisFetcher fetcher(opts);

    const OeisEntry entry = fetcher.fetch_entry(SequenceId::parse("A000045"));
    CHECK(entry.name == "Fibonacci numbers.");
    CHECK(entry.keywords.count("core") == 1);
    CHECK(entry.terms.size() == 7);
    CHECK(server.hits() == 1);
    CHECK(fetcher.network_calls() == 1);

    // Identical entry from cache, zero further network traffic.
    const OeisEntry cached = fetcher.fetch_entry(SequenceId::parse("A000045"));
    CHECK(cached.name == entry.name);
    CHECK(cached.terms == entry.terms);
    CHECK(server.hits() == 1);
    CHECK(fetcher.network_calls() == 1);

    // A second fetcher instance sees the same cache.
    OeisFetcher second(opts);
    CHECK(second.fetch_entry(SequenceId::parse("A000045")).name == entry.name);
    CHECK(server.hits() == 1);

    std::filesystem::remove_all(opts.cache_dir);
}

TEST_CASE("fetch distinguishes not-found, malformed and network failures") {
    FakeServer server;
    FetchOptions opts;
    opts.cache_dir = fresh_cache();
    opts.base_url = server.base_url();
    opts.rate_limit = 1000.0;
    OeisFetcher fetcher(opts);

    CHECK_THROWS_AS(fetcher.fetch_entry(SequenceId::parse("A999999")), NotFoundError);

    // Malformed upstream record: ParseError, and nothing lands in the cache.
    CHECK_THROWS_AS(fetcher.fetch_entry(SequenceId::parse("A777777")), ParseError);
    CHECK(!std::filesystem::exists(opts.cache_dir / "A777777.txt"));

    // Retry-safe: the same id can be fetched once the upstream recovers
    // (here: a different, valid id goes through the same path).
    CHECK(fetcher.fetch_entry(SequenceId::parse("A000040")).name == "The prime numbers.");

    FetchOptions bad = opts;
    bad.base_url = "http://127.0.0.1:1";
    bad.timeout_seconds = 2;
    OeisFetcher unreachable(bad);
    CHECK_THROWS_AS(unreachable.fetch_entry(SequenceId::parse("A000045")), NetworkError);

    std::filesystem::remove_all(opts.cache_dir);
}

TEST_CASE("cache directory resolution honors the environment override") {
    const auto dir = fresh_cache();
    ::setenv("SEQLAW_CACHE_DIR", dir.string().c_str(), 1);
    CHECK(default_cache_dir() == dir);
    ::unsetenv("SEQLAW_CACHE_DIR");
    CHECK(default_cache_dir() != dir);

    // An empty FetchOptions.cache_dir picks up the override.
    ::setenv("SEQLAW_CACHE_DIR", dir.string().c_str(), 1);
    FakeServer server;
    FetchOptions opts;
    opts.base_url = server.base_url();
    opts.rate_limit = 1000.0;
    OeisFetcher fetcher(opts);
    fetcher.fetch_entry(SequenceId::parse("A000045"));
    CHECK(std::filesystem::exists(dir / "A000045.txt"));
    ::unsetenv("SEQLAW_CACHE_DIR");
    std::filesystem::remove_all(dir);
}

TEST_CASE("network requests respect the rate limit") {
    FakeServer server;
    FetchOptions opts;
    opts.cache_dir = fresh_cache();
    opts.base_url = server.base_url();
    opts.rate_limit = 1.0; // one request per second
    OeisFetcher fetcher(opts);

    const auto start = std::chrono::steady_clock::now();
    fetcher.fetch_entry(SequenceId::parse("A000045"));
    fetcher.fetch_entry(SequenceId::parse("A000040")); // second network call
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    CHECK(fetcher.network_calls() == 2);
    CHECK(elapsed >= 1.0);

    // Cache hits are not delayed.
    const auto t0 = std::chrono::steady_clock::now();
    fetcher.fetch_entry(SequenceId::parse("A000045"));
    const auto cached_time = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    CHECK(cached_time < 0.5);

    std::filesystem::remove_all(opts.cache_dir);
}
