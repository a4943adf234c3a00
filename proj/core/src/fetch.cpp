#include "seqlaw/fetch.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/oeis_parse.hpp"

#ifdef SEQLAW_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace seqlaw {

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("SEQLAW_CACHE_DIR"); env && *env) {
        return std::filesystem::path(env);
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "seqlaw";
    }
    return std::filesystem::path(".seqlaw-cache");
}

struct OeisFetcher::Impl {
    FetchOptions options;
    httplib::Client client;
    std::mutex gate;
    std::chrono::steady_clock::time_point last_request{};
    bool any_request = false;
    std::size_t network_calls = 0;

    explicit Impl(FetchOptions opts)
        : options(std::move(opts)), client(options.base_url) {
        client.set_connection_timeout(options.timeout_seconds);
        client.set_read_timeout(options.timeout_seconds);
        client.set_follow_location(true);
    }

    std::string get_body(const std::string& path) {
        {
            std::unique_lock lock(gate);
            if (any_request && options.rate_limit > 0.0) {
                const auto spacing = std::chrono::duration<double>(1.0 / options.rate_limit);
                const auto earliest =
                    last_request + std::chrono::duration_cast<std::chrono::steady_clock::duration>(spacing);
                const auto now = std::chrono::steady_clock::now();
                if (earliest > now) std::this_thread::sleep_until(earliest);
            }
            last_request = std::chrono::steady_clock::now();
            any_request = true;
            ++network_calls;
        }
        httplib::Result res = client.Get(path);
        if (!res) {
            throw NetworkError("request failed for " + options.base_url + path + ": " +
                               httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw NetworkError("HTTP " + std::to_string(res->status) + " for " +
                               options.base_url + path);
        }
        return res->body;
    }
};

OeisFetcher::OeisFetcher(FetchOptions options) {
    if (options.cache_dir.empty()) options.cache_dir = default_cache_dir();
    impl_ = std::make_unique<Impl>(std::move(options));
}

OeisFetcher::~OeisFetcher() = default;

std::size_t OeisFetcher::network_calls() const { return impl_->network_calls; }

OeisEntry OeisFetcher::fetch_entry(const SequenceId& id) {
    const std::filesystem::path cache_file = impl_->options.cache_dir / (id.value() + ".txt");
    if (std::filesystem::exists(cache_file)) {
        return parse_internal_entry(read_text_file(cache_file));
    }

    const std::string body = impl_->get_body("/search?q=id:" + id.value() + "&fmt=text");

    // A missing id comes back as a well-formed page with no %-records.
    bool has_record = false;
    for (std::size_t pos = 0; pos < body.size(); ++pos) {
        if (body[pos] == '%' && (pos == 0 || body[pos - 1] == '\n')) {
            has_record = true;
            break;
        }
    }
    if (!has_record) {
        throw NotFoundError("no OEIS entry for " + id.value());
    }

    OeisEntry entry = parse_internal_entry(body); // ParseError propagates, nothing cached
    if (entry.id != id) {
        throw ParseError("response id " + entry.id.value() + " does not match " + id.value());
    }
    write_text_file_atomic(cache_file, body);
    return entry;
}

} // namespace seqlaw
