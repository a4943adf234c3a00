#pragma once

#include "seqlaw/sequence.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

namespace seqlaw {

struct FetchOptions {
    std::filesystem::path cache_dir;        // empty -> default_cache_dir()
    double rate_limit = 2.0;                // network requests per second
    std::string base_url = "https://oeis.org";
    int timeout_seconds = 30;
};

// $SEQLAW_CACHE_DIR when set, otherwise ~/.cache/seqlaw.
std::filesystem::path default_cache_dir();

// Fetches machine-readable OEIS entries. Responses are cached one file per
// id (written atomically), so repeat lookups are served offline. Network
// requests from all threads funnel through one rate-limited queue.
//
// Errors are distinct and retry-safe: NetworkError (transport/HTTP failure),
// NotFoundError (id absent upstream), ParseError (malformed record; nothing
// is cached in that case).
class OeisFetcher {
public:
    explicit OeisFetcher(FetchOptions options);
    ~OeisFetcher();

    OeisFetcher(const OeisFetcher&) = delete;
    OeisFetcher& operator=(const OeisFetcher&) = delete;

    OeisEntry fetch_entry(const SequenceId& id);

    std::size_t network_calls() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace seqlaw
