#pragma once

#include <cstdint>
#include <cstddef>

namespace seqlaw {

// Deterministic 64-bit generator (splitmix64). Every random decision in the
// toolkit draws from one of these, seeded explicitly, so runs with the same
// configuration are bit-reproducible. Derived streams let workers (trees,
// sequences) consume randomness independently of scheduling order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Unbiased uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t rem = (0ull - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= rem) return r % n;
        }
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Independent stream derived from (seed, stream_id). Feeding consecutive
    // stream ids gives decorrelated generators.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        Rng mixer(seed);
        const std::uint64_t a = mixer.next();
        Rng mixer2(stream_id ^ 0xd1b54a32d192ed03ull);
        return Rng(a ^ mixer2.next());
    }

private:
    std::uint64_t state_;
};

} // namespace seqlaw
