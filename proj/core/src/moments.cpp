#include "seqlaw/moments.hpp"

#include "seqlaw/error.hpp"

namespace seqlaw {

RunningMoments running_moments(std::span<const BigInt> terms) {
    if (terms.empty()) throw DataError("running_moments: empty term list");

    RunningMoments out;
    out.mu.reserve(terms.size());
    out.var.reserve(terms.size());

    WideReal mean;
    WideReal m2; // sum of squared deviations about the running mean
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const WideReal x = WideReal::from_integer(terms[i]);
        const double n = static_cast<double>(i + 1);
        const WideReal delta = x - mean;
        mean = mean + delta / n;
        const WideReal delta2 = x - mean;
        m2 = m2 + delta * delta2;

        out.mu.push_back(mean);
        out.var.push_back(i == 0 ? WideReal() : m2 / static_cast<double>(i));
    }
    return out;
}

} // namespace seqlaw
