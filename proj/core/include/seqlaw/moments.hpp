#pragma once

#include "seqlaw/big_int.hpp"
#include "seqlaw/wide_real.hpp"

#include <span>
#include <vector>

namespace seqlaw {

// Running mean mu[n] and sample variance var[n] (divisor n-1) of the first
// n terms, for n = 1..N. Indices are 0-based: mu[0] is the mean of the
// first term and var[0] == 0.
struct RunningMoments {
    std::vector<WideReal> mu;
    std::vector<WideReal> var;
};

// Single streaming pass (Welford update) in wide-exponent arithmetic, so
// sequences whose terms overflow binary64 still get finite moments.
// Throws DataError on empty input.
RunningMoments running_moments(std::span<const BigInt> terms);

} // namespace seqlaw
