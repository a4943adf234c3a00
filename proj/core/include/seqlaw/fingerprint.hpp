#pragma once

#include "seqlaw/big_int.hpp"
#include "seqlaw/error.hpp"
#include "seqlaw/sequence.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace seqlaw {

// A statistical distance that is undefined for the input (e.g. a sequence
// with no nonzero terms has no leading-digit distribution over 1..9).
class UndefinedDistanceError : public DataError {
public:
    using DataError::DataError;
};

// Leading-digit proportions over all terms (zero terms count as digit 0,
// negative terms contribute the first digit of their absolute value) plus
// the proportion of strictly positive terms.
struct DigitDistribution {
    std::array<double, 10> b_d{};
    double p_z = 0.0;
};

DigitDistribution digit_distribution(std::span<const BigInt> terms);

// The nine Benford probabilities b(i) = log10((i+1)/i), i = 1..9, stored at
// indices 0..8.
struct BenfordReference {
    std::array<double, 9> b{};
};

BenfordReference benford_reference();

// b_d restricted to digits 1..9 and renormalized, i.e. the leading-digit
// distribution of the nonzero terms. Throws UndefinedDistanceError when all
// terms are zero. Kept as the single place where this reading lives.
std::array<double, 9> nonzero_digit_profile(const DigitDistribution& d);

// Natural-log Kullback-Leibler divergence with 0*log(0) = 0.
double kl_divergence(const std::array<double, 9>& p, const BenfordReference& q);

// Max absolute CDF gap over digits in natural order 1..9.
double ks_statistic(const std::array<double, 9>& p, const BenfordReference& q);

// Mean absolute difference of the two probability vectors sorted ascending:
// the transport distance between the multisets of probability values, which
// is invariant under permuting digits.
double wasserstein_sorted(const std::array<double, 9>& p, const BenfordReference& q);

// Half L1 over the full support {0..9}, with the reference extended by
// q(0) = 0.
double total_variation(const DigitDistribution& d, const BenfordReference& q);

struct TaylorFit {
    double s = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    std::size_t n_points = 0;
    bool degenerate = false;
};

// OLS fit of ln v(n) against ln mu(n) over {n >= 2 : mu(n) > 0, v(n) > 0}.
// Fewer than two usable points, or no spread in the xs, gives the degenerate
// fit with zeroed fields.
TaylorFit taylor_features(std::span<const BigInt> terms);

inline constexpr std::size_t kFeatureCount = 14;

// Frozen order: [s, intercept, r, p_z, b_d(0), ..., b_d(9)].
using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "s", "intercept", "r", "p_z", "bd0", "bd1", "bd2", "bd3", "bd4",
    "bd5", "bd6", "bd7", "bd8", "bd9",
};

FeatureVector feature_vector(std::span<const BigInt> terms);

struct BenfordDistances {
    double kl = 0.0;
    double ks = 0.0;
    double wd = 0.0;
    double tv = 0.0;
};

// All four distances of one digit distribution against the Benford
// reference. Throws UndefinedDistanceError when the sequence has no nonzero
// terms (KL/KS/WD are undefined there).
BenfordDistances benford_distances(const DigitDistribution& d);

struct FeatureRow {
    SequenceId id;
    FeatureVector features{};
    BenfordDistances distances;
};

FeatureRow fingerprint(const Sequence& seq);

// Fan-out over a worker pool; row order always matches corpus order.
std::vector<FeatureRow> fingerprint_corpus(std::span<const Sequence> corpus,
                                           unsigned workers = 0);

// Delimited feature table (id, 14 features, 4 distances), 17 significant
// digits so values round-trip bit-exactly.
void write_feature_table(const std::filesystem::path& path, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_feature_table(const std::filesystem::path& path);

} // namespace seqlaw
