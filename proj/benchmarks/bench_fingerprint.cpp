#include "seqlaw/fingerprint.hpp"
#include "seqlaw/moments.hpp"
#include "seqlaw/rng.hpp"

#include <benchmark/benchmark.h>

using namespace seqlaw;

namespace {

std::vector<BigInt> fibonacci(std::size_t count) {
    std::vector<BigInt> terms = {0, 1};
    while (terms.size() < count) {
        terms.push_back(terms[terms.size() - 1] + terms[terms.size() - 2]);
    }
    terms.resize(count);
    return terms;
}

std::vector<BigInt> small_random(std::size_t count) {
    Rng rng(1);
    std::vector<BigInt> terms;
    for (std::size_t i = 0; i < count; ++i) {
        terms.emplace_back(static_cast<std::int64_t>(rng.below(1000000)));
    }
    return terms;
}

} // namespace

static void BM_DigitDistributionSmallTerms(benchmark::State& state) {
    const auto terms = small_random(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(digit_distribution(terms));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DigitDistributionSmallTerms)->Arg(1000)->Arg(10000);

static void BM_DigitDistributionBigTerms(benchmark::State& state) {
    const auto terms = fibonacci(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(digit_distribution(terms));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DigitDistributionBigTerms)->Arg(990);

static void BM_RunningMoments(benchmark::State& state) {
    const auto terms = fibonacci(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(running_moments(terms));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunningMoments)->Arg(990);

static void BM_TaylorFeatures(benchmark::State& state) {
    const auto terms = fibonacci(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(taylor_features(terms));
    }
}
BENCHMARK(BM_TaylorFeatures)->Arg(990);

static void BM_FullFingerprint(benchmark::State& state) {
    Sequence seq;
    seq.id = SequenceId::from_number(1);
    seq.terms = fibonacci(990);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fingerprint(seq));
    }
}
BENCHMARK(BM_FullFingerprint);

BENCHMARK_MAIN();
