#include "seqlaw/learn.hpp"
#include "seqlaw/line_fit.hpp"
#include "seqlaw/rng.hpp"

#include <benchmark/benchmark.h>

using namespace seqlaw;

namespace {

struct TrainingData {
    Matrix x;
    std::vector<int> y;
};

TrainingData binary_blobs(std::size_t rows) {
    Rng rng(5);
    TrainingData data;
    data.x = Matrix(rows, 14);
    data.y.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const int label = static_cast<int>(i % 2);
        for (std::size_t c = 0; c < 14; ++c) {
            data.x.at(i, c) = rng.uniform(-1, 1) + (label ? 0.6 : 0.0);
        }
        data.y[i] = label;
    }
    return data;
}

} // namespace

static void BM_ForestFit(benchmark::State& state) {
    const auto data = binary_blobs(static_cast<std::size_t>(state.range(0)));
    ForestHyper hyper;
    hyper.n_trees = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            forest_fit(data.x, data.y, ForestMode::random_forest, hyper, 3, 1));
    }
}
BENCHMARK(BM_ForestFit)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ExtraTreesFit(benchmark::State& state) {
    const auto data = binary_blobs(static_cast<std::size_t>(state.range(0)));
    ForestHyper hyper;
    hyper.n_trees = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            forest_fit(data.x, data.y, ForestMode::extra_trees, hyper, 3, 1));
    }
}
BENCHMARK(BM_ExtraTreesFit)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ForestPredict(benchmark::State& state) {
    const auto data = binary_blobs(2000);
    ForestHyper hyper;
    hyper.n_trees = 100;
    const ForestModel model =
        forest_fit(data.x, data.y, ForestMode::random_forest, hyper, 3, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forest_predict_proba(model, data.x));
    }
    state.SetItemsProcessed(state.iterations() * data.x.rows);
}
BENCHMARK(BM_ForestPredict);

static void BM_RansacFit(benchmark::State& state) {
    Rng rng(9);
    std::vector<Point> pts;
    for (int i = 0; i < 300; ++i) {
        const double x = rng.uniform(-1, 1);
        pts.push_back(Point{x, 2 * x + rng.uniform(-0.02, 0.02)});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ransac_fit(pts, 0.05, 2000, 4));
    }
}
BENCHMARK(BM_RansacFit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
