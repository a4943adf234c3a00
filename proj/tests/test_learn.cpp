#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqlaw/error.hpp"
#include "seqlaw/fingerprint.hpp"
#include "seqlaw/fixture.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/learn.hpp"
#include "seqlaw/rng.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

using namespace seqlaw;

namespace {

// 1-D threshold problem: class = (x >= 0).
std::pair<Matrix, std::vector<int>> separable_1d(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, 1);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = rng.uniform(-1, 1);
        x.at(i, 0) = v;
        y[i] = v >= 0.0 ? 1 : 0;
    }
    return {std::move(x), std::move(y)};
}

std::vector<int> hard_predictions(const ForestModel& model, const Matrix& x) {
    const auto proba = forest_predict_proba(model, x);
    std::vector<int> out(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] >= 0.5 ? 1 : 0;
    return out;
}

} // namespace

TEST_CASE("single tree separates a threshold problem") {
    auto [x, y] = separable_1d(100, 3);
    Rng rng(1);
    ForestHyper hyper;
    const Tree tree = tree_fit(x, y, hyper, /*exhaustive=*/true, rng);

    // One internal node plus two leaves.
    CHECK(tree.nodes.size() == 3);
    for (std::size_t i = 0; i < x.rows; ++i) {
        CHECK((tree.predict_proba(x.row(i)) >= 0.5 ? 1 : 0) == y[i]);
    }
}

TEST_CASE("pure input gives a single leaf") {
    Matrix x(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        x.at(i, 0) = static_cast<double>(i);
        x.at(i, 1) = -1.0 * static_cast<double>(i);
    }
    const std::vector<int> y(10, 1);
    Rng rng(1);
    ForestHyper hyper;
    const Tree tree = tree_fit(x, y, hyper, true, rng);
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].feature == -1);
    CHECK(tree.predict_proba(x.row(0)) == 1.0);
}

TEST_CASE("trees learn xor with depth two") {
    // Four XOR points replicated 50x; no single split has positive gain, the
    // greedy grower must still reach perfect training accuracy at depth >= 2.
    Matrix x(200, 2);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        const int a = static_cast<int>(i) % 2;
        const int b = (static_cast<int>(i) / 2) % 2;
        x.at(i, 0) = a;
        x.at(i, 1) = b;
        y[i] = a ^ b;
    }
    ForestHyper hyper;
    hyper.max_features = 2;
    Rng rng(5);
    const Tree tree = tree_fit(x, y, hyper, true, rng);
    for (std::size_t i = 0; i < x.rows; ++i) {
        CHECK((tree.predict_proba(x.row(i)) >= 0.5 ? 1 : 0) == y[i]);
    }
}

TEST_CASE("forest accuracy, determinism and importance") {
    auto [x, y] = separable_1d(400, 11);
    auto [probe, probe_y] = separable_1d(200, 12);

    ForestHyper hyper;
    hyper.n_trees = 50;
    const ForestModel rf = forest_fit(x, y, ForestMode::random_forest, hyper, 21);

    const auto pred = hard_predictions(rf, probe);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == probe_y[i];
    CHECK(static_cast<double>(correct) / static_cast<double>(pred.size()) >= 0.99);

    const ForestModel rf2 = forest_fit(x, y, ForestMode::random_forest, hyper, 21);
    CHECK(forest_predict_proba(rf, probe) == forest_predict_proba(rf2, probe));

    const ForestModel other_seed = forest_fit(x, y, ForestMode::random_forest, hyper, 22);
    CHECK(forest_predict_proba(rf, probe) != forest_predict_proba(other_seed, probe));

    // Importance: only feature 0 is informative among 14.
    Rng rng(31);
    Matrix wide(300, 14);
    std::vector<int> wy(300);
    for (std::size_t i = 0; i < 300; ++i) {
        const double v = rng.uniform(-1, 1);
        wide.at(i, 0) = v;
        wy[i] = v >= 0 ? 1 : 0;
        for (std::size_t c = 1; c < 14; ++c) wide.at(i, c) = rng.uniform(-1, 1);
    }
    ForestHyper wide_hyper;
    wide_hyper.n_trees = 60;
    const ForestModel informative =
        forest_fit(wide, wy, ForestMode::random_forest, wide_hyper, 7);
    CHECK(informative.importance[0] > 0.8);
    const double total = std::accumulate(informative.importance.begin(),
                                         informative.importance.end(), 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    for (double imp : informative.importance) CHECK(imp >= 0.0);

    // Row permutation of the probe set permutes predictions with it.
    Matrix shuffled(probe.rows, probe.cols);
    std::vector<std::size_t> order(probe.rows);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = (i * 7 + 3) % order.size();
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t c = 0; c < probe.cols; ++c) {
            shuffled.at(i, c) = probe.at(order[i], c);
        }
    }
    const auto base = forest_predict_proba(rf, probe);
    const auto perm = forest_predict_proba(rf, shuffled);
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(perm[i] == base[order[i]]);
}

TEST_CASE("extra trees and random forest reduce to the same deterministic tree") {
    Rng data_rng(41);
    Matrix x(120, 3);
    std::vector<int> y(120);
    for (std::size_t i = 0; i < 120; ++i) {
        for (std::size_t c = 0; c < 3; ++c) x.at(i, c) = data_rng.uniform(-2, 2);
        y[i] = (x.at(i, 0) + 0.5 * x.at(i, 1) >= 0) ? 1 : 0;
    }

    ForestHyper hyper;
    hyper.n_trees = 1;
    hyper.max_features = 3;             // all features
    hyper.bootstrap = false;            // no resampling
    hyper.exhaustive_thresholds = true; // same threshold rule

    const ForestModel as_rf = forest_fit(x, y, ForestMode::random_forest, hyper, 99);
    const ForestModel as_et = forest_fit(x, y, ForestMode::extra_trees, hyper, 99);
    REQUIRE(as_rf.trees.size() == 1);
    REQUIRE(as_et.trees.size() == 1);
    REQUIRE(as_rf.trees[0].nodes.size() == as_et.trees[0].nodes.size());
    for (std::size_t i = 0; i < as_rf.trees[0].nodes.size(); ++i) {
        const TreeNode& a = as_rf.trees[0].nodes[i];
        const TreeNode& b = as_et.trees[0].nodes[i];
        CHECK(a.feature == b.feature);
        CHECK(a.threshold == b.threshold);
        CHECK(a.class_counts == b.class_counts);
    }
    CHECK(forest_predict_proba(as_rf, x) == forest_predict_proba(as_et, x));
}

TEST_CASE("forest guards") {
    auto [x, y] = separable_1d(20, 2);
    ForestHyper hyper;
    hyper.n_trees = 0;
    CHECK_THROWS_AS(forest_fit(x, y, ForestMode::random_forest, hyper, 1), ConfigError);

    hyper.n_trees = 2;
    const ForestModel model = forest_fit(x, y, ForestMode::random_forest, hyper, 1);
    Matrix wrong(3, 2);
    CHECK_THROWS_AS(forest_predict_proba(model, wrong), DataError);

    ForestModel empty;
    empty.n_features = 1;
    CHECK_THROWS_AS(forest_predict_proba(empty, x), DataError);

    std::vector<int> bad_y(x.rows, 2);
    CHECK_THROWS_AS(forest_fit(x, bad_y, ForestMode::random_forest, hyper, 1), DataError);
}

TEST_CASE("predicted probability is the mean of per-tree leaf frequencies") {
    // Hand-built forest: k pure-positive stumps and n-k pure-negative ones.
    auto make_leaf_tree = [](double c0, double c1) {
        Tree t;
        TreeNode leaf;
        leaf.class_counts = {c0, c1};
        t.nodes.push_back(leaf);
        return t;
    };
    Matrix probe(1, 1);
    for (std::size_t positives = 0; positives <= 10; ++positives) {
        ForestModel model;
        model.n_features = 1;
        for (std::size_t t = 0; t < 10; ++t) {
            model.trees.push_back(t < positives ? make_leaf_tree(0, 5) : make_leaf_tree(5, 0));
        }
        const auto proba = forest_predict_proba(model, probe);
        CHECK(proba[0] == doctest::Approx(positives / 10.0).epsilon(1e-12));
    }
}

TEST_CASE("multilabel binary relevance") {
    // Three informative features decide three different labels; the rest are
    // constant-false, including one label that never occurs.
    Rng rng(55);
    Matrix x(300, kFeatureCount);
    Matrix y(300, kLabelCount);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) x.at(i, c) = rng.uniform(-1, 1);
        y.at(i, 0) = x.at(i, 0) >= 0;
        y.at(i, 2) = x.at(i, 1) >= 0.3;
        y.at(i, 7) = x.at(i, 2) >= -0.2;
    }

    ForestHyper hyper;
    hyper.n_trees = 40;
    const MultilabelModel model =
        multilabel_fit(x, y, ForestMode::extra_trees, hyper, 77, PreprocessSpec{});

    const auto pred = multilabel_predict(model, x);
    std::size_t exact = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        bool ok = true;
        for (std::size_t l = 0; l < kLabelCount; ++l) {
            ok = ok && (pred[i][l] == (y.at(i, l) != 0.0));
        }
        exact += ok;
        CHECK(!pred[i][4]); // constant-false label never predicted
    }
    CHECK(static_cast<double>(exact) / static_cast<double>(pred.size()) == 1.0);

    const MultilabelModel again =
        multilabel_fit(x, y, ForestMode::extra_trees, hyper, 77, PreprocessSpec{});
    const auto pred2 = multilabel_predict(again, x);
    for (std::size_t i = 0; i < pred.size(); ++i) CHECK(pred[i] == pred2[i]);

    Matrix bad(300, 3);
    CHECK_THROWS_AS(multilabel_fit(x, bad, ForestMode::extra_trees, hyper, 1, {}), DataError);
}

TEST_CASE("baseline classifier follows training frequencies") {
    Matrix y(10, kLabelCount);
    for (std::size_t r = 0; r < 10; ++r) {
        y.at(r, 0) = 0.0;          // never
        y.at(r, 1) = 1.0;          // always
        y.at(r, 2) = r < 3 ? 1 : 0; // 0.3
    }
    const BaselineModel model = baseline_fit(y);
    CHECK(model.frequency[0] == 0.0);
    CHECK(model.frequency[1] == 1.0);
    CHECK(model.frequency[2] == doctest::Approx(0.3));

    const auto pred = baseline_predict(model, 100000, 5);
    std::size_t count0 = 0, count1 = 0, count2 = 0;
    for (const LabelSet& p : pred) {
        count0 += p[0];
        count1 += p[1];
        count2 += p[2];
    }
    CHECK(count0 == 0);
    CHECK(count1 == 100000);
    CHECK(std::abs(count2 / 100000.0 - 0.3) <= 0.01);

    const auto again = baseline_predict(model, 1000, 5);
    const auto reference = baseline_predict(model, 1000, 5);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == reference[i]);
}

TEST_CASE("corpus-task importance is spread over the features") {
    // Fixture corpus vs uniform random negatives on raw features: no single
    // feature may dominate the forest's Gini importance.
    FixtureOptions opts;
    opts.terms = 300;
    const auto fixture = fixture_sequences(opts);
    std::vector<Sequence> corpus;
    for (const auto& fx : fixture) corpus.push_back(fx.seq);
    const auto oeis_rows = fingerprint_corpus(corpus);
    const auto random_rows =
        fingerprint_corpus(generate_random_sequences(fixture.size(), 300, 0, 1000000, 3));

    Matrix x(oeis_rows.size() + random_rows.size(), kFeatureCount);
    std::vector<int> y(x.rows);
    for (std::size_t i = 0; i < oeis_rows.size(); ++i) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) x.at(i, f) = oeis_rows[i].features[f];
        y[i] = 1;
    }
    for (std::size_t i = 0; i < random_rows.size(); ++i) {
        const std::size_t r = oeis_rows.size() + i;
        for (std::size_t f = 0; f < kFeatureCount; ++f) x.at(r, f) = random_rows[i].features[f];
        y[r] = 0;
    }

    ForestHyper hyper;
    hyper.n_trees = 200;
    const ForestModel model = forest_fit(x, y, ForestMode::random_forest, hyper, 13);
    const double max_importance =
        *std::max_element(model.importance.begin(), model.importance.end());
    CHECK(max_importance < 0.5);
    CHECK(std::accumulate(model.importance.begin(), model.importance.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("model persistence reproduces predictions exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "seqlaw_model_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    Rng rng(91);
    Matrix x(150, kFeatureCount);
    Matrix y(150, kLabelCount);
    std::vector<int> yb(150);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) x.at(i, c) = rng.uniform(-4, 4);
        yb[i] = x.at(i, 1) > 0.2 ? 1 : 0;
        for (std::size_t l = 0; l < kLabelCount; ++l) {
            y.at(i, l) = x.at(i, l % kFeatureCount) > 0 ? 1.0 : 0.0;
        }
    }
    Matrix probe(40, kFeatureCount);
    for (std::size_t i = 0; i < probe.rows; ++i) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) probe.at(i, c) = rng.uniform(-4, 4);
    }

    ForestHyper hyper;
    hyper.n_trees = 25;

    // Binary bundle with scaler+pca preprocessing.
    PreprocessSpec prep;
    prep.use_scaler = true;
    prep.use_pca = true;
    prep.pca_components = 8;
    BinaryForestBundle bundle;
    bundle.preprocess = preprocess_fit(x, prep);
    bundle.forest = forest_fit(bundle.preprocess.apply(x), yb, ForestMode::random_forest,
                               hyper, 17);
    save_model(dir / "binary.json", bundle);
    CHECK(model_kind(dir / "binary.json") == "binary-forest");
    const BinaryForestBundle loaded = load_binary_model(dir / "binary.json");
    CHECK(forest_predict_proba(loaded.forest, loaded.preprocess.apply(probe)) ==
          forest_predict_proba(bundle.forest, bundle.preprocess.apply(probe)));

    // Multilabel.
    const MultilabelModel ml =
        multilabel_fit(x, y, ForestMode::extra_trees, hyper, 19, PreprocessSpec{true, false, 14});
    save_model(dir / "ml.json", ml);
    const MultilabelModel ml_loaded = load_multilabel_model(dir / "ml.json");
    const auto before = multilabel_predict_proba(ml, probe);
    const auto after = multilabel_predict_proba(ml_loaded, probe);
    CHECK(before.data == after.data);

    // Baseline.
    const BaselineModel bl = baseline_fit(y);
    save_model(dir / "baseline.json", bl);
    const BaselineModel bl_loaded = load_baseline_model(dir / "baseline.json");
    CHECK(bl.frequency == bl_loaded.frequency);

    CHECK_THROWS_AS(load_binary_model(dir / "ml.json"), DataError);
    CHECK_THROWS_AS(load_multilabel_model(dir / "baseline.json"), DataError);

    // Thresholds outside (0,1) are rejected at load time.
    std::string text = read_text_file(dir / "ml.json");
    const std::string needle = "\"thresholds\": [";
    const std::size_t pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, needle.size() + 3, needle + "1.5");
    write_text_file_atomic(dir / "ml_bad.json", text);
    CHECK_THROWS_AS(load_multilabel_model(dir / "ml_bad.json"), ParseError);

    std::filesystem::remove_all(dir);
}
