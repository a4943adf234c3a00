#include "seqlaw/learn.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace seqlaw {

namespace {

double gini(double c0, double c1) {
    const double n = c0 + c1;
    if (n == 0.0) return 0.0;
    const double p0 = c0 / n;
    const double p1 = c1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
    double left0 = 0.0, left1 = 0.0; // class counts routed left
};

class Grower {
public:
    Grower(const Matrix& x, std::span<const int> y, const ForestHyper& hyper,
           bool exhaustive, Rng& rng, std::vector<double>* importance)
        : x_(x), y_(y), hyper_(hyper), exhaustive_(exhaustive), rng_(rng),
          importance_(importance) {
        feature_pool_.resize(x.cols);
        for (std::size_t f = 0; f < x.cols; ++f) feature_pool_[f] = f;
    }

    Tree grow_tree(std::vector<std::size_t> rows) {
        n_root_ = static_cast<double>(rows.size());
        Tree tree;
        nodes_ = &tree.nodes;
        grow(std::move(rows), 1);
        nodes_ = nullptr;
        return tree;
    }

private:
    std::size_t max_features() const {
        if (hyper_.max_features > 0) return std::min(hyper_.max_features, x_.cols);
        return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x_.cols))));
    }

    // Candidate features for this node, ascending so gain ties resolve to the
    // lowest feature index.
    std::vector<std::size_t> sample_features() {
        const std::size_t mf = max_features();
        if (mf >= x_.cols) return feature_pool_;
        std::vector<std::size_t> pool = feature_pool_;
        for (std::size_t i = 0; i < mf; ++i) {
            const std::size_t j = i + rng_.index(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(mf);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    SplitChoice best_split(std::span<const std::size_t> rows, double c0, double c1) {
        SplitChoice best;
        const double n = static_cast<double>(rows.size());
        const double parent = gini(c0, c1);
        const double msl = static_cast<double>(hyper_.min_samples_leaf);

        for (std::size_t f : sample_features()) {
            if (exhaustive_) {
                scratch_.clear();
                for (std::size_t i : rows) {
                    scratch_.emplace_back(x_.at(i, f), y_[i]);
                }
                std::sort(scratch_.begin(), scratch_.end());
                double l0 = 0.0, l1 = 0.0;
                for (std::size_t k = 0; k + 1 < scratch_.size(); ++k) {
                    (scratch_[k].second ? l1 : l0) += 1.0;
                    if (scratch_[k].first == scratch_[k + 1].first) continue;
                    const double nl = l0 + l1;
                    const double nr = n - nl;
                    if (nl < msl || nr < msl) continue;
                    const double gain = parent - (nl / n) * gini(l0, l1) -
                                        (nr / n) * gini(c0 - l0, c1 - l1);
                    if (gain > best.gain) {
                        best = SplitChoice{static_cast<std::int32_t>(f), scratch_[k].first,
                                           gain, l0, l1};
                    }
                }
            } else {
                double lo = x_.at(rows[0], f), hi = lo;
                for (std::size_t i : rows) {
                    lo = std::min(lo, x_.at(i, f));
                    hi = std::max(hi, x_.at(i, f));
                }
                if (lo == hi) continue;
                double t = rng_.uniform(lo, hi);
                if (t >= hi) t = std::nextafter(hi, lo); // fp guard
                double l0 = 0.0, l1 = 0.0;
                for (std::size_t i : rows) {
                    if (x_.at(i, f) <= t) (y_[i] ? l1 : l0) += 1.0;
                }
                const double nl = l0 + l1;
                const double nr = n - nl;
                if (nl < msl || nr < msl) continue;
                const double gain = parent - (nl / n) * gini(l0, l1) -
                                    (nr / n) * gini(c0 - l0, c1 - l1);
                if (gain > best.gain) {
                    best = SplitChoice{static_cast<std::int32_t>(f), t, gain, l0, l1};
                }
            }
        }
        return best;
    }

    std::int32_t make_leaf(double c0, double c1) {
        TreeNode leaf;
        leaf.class_counts = {c0, c1};
        nodes_->push_back(leaf);
        return static_cast<std::int32_t>(nodes_->size() - 1);
    }

    std::int32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
        double c0 = 0.0, c1 = 0.0;
        for (std::size_t i : rows) (y_[i] ? c1 : c0) += 1.0;

        const bool pure = c0 == 0.0 || c1 == 0.0;
        const bool depth_capped = hyper_.max_depth > 0 && depth > hyper_.max_depth;
        if (pure || depth_capped || rows.size() < 2 * hyper_.min_samples_leaf) {
            return make_leaf(c0, c1);
        }

        const SplitChoice split = best_split(rows, c0, c1);
        if (split.feature < 0) return make_leaf(c0, c1);

        if (importance_) {
            const double n = static_cast<double>(rows.size());
            const double nl = split.left0 + split.left1;
            const double nr = n - nl;
            const double decrease = gini(c0, c1) -
                                    (nl / n) * gini(split.left0, split.left1) -
                                    (nr / n) * gini(c0 - split.left0, c1 - split.left1);
            (*importance_)[static_cast<std::size_t>(split.feature)] += (n / n_root_) * decrease;
        }

        std::vector<std::size_t> left, right;
        left.reserve(rows.size());
        right.reserve(rows.size());
        for (std::size_t i : rows) {
            (x_.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
                .push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::size_t self = nodes_->size();
        nodes_->emplace_back();
        (*nodes_)[self].feature = split.feature;
        (*nodes_)[self].threshold = split.threshold;
        const std::int32_t l = grow(std::move(left), depth + 1);
        const std::int32_t r = grow(std::move(right), depth + 1);
        (*nodes_)[self].left = l;
        (*nodes_)[self].right = r;
        return static_cast<std::int32_t>(self);
    }

    const Matrix& x_;
    std::span<const int> y_;
    const ForestHyper& hyper_;
    bool exhaustive_;
    Rng& rng_;
    std::vector<double>* importance_;
    double n_root_ = 0.0;
    std::vector<TreeNode>* nodes_ = nullptr;
    std::vector<std::size_t> feature_pool_;
    std::vector<std::pair<double, int>> scratch_;
};

void check_xy(const Matrix& x, std::span<const int> y) {
    if (x.rows == 0) throw DataError("tree/forest fit: empty training matrix");
    if (x.rows != y.size()) throw DataError("tree/forest fit: X/y length mismatch");
    for (int v : y) {
        if (v != 0 && v != 1) throw DataError("tree/forest fit: y must be binary");
    }
}

} // namespace

std::string_view to_string(ForestMode mode) {
    return mode == ForestMode::random_forest ? "random_forest" : "extra_trees";
}

ForestMode forest_mode_from_string(std::string_view text) {
    if (text == "random_forest") return ForestMode::random_forest;
    if (text == "extra_trees") return ForestMode::extra_trees;
    throw ConfigError("unknown forest mode: '" + std::string(text) + "'");
}

double Tree::predict_proba(std::span<const double> x) const {
    const TreeNode* node = &nodes.front();
    while (node->feature >= 0) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? &nodes[static_cast<std::size_t>(node->left)]
                   : &nodes[static_cast<std::size_t>(node->right)];
    }
    const double total = node->class_counts[0] + node->class_counts[1];
    return total == 0.0 ? 0.0 : node->class_counts[1] / total;
}

Tree tree_fit(const Matrix& x, std::span<const int> y, const ForestHyper& hyper,
              bool exhaustive_thresholds, Rng& rng, std::vector<double>* importance) {
    check_xy(x, y);
    std::vector<std::size_t> rows(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) rows[i] = i;
    Grower grower(x, y, hyper, exhaustive_thresholds, rng, importance);
    return grower.grow_tree(std::move(rows));
}

ForestModel forest_fit(const Matrix& x, std::span<const int> y, ForestMode mode,
                       ForestHyper hyper, std::uint64_t seed, unsigned workers) {
    check_xy(x, y);
    if (hyper.n_trees == 0) throw ConfigError("forest_fit: n_trees must be >= 1");

    const bool bootstrap = hyper.bootstrap.value_or(mode == ForestMode::random_forest);
    const bool exhaustive =
        hyper.exhaustive_thresholds.value_or(mode == ForestMode::random_forest);

    ForestModel model;
    model.mode = mode;
    model.hyper = hyper;
    model.seed = seed;
    model.n_features = x.cols;
    model.trees.resize(hyper.n_trees);

    std::vector<std::vector<double>> tree_importance(hyper.n_trees,
                                                     std::vector<double>(x.cols, 0.0));

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(hyper.n_trees));

    std::atomic<std::size_t> cursor{0};
    auto fit_one = [&](std::size_t t) {
        Rng rng = Rng::stream(seed, t);
        std::vector<std::size_t> rows(x.rows);
        if (bootstrap) {
            for (std::size_t i = 0; i < x.rows; ++i) rows[i] = rng.index(x.rows);
        } else {
            for (std::size_t i = 0; i < x.rows; ++i) rows[i] = i;
        }
        Grower grower(x, y, model.hyper, exhaustive, rng, &tree_importance[t]);
        model.trees[t] = grower.grow_tree(std::move(rows));
    };

    if (workers <= 1) {
        for (std::size_t t = 0; t < hyper.n_trees; ++t) fit_one(t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t t = cursor.fetch_add(1);
                    if (t >= hyper.n_trees) return;
                    fit_one(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    model.importance.assign(x.cols, 0.0);
    double total = 0.0;
    for (const auto& imp : tree_importance) {
        for (std::size_t f = 0; f < x.cols; ++f) {
            model.importance[f] += imp[f];
            total += imp[f];
        }
    }
    if (total > 0.0) {
        for (double& v : model.importance) v /= total;
    }
    return model;
}

std::vector<double> forest_predict_proba(const ForestModel& model, const Matrix& x) {
    if (model.trees.empty()) throw DataError("forest_predict_proba: empty forest");
    if (x.cols != model.n_features) {
        throw DataError("forest_predict_proba: expected " + std::to_string(model.n_features) +
                        " columns, got " + std::to_string(x.cols));
    }
    std::vector<double> proba(x.rows, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double sum = 0.0;
        for (const Tree& tree : model.trees) sum += tree.predict_proba(x.row(r));
        proba[r] = sum / static_cast<double>(model.trees.size());
    }
    return proba;
}

Matrix Preprocess::apply(const Matrix& x) const {
    Matrix out = x;
    if (scaler) out = scaler_apply(*scaler, out);
    if (pca) out = pca_apply(*pca, out);
    return out;
}

Preprocess preprocess_fit(const Matrix& x_train, const PreprocessSpec& spec) {
    Preprocess prep;
    Matrix current = x_train;
    if (spec.use_scaler) {
        prep.scaler = scaler_fit(current);
        current = scaler_apply(*prep.scaler, current);
    }
    if (spec.use_pca) {
        prep.pca = pca_fit(current, std::min(spec.pca_components, current.cols));
    }
    return prep;
}

MultilabelModel multilabel_fit(const Matrix& x_train, const Matrix& y_train, ForestMode mode,
                               ForestHyper hyper, std::uint64_t seed,
                               const PreprocessSpec& prep, unsigned workers) {
    if (y_train.cols != kLabelCount) {
        throw DataError("multilabel_fit: Y must have 8 columns in label order");
    }
    if (x_train.rows != y_train.rows) throw DataError("multilabel_fit: X/Y row mismatch");

    MultilabelModel model;
    model.preprocess = preprocess_fit(x_train, prep);
    const Matrix xt = model.preprocess.apply(x_train);

    model.forests.reserve(kLabelCount);
    for (std::size_t l = 0; l < kLabelCount; ++l) {
        std::vector<int> y(y_train.rows);
        for (std::size_t r = 0; r < y_train.rows; ++r) {
            y[r] = y_train.at(r, l) != 0.0 ? 1 : 0;
        }
        const std::uint64_t forest_seed = Rng::stream(seed, l).next();
        model.forests.push_back(forest_fit(xt, y, mode, hyper, forest_seed, workers));
        model.thresholds[l] = 0.5;
    }
    return model;
}

Matrix multilabel_predict_proba(const MultilabelModel& model, const Matrix& x) {
    const Matrix xt = model.preprocess.apply(x);
    Matrix proba(x.rows, kLabelCount);
    for (std::size_t l = 0; l < kLabelCount; ++l) {
        const auto p = forest_predict_proba(model.forests[l], xt);
        for (std::size_t r = 0; r < x.rows; ++r) proba.at(r, l) = p[r];
    }
    return proba;
}

std::vector<LabelSet> multilabel_predict(const MultilabelModel& model, const Matrix& x) {
    const Matrix proba = multilabel_predict_proba(model, x);
    std::vector<LabelSet> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t l = 0; l < kLabelCount; ++l) {
            out[r][l] = proba.at(r, l) >= model.thresholds[l];
        }
    }
    return out;
}

BaselineModel baseline_fit(const Matrix& y_train) {
    if (y_train.cols != kLabelCount) throw DataError("baseline_fit: Y must have 8 columns");
    if (y_train.rows == 0) throw DataError("baseline_fit: empty training labels");
    BaselineModel model;
    for (std::size_t l = 0; l < kLabelCount; ++l) {
        double sum = 0.0;
        for (std::size_t r = 0; r < y_train.rows; ++r) sum += y_train.at(r, l) != 0.0;
        model.frequency[l] = sum / static_cast<double>(y_train.rows);
    }
    return model;
}

std::vector<LabelSet> baseline_predict(const BaselineModel& model, std::size_t rows,
                                       std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabelSet> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t l = 0; l < kLabelCount; ++l) {
            out[r][l] = rng.unit() < model.frequency[l];
        }
    }
    return out;
}

// ---- persistence ------------------------------------------------------------

namespace {

using nlohmann::json;

json hyper_to_json(const ForestHyper& h) {
    json j;
    j["n_trees"] = h.n_trees;
    j["max_depth"] = h.max_depth;
    j["min_samples_leaf"] = h.min_samples_leaf;
    j["max_features"] = h.max_features;
    j["bootstrap"] = h.bootstrap ? json(*h.bootstrap) : json(nullptr);
    j["exhaustive_thresholds"] =
        h.exhaustive_thresholds ? json(*h.exhaustive_thresholds) : json(nullptr);
    return j;
}

ForestHyper hyper_from_json(const json& j) {
    ForestHyper h;
    h.n_trees = j.at("n_trees").get<std::size_t>();
    h.max_depth = j.at("max_depth").get<std::size_t>();
    h.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    h.max_features = j.at("max_features").get<std::size_t>();
    if (!j.at("bootstrap").is_null()) h.bootstrap = j.at("bootstrap").get<bool>();
    if (!j.at("exhaustive_thresholds").is_null()) {
        h.exhaustive_thresholds = j.at("exhaustive_thresholds").get<bool>();
    }
    return h;
}

json forest_to_json(const ForestModel& m) {
    json j;
    j["mode"] = std::string(to_string(m.mode));
    j["hyper"] = hyper_to_json(m.hyper);
    j["seed"] = m.seed;
    j["n_features"] = m.n_features;
    j["importance"] = m.importance;
    json trees = json::array();
    for (const Tree& tree : m.trees) {
        json nodes = json::array();
        for (const TreeNode& n : tree.nodes) {
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right,
                                         n.class_counts[0], n.class_counts[1]}));
        }
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j;
}

ForestModel forest_from_json(const json& j) {
    ForestModel m;
    m.mode = forest_mode_from_string(j.at("mode").get<std::string>());
    m.hyper = hyper_from_json(j.at("hyper"));
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.importance = j.at("importance").get<std::vector<double>>();
    for (const json& nodes : j.at("trees")) {
        Tree tree;
        tree.nodes.reserve(nodes.size());
        for (const json& n : nodes) {
            TreeNode node;
            node.feature = n.at(0).get<std::int32_t>();
            node.threshold = n.at(1).get<double>();
            node.left = n.at(2).get<std::int32_t>();
            node.right = n.at(3).get<std::int32_t>();
            node.class_counts = {n.at(4).get<double>(), n.at(5).get<double>()};
            tree.nodes.push_back(node);
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) throw ParseError("model: bad matrix payload");
    return m;
}

json preprocess_to_json(const Preprocess& p) {
    json j;
    if (p.scaler) {
        j["scaler"] = json{{"mean", p.scaler->mean}, {"stddev", p.scaler->stddev}};
    } else {
        j["scaler"] = nullptr;
    }
    if (p.pca) {
        j["pca"] = json{{"mean", p.pca->mean},
                        {"components", matrix_to_json(p.pca->components)},
                        {"explained_variance", p.pca->explained_variance}};
    } else {
        j["pca"] = nullptr;
    }
    return j;
}

Preprocess preprocess_from_json(const json& j) {
    Preprocess p;
    if (!j.at("scaler").is_null()) {
        ScalerModel s;
        s.mean = j["scaler"].at("mean").get<std::vector<double>>();
        s.stddev = j["scaler"].at("stddev").get<std::vector<double>>();
        p.scaler = std::move(s);
    }
    if (!j.at("pca").is_null()) {
        PcaModel m;
        m.mean = j["pca"].at("mean").get<std::vector<double>>();
        m.components = matrix_from_json(j["pca"].at("components"));
        m.explained_variance = j["pca"].at("explained_variance").get<std::vector<double>>();
        p.pca = std::move(m);
    }
    return p;
}

json load_model_json(const std::filesystem::path& path, const char* expected_kind) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ParseError("model file " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "seqlaw-model") {
        throw ParseError("not a model file: " + path.string());
    }
    if (expected_kind && j.value("kind", "") != expected_kind) {
        throw DataError("model kind mismatch in " + path.string() + ": expected " +
                        expected_kind + ", found " + j.value("kind", "?"));
    }
    return j;
}

void dump_model(const std::filesystem::path& path, const json& j) {
    write_text_file_atomic(path, j.dump(1, '\t') + "\n");
}

} // namespace

void save_model(const std::filesystem::path& path, const BinaryForestBundle& model) {
    json j;
    j["format"] = "seqlaw-model";
    j["version"] = 1;
    j["kind"] = "binary-forest";
    j["preprocess"] = preprocess_to_json(model.preprocess);
    j["forest"] = forest_to_json(model.forest);
    dump_model(path, j);
}

void save_model(const std::filesystem::path& path, const MultilabelModel& model) {
    json j;
    j["format"] = "seqlaw-model";
    j["version"] = 1;
    j["kind"] = "multilabel";
    j["preprocess"] = preprocess_to_json(model.preprocess);
    json forests = json::array();
    for (const ForestModel& f : model.forests) forests.push_back(forest_to_json(f));
    j["forests"] = std::move(forests);
    j["thresholds"] = model.thresholds;
    json labels = json::array();
    for (const auto& name : kLabelNames) labels.push_back(std::string(name));
    j["labels"] = std::move(labels);
    dump_model(path, j);
}

void save_model(const std::filesystem::path& path, const BaselineModel& model) {
    json j;
    j["format"] = "seqlaw-model";
    j["version"] = 1;
    j["kind"] = "baseline";
    j["frequency"] = model.frequency;
    dump_model(path, j);
}

std::string model_kind(const std::filesystem::path& path) {
    return load_model_json(path, nullptr).value("kind", "");
}

BinaryForestBundle load_binary_model(const std::filesystem::path& path) {
    const json j = load_model_json(path, "binary-forest");
    BinaryForestBundle m;
    m.preprocess = preprocess_from_json(j.at("preprocess"));
    m.forest = forest_from_json(j.at("forest"));
    return m;
}

MultilabelModel load_multilabel_model(const std::filesystem::path& path) {
    const json j = load_model_json(path, "multilabel");
    MultilabelModel m;
    m.preprocess = preprocess_from_json(j.at("preprocess"));
    for (const json& f : j.at("forests")) m.forests.push_back(forest_from_json(f));
    if (m.forests.size() != kLabelCount) throw ParseError("model: expected 8 forests");
    const auto thresholds = j.at("thresholds").get<std::vector<double>>();
    if (thresholds.size() != kLabelCount) throw ParseError("model: expected 8 thresholds");
    for (double t : thresholds) {
        if (!(t > 0.0 && t < 1.0)) {
            throw ParseError("model: decision thresholds must lie in (0,1)");
        }
    }
    std::copy(thresholds.begin(), thresholds.end(), m.thresholds.begin());
    return m;
}

BaselineModel load_baseline_model(const std::filesystem::path& path) {
    const json j = load_model_json(path, "baseline");
    BaselineModel m;
    const auto freq = j.at("frequency").get<std::vector<double>>();
    if (freq.size() != kLabelCount) throw ParseError("model: expected 8 frequencies");
    std::copy(freq.begin(), freq.end(), m.frequency.begin());
    return m;
}

} // namespace seqlaw
