#pragma once

#include "seqlaw/dataset.hpp"
#include "seqlaw/rng.hpp"
#include "seqlaw/sequence.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqlaw {

// Binary decision tree stored as a flat node pool; nodes[0] is the root.
// Internal nodes route x[feature] <= threshold to the left child.
struct TreeNode {
    std::int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::array<double, 2> class_counts{}; // leaf: training counts per class
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict_proba(std::span<const double> x) const;
};

enum class ForestMode { random_forest, extra_trees };

std::string_view to_string(ForestMode mode);
ForestMode forest_mode_from_string(std::string_view text);

struct ForestHyper {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;        // 0 = unlimited
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0;     // 0 = ceil(sqrt(n_features))
    // Overridable mode defaults: random_forest resamples with replacement and
    // scans every distinct threshold; extra_trees uses the full sample and one
    // uniform-random threshold per candidate feature.
    std::optional<bool> bootstrap;
    std::optional<bool> exhaustive_thresholds;
};

struct ForestModel {
    ForestMode mode = ForestMode::random_forest;
    ForestHyper hyper;
    std::uint64_t seed = 0;
    std::size_t n_features = 0;
    std::vector<Tree> trees;
    std::vector<double> importance; // normalized Gini impurity decrease
};

// Grow one tree. rng drives feature-subset (and extra-trees threshold)
// sampling; importance, when given, accumulates per-feature weighted
// impurity decreases.
Tree tree_fit(const Matrix& x, std::span<const int> y, const ForestHyper& hyper,
              bool exhaustive_thresholds, Rng& rng,
              std::vector<double>* importance = nullptr);

// y entries must be 0/1. Per-tree randomness comes from streams derived from
// seed, so results are independent of worker scheduling.
ForestModel forest_fit(const Matrix& x, std::span<const int> y, ForestMode mode,
                       ForestHyper hyper, std::uint64_t seed, unsigned workers = 0);

// Mean over trees of the leaf positive-class frequency, one value per row.
std::vector<double> forest_predict_proba(const ForestModel& model, const Matrix& x);

// Optional preprocessing fitted on training rows and replayed at prediction.
struct Preprocess {
    std::optional<ScalerModel> scaler;
    std::optional<PcaModel> pca;

    Matrix apply(const Matrix& x) const;
};

struct PreprocessSpec {
    bool use_scaler = false;
    bool use_pca = false;
    std::size_t pca_components = kFeatureCount;
};

Preprocess preprocess_fit(const Matrix& x_train, const PreprocessSpec& spec);

// Binary-relevance multilabel classifier: one forest per label in the frozen
// LabelSet order, sharing one preprocessing.
struct MultilabelModel {
    std::vector<ForestModel> forests; // kLabelCount entries
    std::array<double, kLabelCount> thresholds{};
    Preprocess preprocess;
};

MultilabelModel multilabel_fit(const Matrix& x_train, const Matrix& y_train, ForestMode mode,
                               ForestHyper hyper, std::uint64_t seed,
                               const PreprocessSpec& prep = {}, unsigned workers = 0);

std::vector<LabelSet> multilabel_predict(const MultilabelModel& model, const Matrix& x);
Matrix multilabel_predict_proba(const MultilabelModel& model, const Matrix& x);

// Random classifier matched to the training label frequencies.
struct BaselineModel {
    std::array<double, kLabelCount> frequency{};
};

BaselineModel baseline_fit(const Matrix& y_train);
std::vector<LabelSet> baseline_predict(const BaselineModel& model, std::size_t rows,
                                       std::uint64_t seed);

// ---- persistence -----------------------------------------------------------
//
// One self-describing JSON file per model. Loading reproduces bit-identical
// predictions.

struct BinaryForestBundle {
    ForestModel forest;
    Preprocess preprocess;
};

void save_model(const std::filesystem::path& path, const BinaryForestBundle& model);
void save_model(const std::filesystem::path& path, const MultilabelModel& model);
void save_model(const std::filesystem::path& path, const BaselineModel& model);

std::string model_kind(const std::filesystem::path& path);
BinaryForestBundle load_binary_model(const std::filesystem::path& path);
MultilabelModel load_multilabel_model(const std::filesystem::path& path);
BaselineModel load_baseline_model(const std::filesystem::path& path);

} // namespace seqlaw
