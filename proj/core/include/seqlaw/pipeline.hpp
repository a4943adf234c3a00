#pragma once

#include "seqlaw/corpus.hpp"
#include "seqlaw/dataset.hpp"
#include "seqlaw/evaluate.hpp"
#include "seqlaw/fingerprint.hpp"
#include "seqlaw/learn.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace seqlaw {

// One declarative configuration drives the whole experiment. Every random
// decision derives from the single seed via fixed stream tags, so identical
// configurations over identical inputs give byte-identical artifacts.
struct RunConfig {
    // corpus sources
    std::filesystem::path stripped_path;
    std::filesystem::path bfile_dir;
    std::filesystem::path entries_dir;
    std::filesystem::path names_path; // label fallback when entry records are absent
    std::size_t min_terms = 990;
    std::optional<std::size_t> sample_size;

    // synthetic negatives
    std::size_t random_count = 200;
    std::size_t random_length = 2000;
    std::int64_t random_lo = 0;
    std::int64_t random_hi = 1000000;

    SplitFractions fractions;

    double ransac_threshold = 0.05;
    std::size_t ransac_iterations = 2000;

    // tree-ensemble configuration
    std::size_t binary_trees = 665;
    std::size_t keywords_rf_trees = 744;
    std::size_t keywords_extra_trees = 1059;
    std::size_t max_depth = 0;
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0;

    // preprocessing per task
    bool binary_use_scaler = true;
    bool binary_use_pca = true;
    std::size_t binary_pca_components = kFeatureCount;
    bool keywords_use_scaler = true;
    bool keywords_use_pca = false;
    std::size_t keywords_pca_components = kFeatureCount;

    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::filesystem::path out_dir = "out";

    // Stage-scoped random streams derived from the one config seed.
    enum Stream : std::uint64_t {
        kSampleStream = 1,
        kRandomStream = 2,
        kSplitStream = 3,
        kRansacStream = 4,
        kBinaryTrainStream = 5,
        kKeywordsRfStream = 6,
        kKeywordsExtraStream = 7,
        kBaselineStream = 8,
    };
    std::uint64_t stream_seed(Stream stream) const;

    // Artifact layout under out_dir.
    std::filesystem::path manifest_path() const { return out_dir / "corpus.tsv"; }
    std::filesystem::path features_path() const { return out_dir / "features.tsv"; }
    std::filesystem::path ransac_path() const { return out_dir / "ransac.json"; }
    std::filesystem::path dataset_dir() const { return out_dir / "dataset"; }
    std::filesystem::path models_dir() const { return out_dir / "models"; }
    std::filesystem::path reports_dir() const { return out_dir / "reports"; }
    std::filesystem::path figs_dir() const { return out_dir / "figs"; }
};

RunConfig config_from_json_text(const std::string& text);
RunConfig config_from_json_file(const std::filesystem::path& path);
std::string config_to_json_text(const RunConfig& config);
void config_to_json_file(const std::filesystem::path& path, const RunConfig& config);

// Stages read their inputs from files written by the previous stage, so each
// can run standalone. Errors carry a "stage <name>:" prefix.
void stage_ingest(const RunConfig& config);
void stage_features(const RunConfig& config);
RansacFit stage_ransac(const RunConfig& config);
void stage_make_dataset(const RunConfig& config);
void stage_train(const RunConfig& config, Task task, const std::string& mode);
void stage_evaluate(const RunConfig& config);
void stage_export_figs(const RunConfig& config);

// Full run: ingest -> features -> ransac -> make-dataset -> train (all
// models) -> evaluate -> export-figs. While running, <out_dir>/.incomplete
// marks partial output; it is removed on success.
void run_pipeline(const RunConfig& config);

// Model file naming shared by train/evaluate/export.
std::string model_file_name(Task task, const std::string& mode);

} // namespace seqlaw
