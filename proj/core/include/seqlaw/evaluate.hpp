#pragma once

#include "seqlaw/dataset.hpp"
#include "seqlaw/fingerprint.hpp"
#include "seqlaw/line_fit.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace seqlaw {

// Per-label confusion counts and derived scores. Undefined ratios are 0:
// precision when tp+fp = 0, recall when tp+fn = 0, and f1 when
// precision+recall = 0.
struct LabelMetrics {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0; // tp + fn
};

struct Report {
    std::string model_id;
    std::string dataset_id;
    double subset_accuracy = 0.0;
    std::vector<std::string> label_names;
    std::vector<LabelMetrics> per_label;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
};

// Fraction of rows whose full label vector matches exactly. Y matrices hold
// 0/1 values, one column per label.
double subset_accuracy(const Matrix& y_true, const Matrix& y_pred);

std::vector<LabelMetrics> per_label_metrics(const Matrix& y_true, const Matrix& y_pred);

struct WeightedMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Support-weighted means; throws DataError when total support is 0.
WeightedMetrics weighted_average(std::span<const LabelMetrics> metrics);

Report make_report(const Matrix& y_true, const Matrix& y_pred,
                   std::string model_id, std::string dataset_id,
                   std::vector<std::string> label_names = {});

// Human-readable table plus machine-readable JSON, side by side.
void write_report(const std::filesystem::path& text_path,
                  const std::filesystem::path& json_path, const Report& report);
Report read_report_json(const std::filesystem::path& json_path);

// ---- plot-data export -------------------------------------------------------
//
// Delimited text files, one per figure family:
//   fig1_kl/ks/wd/tv.tsv  sequence index vs distance
//   fig2.tsv              sequence index vs Taylor correlation r
//   fig3.tsv              (r, s) scatter with inlier flags; fitted line in header
//   fig5.tsv              model, metric, value
//   fig6_<model>.tsv      label, precision, recall, f1

void export_fig1_distances(const std::filesystem::path& dir, std::span<const FeatureRow> rows);
void export_fig2_correlation(const std::filesystem::path& dir, std::span<const FeatureRow> rows);
void export_fig3_ransac(const std::filesystem::path& dir, std::span<const FeatureRow> rows,
                        const RansacFit& fit);
void export_fig5_overall(const std::filesystem::path& dir, std::span<const Report> reports);
void export_fig6_per_label(const std::filesystem::path& dir, const Report& report);

// (r, s) scatter used for the slope-2 line fit.
std::vector<Point> taylor_scatter(std::span<const FeatureRow> rows);

} // namespace seqlaw
