#include "seqlaw/evaluate.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace seqlaw {

namespace {

void check_shapes(const Matrix& y_true, const Matrix& y_pred) {
    if (y_true.rows != y_pred.rows || y_true.cols != y_pred.cols) {
        throw DataError("metrics: shape mismatch (" + std::to_string(y_true.rows) + "x" +
                        std::to_string(y_true.cols) + " vs " + std::to_string(y_pred.rows) +
                        "x" + std::to_string(y_pred.cols) + ")");
    }
}

} // namespace

double subset_accuracy(const Matrix& y_true, const Matrix& y_pred) {
    check_shapes(y_true, y_pred);
    if (y_true.rows == 0) throw DataError("subset_accuracy: empty matrices");
    std::size_t exact = 0;
    for (std::size_t r = 0; r < y_true.rows; ++r) {
        bool match = true;
        for (std::size_t c = 0; c < y_true.cols && match; ++c) {
            match = (y_true.at(r, c) != 0.0) == (y_pred.at(r, c) != 0.0);
        }
        exact += match;
    }
    return static_cast<double>(exact) / static_cast<double>(y_true.rows);
}

std::vector<LabelMetrics> per_label_metrics(const Matrix& y_true, const Matrix& y_pred) {
    check_shapes(y_true, y_pred);
    std::vector<LabelMetrics> out(y_true.cols);
    for (std::size_t c = 0; c < y_true.cols; ++c) {
        LabelMetrics& m = out[c];
        for (std::size_t r = 0; r < y_true.rows; ++r) {
            const bool t = y_true.at(r, c) != 0.0;
            const bool p = y_pred.at(r, c) != 0.0;
            if (t && p) ++m.tp;
            else if (!t && p) ++m.fp;
            else if (t && !p) ++m.fn;
            else ++m.tn;
        }
        m.support = m.tp + m.fn;
        m.precision = (m.tp + m.fp) == 0 ? 0.0
                      : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
        m.recall = (m.tp + m.fn) == 0 ? 0.0
                   : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
        m.f1 = (m.precision + m.recall) == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return out;
}

WeightedMetrics weighted_average(std::span<const LabelMetrics> metrics) {
    double total = 0.0;
    WeightedMetrics w;
    for (const LabelMetrics& m : metrics) {
        const double s = static_cast<double>(m.support);
        total += s;
        w.precision += s * m.precision;
        w.recall += s * m.recall;
        w.f1 += s * m.f1;
    }
    if (total == 0.0) throw DataError("weighted_average: total support is 0");
    w.precision /= total;
    w.recall /= total;
    w.f1 /= total;
    return w;
}

Report make_report(const Matrix& y_true, const Matrix& y_pred,
                   std::string model_id, std::string dataset_id,
                   std::vector<std::string> label_names) {
    Report rep;
    rep.model_id = std::move(model_id);
    rep.dataset_id = std::move(dataset_id);
    rep.subset_accuracy = subset_accuracy(y_true, y_pred);
    rep.label_names = std::move(label_names);
    if (rep.label_names.empty()) {
        if (y_true.cols == kLabelCount) {
            for (const auto& name : kLabelNames) rep.label_names.emplace_back(name);
        } else {
            for (std::size_t c = 0; c < y_true.cols; ++c) {
                rep.label_names.push_back("label" + std::to_string(c));
            }
        }
    }
    if (rep.label_names.size() != y_true.cols) {
        throw DataError("make_report: label name count mismatch");
    }
    rep.per_label = per_label_metrics(y_true, y_pred);
    const WeightedMetrics w = weighted_average(rep.per_label);
    rep.weighted_precision = w.precision;
    rep.weighted_recall = w.recall;
    rep.weighted_f1 = w.f1;
    return rep;
}

void write_report(const std::filesystem::path& text_path,
                  const std::filesystem::path& json_path, const Report& report) {
    std::ostringstream text;
    text << "model:   " << report.model_id << "\n";
    text << "dataset: " << report.dataset_id << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "subset accuracy: %.4f\n\n", report.subset_accuracy);
    text << line;
    text << "label       precision  recall     f1         support\n";
    for (std::size_t l = 0; l < report.per_label.size(); ++l) {
        const LabelMetrics& m = report.per_label[l];
        std::snprintf(line, sizeof line, "%-11s %-10.4f %-10.4f %-10.4f %llu\n",
                      report.label_names[l].c_str(), m.precision, m.recall, m.f1,
                      static_cast<unsigned long long>(m.support));
        text << line;
    }
    std::snprintf(line, sizeof line,
                  "\nweighted    %-10.4f %-10.4f %-10.4f\n", report.weighted_precision,
                  report.weighted_recall, report.weighted_f1);
    text << line;
    write_text_file_atomic(text_path, text.str());

    nlohmann::json j;
    j["model"] = report.model_id;
    j["dataset"] = report.dataset_id;
    j["subset_accuracy"] = report.subset_accuracy;
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t l = 0; l < report.per_label.size(); ++l) {
        const LabelMetrics& m = report.per_label[l];
        labels.push_back({{"label", report.label_names[l]},
                          {"tp", m.tp},
                          {"fp", m.fp},
                          {"fn", m.fn},
                          {"tn", m.tn},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"support", m.support}});
    }
    j["per_label"] = std::move(labels);
    j["weighted"] = {{"precision", report.weighted_precision},
                     {"recall", report.weighted_recall},
                     {"f1", report.weighted_f1}};
    write_text_file_atomic(json_path, j.dump(1, '\t') + "\n");
}

Report read_report_json(const std::filesystem::path& json_path) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(json_path));
    Report rep;
    rep.model_id = j.at("model").get<std::string>();
    rep.dataset_id = j.at("dataset").get<std::string>();
    rep.subset_accuracy = j.at("subset_accuracy").get<double>();
    for (const auto& m : j.at("per_label")) {
        rep.label_names.push_back(m.at("label").get<std::string>());
        LabelMetrics lm;
        lm.tp = m.at("tp").get<std::uint64_t>();
        lm.fp = m.at("fp").get<std::uint64_t>();
        lm.fn = m.at("fn").get<std::uint64_t>();
        lm.tn = m.at("tn").get<std::uint64_t>();
        lm.precision = m.at("precision").get<double>();
        lm.recall = m.at("recall").get<double>();
        lm.f1 = m.at("f1").get<double>();
        lm.support = m.at("support").get<std::uint64_t>();
        rep.per_label.push_back(lm);
    }
    rep.weighted_precision = j.at("weighted").at("precision").get<double>();
    rep.weighted_recall = j.at("weighted").at("recall").get<double>();
    rep.weighted_f1 = j.at("weighted").at("f1").get<double>();
    return rep;
}

// ---- plot-data export -------------------------------------------------------

namespace {

void write_indexed_column(const std::filesystem::path& path,
                          std::span<const FeatureRow> rows, const char* column,
                          double BenfordDistances::*member) {
    std::string body = "index\tid\t";
    body += column;
    body += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        body += std::to_string(i);
        body += '\t';
        body += rows[i].id.value();
        body += '\t';
        body += format_g17(rows[i].distances.*member);
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

} // namespace

void export_fig1_distances(const std::filesystem::path& dir, std::span<const FeatureRow> rows) {
    std::filesystem::create_directories(dir);
    write_indexed_column(dir / "fig1_kl.tsv", rows, "kl", &BenfordDistances::kl);
    write_indexed_column(dir / "fig1_ks.tsv", rows, "ks", &BenfordDistances::ks);
    write_indexed_column(dir / "fig1_wd.tsv", rows, "wd", &BenfordDistances::wd);
    write_indexed_column(dir / "fig1_tv.tsv", rows, "tv", &BenfordDistances::tv);
}

void export_fig2_correlation(const std::filesystem::path& dir, std::span<const FeatureRow> rows) {
    std::filesystem::create_directories(dir);
    std::string body = "index\tid\tr\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        body += std::to_string(i);
        body += '\t';
        body += rows[i].id.value();
        body += '\t';
        body += format_g17(rows[i].features[2]);
        body += '\n';
    }
    write_text_file_atomic(dir / "fig2.tsv", body);
}

std::vector<Point> taylor_scatter(std::span<const FeatureRow> rows) {
    std::vector<Point> pts;
    pts.reserve(rows.size());
    for (const FeatureRow& row : rows) {
        pts.push_back(Point{row.features[2], row.features[0]}); // (r, s)
    }
    return pts;
}

void export_fig3_ransac(const std::filesystem::path& dir, std::span<const FeatureRow> rows,
                        const RansacFit& fit) {
    std::filesystem::create_directories(dir);
    std::string body = "# ransac slope=" + format_g17(fit.slope) +
                       " intercept=" + format_g17(fit.intercept) +
                       " inlier_r=" + format_g17(fit.inlier_fit.r) +
                       " inliers=" + std::to_string(fit.inlier_count()) + "/" +
                       std::to_string(fit.inlier_mask.size()) + "\n";
    body += "r\ts\tinlier\tid\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        body += format_g17(rows[i].features[2]);
        body += '\t';
        body += format_g17(rows[i].features[0]);
        body += '\t';
        body += fit.inlier_mask[i] ? '1' : '0';
        body += '\t';
        body += rows[i].id.value();
        body += '\n';
    }
    write_text_file_atomic(dir / "fig3.tsv", body);
}

void export_fig5_overall(const std::filesystem::path& dir, std::span<const Report> reports) {
    std::filesystem::create_directories(dir);
    std::string body = "model\tmetric\tvalue\n";
    for (const Report& rep : reports) {
        body += rep.model_id + "\tsubset_accuracy\t" + format_g17(rep.subset_accuracy) + "\n";
        body += rep.model_id + "\tprecision\t" + format_g17(rep.weighted_precision) + "\n";
        body += rep.model_id + "\trecall\t" + format_g17(rep.weighted_recall) + "\n";
        body += rep.model_id + "\tf1\t" + format_g17(rep.weighted_f1) + "\n";
    }
    write_text_file_atomic(dir / "fig5.tsv", body);
}

void export_fig6_per_label(const std::filesystem::path& dir, const Report& report) {
    std::filesystem::create_directories(dir);
    std::string body = "label\tprecision\trecall\tf1\tsupport\n";
    for (std::size_t l = 0; l < report.per_label.size(); ++l) {
        const LabelMetrics& m = report.per_label[l];
        body += report.label_names[l];
        body += '\t';
        body += format_g17(m.precision);
        body += '\t';
        body += format_g17(m.recall);
        body += '\t';
        body += format_g17(m.f1);
        body += '\t';
        body += std::to_string(m.support);
        body += '\n';
    }
    write_text_file_atomic(dir / ("fig6_" + report.model_id + ".tsv"), body);
}

} // namespace seqlaw
