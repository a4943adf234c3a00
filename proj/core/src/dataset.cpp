#include "seqlaw/dataset.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace seqlaw {

std::vector<Sequence> generate_random_sequences(std::size_t count, std::size_t length,
                                                std::int64_t lo, std::int64_t hi,
                                                std::uint64_t seed, unsigned id_base) {
    if (length < 1) throw ConfigError("random sequences: length must be >= 1");
    if (lo >= hi) throw ConfigError("random sequences: need lo < hi");
    if (id_base + count > 1000000) {
        throw ConfigError("random sequences: id block exceeds A999999");
    }
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);

    std::vector<Sequence> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, i);
        Sequence seq;
        seq.id = SequenceId::from_number(id_base + static_cast<unsigned>(i));
        seq.source = SequenceSource::synthetic;
        seq.terms.reserve(length);
        for (std::size_t j = 0; j < length; ++j) {
            const std::int64_t v =
                static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + rng.below(range));
            seq.terms.emplace_back(v);
        }
        out.push_back(std::move(seq));
    }
    return out;
}

std::string_view to_string(SplitTag tag) {
    switch (tag) {
        case SplitTag::train: return "train";
        case SplitTag::validation: return "validation";
        case SplitTag::test: return "test";
    }
    return "unknown";
}

SplitTag split_tag_from_string(std::string_view text) {
    if (text == "train") return SplitTag::train;
    if (text == "validation") return SplitTag::validation;
    if (text == "test") return SplitTag::test;
    throw ParseError("unknown split tag: '" + std::string(text) + "'");
}

std::vector<SplitTag> split_rows(std::size_t rows, SplitFractions f, std::uint64_t seed) {
    const double parts[3] = {f.train, f.validation, f.test};
    double sum = 0.0;
    for (double p : parts) {
        if (p < 0.0) throw ConfigError("split: fractions must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split: fractions must sum to 1");

    std::size_t counts[3];
    for (int k = 0; k < 3; ++k) {
        counts[k] = static_cast<std::size_t>(std::floor(parts[k] * static_cast<double>(rows)));
    }
    std::size_t assigned = counts[0] + counts[1] + counts[2];
    for (int k = 0; assigned < rows; k = (k + 1) % 3) {
        if (parts[k] > 0.0) {
            ++counts[k];
            ++assigned;
        }
    }

    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = rows; i > 1; --i) { // Fisher-Yates
        const std::size_t j = rng.index(i);
        std::swap(order[i - 1], order[j]);
    }

    std::vector<SplitTag> tags(rows, SplitTag::train);
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        for (std::size_t c = 0; c < counts[k]; ++c) {
            tags[order[pos++]] = static_cast<SplitTag>(k);
        }
    }
    return tags;
}

ScalerModel scaler_fit(const Matrix& x_train) {
    if (x_train.rows == 0) throw DataError("scaler_fit: empty training matrix");
    ScalerModel m;
    m.mean.assign(x_train.cols, 0.0);
    m.stddev.assign(x_train.cols, 0.0);
    const double n = static_cast<double>(x_train.rows);
    for (std::size_t c = 0; c < x_train.cols; ++c) {
        double mu = 0.0;
        for (std::size_t r = 0; r < x_train.rows; ++r) mu += x_train.at(r, c);
        mu /= n;
        double ss = 0.0;
        for (std::size_t r = 0; r < x_train.rows; ++r) {
            const double d = x_train.at(r, c) - mu;
            ss += d * d;
        }
        m.mean[c] = mu;
        m.stddev[c] = std::sqrt(ss / n);
    }
    return m;
}

Matrix scaler_apply(const ScalerModel& model, const Matrix& x) {
    if (x.cols != model.mean.size()) throw DataError("scaler_apply: column count mismatch");
    Matrix out(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double s = model.stddev[c];
            out.at(r, c) = s == 0.0 ? 0.0 : (x.at(r, c) - model.mean[c]) / s;
        }
    }
    return out;
}

namespace {

// Cyclic Jacobi eigendecomposition for a symmetric matrix. a is overwritten;
// v receives orthonormal eigenvectors as columns.
void jacobi_eigen(Matrix& a, Matrix& v, std::vector<double>& eig) {
    const std::size_t d = a.rows;
    v = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i) v.at(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) off += a.at(p, q) * a.at(p, q);
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a.at(k, p);
                    const double akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a.at(p, k);
                    const double aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v.at(k, p);
                    const double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eig.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        eig[i] = a.at(i, i);
        if (!std::isfinite(eig[i])) throw DataError("pca_fit: eigendecomposition failed");
    }
}

} // namespace

PcaModel pca_fit(const Matrix& x, std::size_t k) {
    if (x.rows < 2) throw DataError("pca_fit: need at least 2 rows");
    if (k < 1 || k > x.cols) throw ConfigError("pca_fit: k out of range");

    PcaModel m;
    m.mean.assign(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) m.mean[c] += x.at(r, c);
    }
    for (double& v : m.mean) v /= static_cast<double>(x.rows);

    Matrix cov(x.cols, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t i = 0; i < x.cols; ++i) {
            const double di = x.at(r, i) - m.mean[i];
            for (std::size_t j = i; j < x.cols; ++j) {
                cov.at(i, j) += di * (x.at(r, j) - m.mean[j]);
            }
        }
    }
    const double denom = static_cast<double>(x.rows - 1);
    for (std::size_t i = 0; i < x.cols; ++i) {
        for (std::size_t j = i; j < x.cols; ++j) {
            cov.at(i, j) /= denom;
            cov.at(j, i) = cov.at(i, j);
        }
    }

    Matrix vecs;
    std::vector<double> eig;
    jacobi_eigen(cov, vecs, eig);

    std::vector<std::size_t> order(x.cols);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return eig[a] > eig[b]; });

    m.components = Matrix(k, x.cols);
    m.explained_variance.assign(k, 0.0);
    for (std::size_t out = 0; out < k; ++out) {
        const std::size_t src = order[out];
        m.explained_variance[out] = eig[src];
        // Sign convention: the largest-magnitude coordinate is positive.
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double a = std::abs(vecs.at(c, src));
            if (a > best) {
                best = a;
                arg = c;
            }
        }
        const double sign = vecs.at(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            m.components.at(out, c) = sign * vecs.at(c, src);
        }
    }
    return m;
}

Matrix pca_apply(const PcaModel& model, const Matrix& x) {
    if (x.cols != model.mean.size()) throw DataError("pca_apply: column count mismatch");
    const std::size_t k = model.components.rows;
    Matrix out(x.rows, k);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t j = 0; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < x.cols; ++c) {
                dot += (x.at(r, c) - model.mean[c]) * model.components.at(j, c);
            }
            out.at(r, j) = dot;
        }
    }
    return out;
}

// ---- tables ---------------------------------------------------------------

void write_label_table(const std::filesystem::path& path, std::span<const LabeledRow> rows) {
    std::string body = "id";
    for (const auto& name : kLabelNames) {
        body += '\t';
        body += name;
    }
    body += '\n';
    for (const LabeledRow& row : rows) {
        body += row.id.value();
        for (bool b : row.labels.flags) {
            body += '\t';
            body += b ? '1' : '0';
        }
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

std::vector<LabeledRow> read_label_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open label table: " + path.string());
    std::vector<LabeledRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, '\t')) fields.push_back(field);
        if (fields.size() != 1 + kLabelCount) {
            throw ParseError("label table row needs " + std::to_string(1 + kLabelCount) +
                             " columns: '" + line.substr(0, 60) + "'");
        }
        LabeledRow row;
        row.id = SequenceId::parse(fields[0]);
        for (std::size_t i = 0; i < kLabelCount; ++i) {
            if (fields[1 + i] != "0" && fields[1 + i] != "1") {
                throw ParseError("label table: binary column expected, got '" + fields[1 + i] + "'");
            }
            row.labels[i] = fields[1 + i] == "1";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_binary_table(const std::filesystem::path& path,
                        std::span<const std::pair<SequenceId, bool>> rows) {
    std::string body = "id\toeis\n";
    for (const auto& [id, is_oeis] : rows) {
        body += id.value();
        body += '\t';
        body += is_oeis ? '1' : '0';
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

std::vector<std::pair<SequenceId, bool>> read_binary_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open binary table: " + path.string());
    std::vector<std::pair<SequenceId, bool>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("binary table: missing tab");
        rows.emplace_back(SequenceId::parse(std::string_view(line).substr(0, tab)),
                          line.substr(tab + 1) == "1");
    }
    return rows;
}

void write_split_table(const std::filesystem::path& path,
                       std::span<const SequenceId> ids, std::span<const SplitTag> tags) {
    if (ids.size() != tags.size()) throw DataError("split table: length mismatch");
    std::string body = "id\tsplit\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        body += ids[i].value();
        body += '\t';
        body += to_string(tags[i]);
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

std::vector<std::pair<SequenceId, SplitTag>> read_split_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open split table: " + path.string());
    std::vector<std::pair<SequenceId, SplitTag>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("split table: missing tab");
        rows.emplace_back(SequenceId::parse(std::string_view(line).substr(0, tab)),
                          split_tag_from_string(std::string_view(line).substr(tab + 1)));
    }
    return rows;
}

Task task_from_string(std::string_view text) {
    if (text == "oeis-vs-random") return Task::oeis_vs_random;
    if (text == "keywords") return Task::keywords;
    throw ConfigError("unknown task: '" + std::string(text) + "'");
}

std::string_view to_string(Task task) {
    return task == Task::oeis_vs_random ? "oeis-vs-random" : "keywords";
}

TaskData load_task_data(const std::filesystem::path& dataset_dir, Task task) {
    const auto features = read_feature_table(dataset_dir / "features.tsv");
    const auto splits = read_split_table(dataset_dir / "split.tsv");

    std::map<SequenceId, SplitTag> split_by_id(splits.begin(), splits.end());

    TaskData data;
    if (task == Task::oeis_vs_random) {
        const auto binary = read_binary_table(dataset_dir / "binary.tsv");
        std::map<SequenceId, bool> y_by_id(binary.begin(), binary.end());
        data.y = Matrix(0, 1);
        for (const FeatureRow& row : features) {
            auto yit = y_by_id.find(row.id);
            auto sit = split_by_id.find(row.id);
            if (yit == y_by_id.end() || sit == split_by_id.end()) continue;
            data.ids.push_back(row.id);
            data.split.push_back(sit->second);
            data.y.data.push_back(yit->second ? 1.0 : 0.0);
        }
        data.y.rows = data.ids.size();
    } else {
        const auto labels = read_label_table(dataset_dir / "labels.tsv");
        std::map<SequenceId, LabelSet> y_by_id;
        for (const auto& row : labels) y_by_id.emplace(row.id, row.labels);
        data.y = Matrix(0, kLabelCount);
        for (const FeatureRow& row : features) {
            auto yit = y_by_id.find(row.id);
            auto sit = split_by_id.find(row.id);
            if (yit == y_by_id.end() || sit == split_by_id.end()) continue;
            data.ids.push_back(row.id);
            data.split.push_back(sit->second);
            for (std::size_t l = 0; l < kLabelCount; ++l) {
                data.y.data.push_back(yit->second[l] ? 1.0 : 0.0);
            }
        }
        data.y.rows = data.ids.size();
    }

    std::map<SequenceId, const FeatureRow*> feat_by_id;
    for (const FeatureRow& row : features) feat_by_id.emplace(row.id, &row);
    data.x = Matrix(data.ids.size(), kFeatureCount);
    for (std::size_t r = 0; r < data.ids.size(); ++r) {
        const FeatureRow* row = feat_by_id.at(data.ids[r]);
        for (std::size_t c = 0; c < kFeatureCount; ++c) data.x.at(r, c) = row->features[c];
    }
    return data;
}

TaskData filter_split(const TaskData& data, SplitTag tag) {
    TaskData out;
    out.x = Matrix(0, data.x.cols);
    out.y = Matrix(0, data.y.cols);
    for (std::size_t r = 0; r < data.ids.size(); ++r) {
        if (data.split[r] != tag) continue;
        out.ids.push_back(data.ids[r]);
        out.split.push_back(tag);
        for (std::size_t c = 0; c < data.x.cols; ++c) out.x.data.push_back(data.x.at(r, c));
        for (std::size_t c = 0; c < data.y.cols; ++c) out.y.data.push_back(data.y.at(r, c));
    }
    out.x.rows = out.ids.size();
    out.y.rows = out.ids.size();
    return out;
}

} // namespace seqlaw
