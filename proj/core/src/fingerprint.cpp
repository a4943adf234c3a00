#include "seqlaw/fingerprint.hpp"

#include "seqlaw/io.hpp"
#include "seqlaw/line_fit.hpp"
#include "seqlaw/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace seqlaw {

DigitDistribution digit_distribution(std::span<const BigInt> terms) {
    if (terms.empty()) throw DataError("digit_distribution: empty term list");
    std::array<std::size_t, 10> counts{};
    std::size_t positive = 0;
    for (const BigInt& t : terms) {
        counts[static_cast<std::size_t>(leading_digit(t))]++;
        if (t > 0) ++positive;
    }
    DigitDistribution d;
    const double n = static_cast<double>(terms.size());
    for (std::size_t i = 0; i < 10; ++i) d.b_d[i] = static_cast<double>(counts[i]) / n;
    d.p_z = static_cast<double>(positive) / n;
    return d;
}

BenfordReference benford_reference() {
    BenfordReference q;
    for (int i = 1; i <= 9; ++i) {
        q.b[i - 1] = std::log10((i + 1.0) / i);
    }
    return q;
}

std::array<double, 9> nonzero_digit_profile(const DigitDistribution& d) {
    double mass = 0.0;
    for (std::size_t i = 1; i < 10; ++i) mass += d.b_d[i];
    if (mass == 0.0) {
        throw UndefinedDistanceError("no nonzero terms: digit profile over 1..9 undefined");
    }
    std::array<double, 9> p{};
    for (std::size_t i = 1; i < 10; ++i) p[i - 1] = d.b_d[i] / mass;
    return p;
}

namespace {

double check_mass(const std::array<double, 9>& p) {
    double sum = 0.0;
    for (double v : p) sum += v;
    if (sum == 0.0) throw UndefinedDistanceError("distance undefined: p sums to 0");
    return sum;
}

} // namespace

double kl_divergence(const std::array<double, 9>& p, const BenfordReference& q) {
    check_mass(p);
    double kl = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q.b[i]);
    }
    return std::max(kl, 0.0);
}

double ks_statistic(const std::array<double, 9>& p, const BenfordReference& q) {
    check_mass(p);
    double cp = 0.0, cq = 0.0, ks = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        cp += p[i];
        cq += q.b[i];
        ks = std::max(ks, std::abs(cp - cq));
    }
    return ks;
}

double wasserstein_sorted(const std::array<double, 9>& p, const BenfordReference& q) {
    check_mass(p);
    std::array<double, 9> ps = p;
    std::array<double, 9> qs = q.b;
    std::sort(ps.begin(), ps.end());
    std::sort(qs.begin(), qs.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < 9; ++i) sum += std::abs(ps[i] - qs[i]);
    return sum / 9.0;
}

double total_variation(const DigitDistribution& d, const BenfordReference& q) {
    double sum = std::abs(d.b_d[0]); // q(0) = 0
    for (std::size_t i = 1; i < 10; ++i) sum += std::abs(d.b_d[i] - q.b[i - 1]);
    return 0.5 * sum;
}

TaylorFit taylor_features(std::span<const BigInt> terms) {
    const RunningMoments m = running_moments(terms);

    std::vector<double> xs, ys;
    xs.reserve(m.mu.size());
    ys.reserve(m.mu.size());
    for (std::size_t i = 1; i < m.mu.size(); ++i) { // n = i + 1 >= 2
        if (m.mu[i].is_positive() && m.var[i].is_positive()) {
            xs.push_back(m.mu[i].ln());
            ys.push_back(m.var[i].ln());
        }
    }

    TaylorFit fit;
    fit.n_points = xs.size();
    if (xs.size() < 2) {
        fit.degenerate = true;
        return fit;
    }
    try {
        const LineFit line = ols_fit(xs, ys);
        fit.s = line.slope;
        fit.intercept = line.intercept;
        fit.r = line.r;
    } catch (const DegenerateFitError&) {
        fit.degenerate = true;
        fit.s = fit.intercept = fit.r = 0.0;
    }
    return fit;
}

FeatureVector feature_vector(std::span<const BigInt> terms) {
    const TaylorFit t = taylor_features(terms);
    const DigitDistribution d = digit_distribution(terms);
    FeatureVector f{};
    f[0] = t.s;
    f[1] = t.intercept;
    f[2] = t.r;
    f[3] = d.p_z;
    for (std::size_t i = 0; i < 10; ++i) f[4 + i] = d.b_d[i];
    return f;
}

BenfordDistances benford_distances(const DigitDistribution& d) {
    const BenfordReference q = benford_reference();
    const std::array<double, 9> p = nonzero_digit_profile(d);
    BenfordDistances out;
    out.kl = kl_divergence(p, q);
    out.ks = ks_statistic(p, q);
    out.wd = wasserstein_sorted(p, q);
    out.tv = total_variation(d, q);
    return out;
}

FeatureRow fingerprint(const Sequence& seq) {
    FeatureRow row;
    row.id = seq.id;
    try {
        row.features = feature_vector(seq.terms);
        row.distances = benford_distances(digit_distribution(seq.terms));
    } catch (const UndefinedDistanceError& e) {
        throw UndefinedDistanceError(seq.id.value() + ": " + e.what());
    }
    return row;
}

std::vector<FeatureRow> fingerprint_corpus(std::span<const Sequence> corpus, unsigned workers) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, std::max<std::size_t>(corpus.size(), 1));

    std::vector<FeatureRow> rows(corpus.size());
    if (corpus.empty()) return rows;

    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= corpus.size()) return;
                    rows[i] = fingerprint(corpus[i]);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return rows;
}

void write_feature_table(const std::filesystem::path& path, std::span<const FeatureRow> rows) {
    std::string body = "id";
    for (const auto& name : kFeatureNames) {
        body += '\t';
        body += name;
    }
    body += "\tkl\tks\twd\ttv\n";
    for (const FeatureRow& row : rows) {
        body += row.id.value();
        for (double f : row.features) {
            body += '\t';
            body += format_g17(f);
        }
        for (double v : {row.distances.kl, row.distances.ks, row.distances.wd, row.distances.tv}) {
            body += '\t';
            body += format_g17(v);
        }
        body += '\n';
    }
    write_text_file_atomic(path, body);
}

std::vector<FeatureRow> read_feature_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature table: " + path.string());
    std::vector<FeatureRow> rows;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (first) { // header
            first = false;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, '\t')) fields.push_back(field);
        if (fields.size() != 1 + kFeatureCount + 4) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected " + std::to_string(1 + kFeatureCount + 4) +
                             " columns, got " + std::to_string(fields.size()));
        }
        FeatureRow row;
        row.id = SequenceId::parse(fields[0]);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            row.features[i] = std::stod(fields[1 + i]);
        }
        row.distances.kl = std::stod(fields[1 + kFeatureCount + 0]);
        row.distances.ks = std::stod(fields[1 + kFeatureCount + 1]);
        row.distances.wd = std::stod(fields[1 + kFeatureCount + 2]);
        row.distances.tv = std::stod(fields[1 + kFeatureCount + 3]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace seqlaw
