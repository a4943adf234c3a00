#pragma once

#include "seqlaw/fingerprint.hpp"
#include "seqlaw/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace seqlaw {

// Dense row-major matrix, just enough linear algebra for this toolkit.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data).subspan(r * cols, cols);
    }
};

// Uniform random integer sequences with terms in [lo, hi), deterministic for
// a fixed seed. Ids are allocated from a reserved block so they cannot
// collide with real OEIS identifiers.
std::vector<Sequence> generate_random_sequences(std::size_t count, std::size_t length,
                                                std::int64_t lo, std::int64_t hi,
                                                std::uint64_t seed,
                                                unsigned id_base = 900000);

enum class SplitTag { train, validation, test };

std::string_view to_string(SplitTag tag);
SplitTag split_tag_from_string(std::string_view text);

struct SplitFractions {
    double train = 0.8;
    double validation = 0.0;
    double test = 0.2;
};

// Random partition of row indices: sizes are floors of rows*fraction with the
// remainder handed out in train/validation/test order.
std::vector<SplitTag> split_rows(std::size_t rows, SplitFractions fractions, std::uint64_t seed);

// Column-wise standardization fitted on training rows only. Uses the
// population standard deviation; zero-variance columns transform to 0.
struct ScalerModel {
    std::vector<double> mean;
    std::vector<double> stddev; // 0 marks a zero-variance column
};

ScalerModel scaler_fit(const Matrix& x_train);
Matrix scaler_apply(const ScalerModel& model, const Matrix& x);

struct PcaModel {
    std::vector<double> mean;
    Matrix components;                      // k x d, orthonormal rows
    std::vector<double> explained_variance; // non-increasing
};

// Eigenvectors of the sample covariance (divisor n-1), ordered by descending
// eigenvalue. Eigenvector signs are fixed so runs are byte-reproducible.
PcaModel pca_fit(const Matrix& x, std::size_t k);
Matrix pca_apply(const PcaModel& model, const Matrix& x);

// ---- dataset assembly & persistence -------------------------------------

struct LabeledRow {
    SequenceId id;
    LabelSet labels;
};

// Table files live in one dataset directory, joined by id:
//   features.tsv  id + 14 features + 4 distances (all rows)
//   labels.tsv    id + 8 binary keyword columns  (OEIS rows only)
//   binary.tsv    id + 1 binary column, 1 = OEIS, 0 = synthetic
//   split.tsv     id + train/validation/test tag (all rows)
void write_label_table(const std::filesystem::path& path, std::span<const LabeledRow> rows);
std::vector<LabeledRow> read_label_table(const std::filesystem::path& path);

void write_binary_table(const std::filesystem::path& path,
                        std::span<const std::pair<SequenceId, bool>> rows);
std::vector<std::pair<SequenceId, bool>> read_binary_table(const std::filesystem::path& path);

void write_split_table(const std::filesystem::path& path,
                       std::span<const SequenceId> ids, std::span<const SplitTag> tags);
std::vector<std::pair<SequenceId, SplitTag>> read_split_table(const std::filesystem::path& path);

// One task's rows materialized for training/evaluation.
struct TaskData {
    std::vector<SequenceId> ids;
    Matrix x;                    // n x 14
    Matrix y;                    // n x 1 (binary) or n x 8 (keywords)
    std::vector<SplitTag> split;
};

enum class Task { oeis_vs_random, keywords };

Task task_from_string(std::string_view text);
std::string_view to_string(Task task);

TaskData load_task_data(const std::filesystem::path& dataset_dir, Task task);

// Row selection helpers.
TaskData filter_split(const TaskData& data, SplitTag tag);

} // namespace seqlaw
