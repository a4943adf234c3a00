#include "seqlaw/pipeline.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/oeis_parse.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/rng.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace seqlaw {

namespace {

using nlohmann::json;

// Rethrow preserving the concrete error type where it matters for exit codes.
template <typename Fn>
auto with_stage_any(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + std::string(stage) + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError("stage " + std::string(stage) + ": " + e.what());
    } catch (const UndefinedDistanceError& e) {
        throw UndefinedDistanceError("stage " + std::string(stage) + ": " + e.what());
    } catch (const DegenerateFitError& e) {
        throw DegenerateFitError("stage " + std::string(stage) + ": " + e.what());
    } catch (const NotFoundError& e) {
        throw NotFoundError("stage " + std::string(stage) + ": " + e.what());
    } catch (const NetworkError& e) {
        throw NetworkError("stage " + std::string(stage) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + std::string(stage) + ": " + e.what());
    } catch (const Error& e) {
        throw Error("stage " + std::string(stage) + ": " + e.what());
    }
}

} // namespace

std::uint64_t RunConfig::stream_seed(Stream stream) const {
    return Rng::stream(seed, static_cast<std::uint64_t>(stream)).next();
}

// ---- configuration ------------------------------------------------------------

std::string config_to_json_text(const RunConfig& c) {
    json j;
    j["corpus"] = {{"stripped", c.stripped_path.string()},
                   {"bfile_dir", c.bfile_dir.string()},
                   {"entries_dir", c.entries_dir.string()},
                   {"names", c.names_path.string()},
                   {"min_terms", c.min_terms},
                   {"sample_size", c.sample_size ? json(*c.sample_size) : json(nullptr)}};
    j["random"] = {{"count", c.random_count},
                   {"length", c.random_length},
                   {"lo", c.random_lo},
                   {"hi", c.random_hi}};
    j["split"] = {{"train", c.fractions.train},
                  {"validation", c.fractions.validation},
                  {"test", c.fractions.test}};
    j["ransac"] = {{"threshold", c.ransac_threshold}, {"iterations", c.ransac_iterations}};
    j["models"] = {{"binary_trees", c.binary_trees},
                   {"keywords_rf_trees", c.keywords_rf_trees},
                   {"keywords_extra_trees", c.keywords_extra_trees},
                   {"max_depth", c.max_depth},
                   {"min_samples_leaf", c.min_samples_leaf},
                   {"max_features", c.max_features}};
    j["preprocess"] = {{"binary_scaler", c.binary_use_scaler},
                       {"binary_pca", c.binary_use_pca},
                       {"binary_pca_components", c.binary_pca_components},
                       {"keywords_scaler", c.keywords_use_scaler},
                       {"keywords_pca", c.keywords_use_pca},
                       {"keywords_pca_components", c.keywords_pca_components}};
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir.string();
    return j.dump(1, '\t') + "\n";
}

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("corpus")) {
            const json& s = j["corpus"];
            c.stripped_path = s.value("stripped", std::string{});
            c.bfile_dir = s.value("bfile_dir", std::string{});
            c.entries_dir = s.value("entries_dir", std::string{});
            c.names_path = s.value("names", std::string{});
            c.min_terms = s.value("min_terms", c.min_terms);
            if (s.contains("sample_size") && !s["sample_size"].is_null()) {
                c.sample_size = s["sample_size"].get<std::size_t>();
            }
        }
        if (j.contains("random")) {
            const json& s = j["random"];
            c.random_count = s.value("count", c.random_count);
            c.random_length = s.value("length", c.random_length);
            c.random_lo = s.value("lo", c.random_lo);
            c.random_hi = s.value("hi", c.random_hi);
        }
        if (j.contains("split")) {
            const json& s = j["split"];
            c.fractions.train = s.value("train", c.fractions.train);
            c.fractions.validation = s.value("validation", c.fractions.validation);
            c.fractions.test = s.value("test", c.fractions.test);
        }
        if (j.contains("ransac")) {
            const json& s = j["ransac"];
            c.ransac_threshold = s.value("threshold", c.ransac_threshold);
            c.ransac_iterations = s.value("iterations", c.ransac_iterations);
        }
        if (j.contains("models")) {
            const json& s = j["models"];
            c.binary_trees = s.value("binary_trees", c.binary_trees);
            c.keywords_rf_trees = s.value("keywords_rf_trees", c.keywords_rf_trees);
            c.keywords_extra_trees = s.value("keywords_extra_trees", c.keywords_extra_trees);
            c.max_depth = s.value("max_depth", c.max_depth);
            c.min_samples_leaf = s.value("min_samples_leaf", c.min_samples_leaf);
            c.max_features = s.value("max_features", c.max_features);
        }
        if (j.contains("preprocess")) {
            const json& s = j["preprocess"];
            c.binary_use_scaler = s.value("binary_scaler", c.binary_use_scaler);
            c.binary_use_pca = s.value("binary_pca", c.binary_use_pca);
            c.binary_pca_components = s.value("binary_pca_components", c.binary_pca_components);
            c.keywords_use_scaler = s.value("keywords_scaler", c.keywords_use_scaler);
            c.keywords_use_pca = s.value("keywords_pca", c.keywords_use_pca);
            c.keywords_pca_components =
                s.value("keywords_pca_components", c.keywords_pca_components);
        }
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
        c.out_dir = j.value("out_dir", c.out_dir.string());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad field: ") + e.what());
    }
    return c;
}

RunConfig config_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

void config_to_json_file(const std::filesystem::path& path, const RunConfig& config) {
    write_text_file_atomic(path, config_to_json_text(config));
}

// ---- stages --------------------------------------------------------------------

void stage_ingest(const RunConfig& config) {
    with_stage_any("ingest", [&] {
        if (config.stripped_path.empty() && config.bfile_dir.empty()) {
            throw ConfigError("no corpus source configured (stripped or bfile_dir)");
        }
        IngestOptions opts;
        opts.stripped_path = config.stripped_path;
        opts.bfile_dir = config.bfile_dir;
        opts.min_terms = config.min_terms;
        opts.sample_size = config.sample_size;
        opts.sample_seed = config.stream_seed(RunConfig::kSampleStream);
        const auto corpus = load_corpus(opts);
        if (corpus.empty()) throw DataError("corpus is empty after filtering");
        write_manifest(config.manifest_path(), corpus);
    });
}

void stage_features(const RunConfig& config) {
    with_stage_any("features", [&] {
        const auto corpus = read_manifest(config.manifest_path());
        const auto rows = fingerprint_corpus(corpus, config.workers);
        write_feature_table(config.features_path(), rows);
    });
}

RansacFit stage_ransac(const RunConfig& config) {
    return with_stage_any("ransac", [&] {
        const auto rows = read_feature_table(config.features_path());
        const auto points = taylor_scatter(rows);
        RansacFit fit = ransac_fit(points, config.ransac_threshold, config.ransac_iterations,
                                   config.stream_seed(RunConfig::kRansacStream));
        json j;
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["inlier_r"] = fit.inlier_fit.r;
        j["inliers"] = fit.inlier_count();
        j["points"] = fit.inlier_mask.size();
        j["threshold"] = fit.params.threshold;
        j["iterations"] = fit.params.iterations;
        j["seed"] = fit.params.seed;
        write_text_file_atomic(config.ransac_path(), j.dump(1, '\t') + "\n");
        return fit;
    });
}

void stage_make_dataset(const RunConfig& config) {
    with_stage_any("make-dataset", [&] {
        const auto oeis_rows = read_feature_table(config.features_path());

        // Synthetic negatives, fingerprinted like everything else.
        const auto random_seqs = generate_random_sequences(
            config.random_count, config.random_length, config.random_lo, config.random_hi,
            config.stream_seed(RunConfig::kRandomStream));
        const auto random_rows = fingerprint_corpus(random_seqs, config.workers);

        std::vector<FeatureRow> all_rows = oeis_rows;
        all_rows.insert(all_rows.end(), random_rows.begin(), random_rows.end());

        // Keyword labels for the OEIS rows that have entry records. Without
        // entry records, a names file still supports the name-derived labels
        // (prime/binomial/palindrome and the 'other' complement).
        std::vector<LabeledRow> labeled;
        if (!config.entries_dir.empty()) {
            const auto entries = load_entries_dir(config.entries_dir);
            for (const FeatureRow& row : oeis_rows) {
                auto it = entries.find(row.id);
                if (it == entries.end()) continue;
                labeled.push_back(LabeledRow{row.id, extract_labels(it->second)});
            }
        } else if (!config.names_path.empty()) {
            std::map<SequenceId, OeisEntry> by_id;
            std::istringstream names(read_text_file_maybe_gzip(config.names_path));
            std::string line;
            while (std::getline(names, line)) {
                auto parsed = parse_names_line(line);
                if (!parsed || parsed->second.empty()) continue;
                OeisEntry entry;
                entry.id = parsed->first;
                entry.name = std::move(parsed->second);
                by_id.insert_or_assign(parsed->first, std::move(entry));
            }
            for (const FeatureRow& row : oeis_rows) {
                auto it = by_id.find(row.id);
                if (it == by_id.end()) continue;
                labeled.push_back(LabeledRow{row.id, extract_labels(it->second)});
            }
        }

        std::vector<std::pair<SequenceId, bool>> binary;
        binary.reserve(all_rows.size());
        for (const FeatureRow& row : oeis_rows) binary.emplace_back(row.id, true);
        for (const FeatureRow& row : random_rows) binary.emplace_back(row.id, false);

        const auto tags = split_rows(all_rows.size(), config.fractions,
                                     config.stream_seed(RunConfig::kSplitStream));
        std::vector<SequenceId> ids;
        ids.reserve(all_rows.size());
        for (const FeatureRow& row : all_rows) ids.push_back(row.id);

        const auto dir = config.dataset_dir();
        std::filesystem::create_directories(dir);
        write_feature_table(dir / "features.tsv", all_rows);
        write_label_table(dir / "labels.tsv", labeled);
        write_binary_table(dir / "binary.tsv", binary);
        write_split_table(dir / "split.tsv", ids, tags);
    });
}

std::string model_file_name(Task task, const std::string& mode) {
    return std::string(to_string(task)) + "_" + mode + ".json";
}

namespace {

ForestHyper hyper_for(const RunConfig& config, std::size_t n_trees) {
    ForestHyper h;
    h.n_trees = n_trees;
    h.max_depth = config.max_depth;
    h.min_samples_leaf = config.min_samples_leaf;
    h.max_features = config.max_features;
    return h;
}

std::vector<int> column_as_int(const Matrix& y, std::size_t col) {
    std::vector<int> out(y.rows);
    for (std::size_t r = 0; r < y.rows; ++r) out[r] = y.at(r, col) != 0.0 ? 1 : 0;
    return out;
}

} // namespace

void stage_train(const RunConfig& config, Task task, const std::string& mode) {
    with_stage_any("train", [&] {
        const TaskData data = load_task_data(config.dataset_dir(), task);
        const TaskData train = filter_split(data, SplitTag::train);
        if (train.ids.empty()) throw DataError("training split is empty");

        std::filesystem::create_directories(config.models_dir());
        const auto out = config.models_dir() / model_file_name(task, mode);

        if (task == Task::oeis_vs_random) {
            if (mode != "random_forest" && mode != "extra_trees") {
                throw ConfigError("task oeis-vs-random supports random_forest or extra_trees");
            }
            PreprocessSpec prep;
            prep.use_scaler = config.binary_use_scaler;
            prep.use_pca = config.binary_use_pca;
            prep.pca_components = config.binary_pca_components;

            BinaryForestBundle bundle;
            bundle.preprocess = preprocess_fit(train.x, prep);
            const Matrix xt = bundle.preprocess.apply(train.x);
            bundle.forest = forest_fit(xt, column_as_int(train.y, 0),
                                       forest_mode_from_string(mode),
                                       hyper_for(config, config.binary_trees),
                                       config.stream_seed(RunConfig::kBinaryTrainStream),
                                       config.workers);
            save_model(out, bundle);
            return;
        }

        if (mode == "baseline") {
            save_model(out, baseline_fit(train.y));
            return;
        }
        const ForestMode forest_mode = forest_mode_from_string(mode);
        PreprocessSpec prep;
        prep.use_scaler = config.keywords_use_scaler;
        prep.use_pca = config.keywords_use_pca;
        prep.pca_components = config.keywords_pca_components;
        const std::size_t trees = forest_mode == ForestMode::random_forest
                                      ? config.keywords_rf_trees
                                      : config.keywords_extra_trees;
        const std::uint64_t seed =
            config.stream_seed(forest_mode == ForestMode::random_forest
                                   ? RunConfig::kKeywordsRfStream
                                   : RunConfig::kKeywordsExtraStream);
        const MultilabelModel model = multilabel_fit(train.x, train.y, forest_mode,
                                                     hyper_for(config, trees), seed, prep,
                                                     config.workers);
        save_model(out, model);
    });
}

namespace {

Matrix labels_to_matrix(const std::vector<LabelSet>& labels) {
    Matrix m(labels.size(), kLabelCount);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        for (std::size_t l = 0; l < kLabelCount; ++l) m.at(r, l) = labels[r][l] ? 1.0 : 0.0;
    }
    return m;
}

void evaluate_one(const RunConfig& config, Task task, const std::string& mode) {
    const auto model_path = config.models_dir() / model_file_name(task, mode);
    if (!std::filesystem::exists(model_path)) return;

    const TaskData data = load_task_data(config.dataset_dir(), task);
    const TaskData test = filter_split(data, SplitTag::test);
    if (test.ids.empty()) throw DataError("test split is empty");

    Matrix y_pred;
    const std::string model_id = std::string(to_string(task)) + "-" + mode;
    if (task == Task::oeis_vs_random) {
        const BinaryForestBundle bundle = load_binary_model(model_path);
        const auto proba = forest_predict_proba(bundle.forest, bundle.preprocess.apply(test.x));
        y_pred = Matrix(test.x.rows, 1);
        for (std::size_t r = 0; r < proba.size(); ++r) y_pred.at(r, 0) = proba[r] >= 0.5;
    } else if (mode == "baseline") {
        const BaselineModel model = load_baseline_model(model_path);
        y_pred = labels_to_matrix(baseline_predict(
            model, test.x.rows, config.stream_seed(RunConfig::kBaselineStream)));
    } else {
        const MultilabelModel model = load_multilabel_model(model_path);
        y_pred = labels_to_matrix(multilabel_predict(model, test.x));
    }

    std::vector<std::string> label_names;
    if (task == Task::oeis_vs_random) label_names = {"oeis"};
    const Report report = make_report(test.y, y_pred, model_id,
                                      config.dataset_dir().string() + ":test",
                                      std::move(label_names));
    std::filesystem::create_directories(config.reports_dir());
    write_report(config.reports_dir() / (model_id + ".txt"),
                 config.reports_dir() / (model_id + ".json"), report);
}

} // namespace

void stage_evaluate(const RunConfig& config) {
    with_stage_any("evaluate", [&] {
        evaluate_one(config, Task::oeis_vs_random, "random_forest");
        evaluate_one(config, Task::oeis_vs_random, "extra_trees");
        evaluate_one(config, Task::keywords, "random_forest");
        evaluate_one(config, Task::keywords, "extra_trees");
        evaluate_one(config, Task::keywords, "baseline");
    });
}

void stage_export_figs(const RunConfig& config) {
    with_stage_any("export-figs", [&] {
        const auto rows = read_feature_table(config.features_path());
        const auto dir = config.figs_dir();
        export_fig1_distances(dir, rows);
        export_fig2_correlation(dir, rows);

        const auto points = taylor_scatter(rows);
        const RansacFit fit = ransac_fit(points, config.ransac_threshold,
                                         config.ransac_iterations,
                                         config.stream_seed(RunConfig::kRansacStream));
        export_fig3_ransac(dir, rows, fit);

        std::vector<Report> keyword_reports;
        for (const char* mode : {"baseline", "random_forest", "extra_trees"}) {
            const auto path =
                config.reports_dir() / (std::string("keywords-") + mode + ".json");
            if (!std::filesystem::exists(path)) continue;
            keyword_reports.push_back(read_report_json(path));
        }
        if (!keyword_reports.empty()) {
            export_fig5_overall(dir, keyword_reports);
            for (const Report& rep : keyword_reports) export_fig6_per_label(dir, rep);
        }
    });
}

void run_pipeline(const RunConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    const auto marker = config.out_dir / ".incomplete";
    write_text_file_atomic(marker, "pipeline running or aborted\n");

    stage_ingest(config);
    stage_features(config);
    stage_ransac(config);
    stage_make_dataset(config);
    stage_train(config, Task::oeis_vs_random, "random_forest");
    stage_train(config, Task::keywords, "random_forest");
    stage_train(config, Task::keywords, "extra_trees");
    stage_train(config, Task::keywords, "baseline");
    stage_evaluate(config);
    stage_export_figs(config);

    std::filesystem::remove(marker);
}

} // namespace seqlaw
