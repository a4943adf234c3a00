// seqlaw command line: fingerprints integer sequences with Benford- and
// Taylor-law features and runs the classification pipeline end to end.

#include "seqlaw/error.hpp"
#include "seqlaw/fetch.hpp"
#include "seqlaw/fingerprint.hpp"
#include "seqlaw/fixture.hpp"
#include "seqlaw/io.hpp"
#include "seqlaw/learn.hpp"
#include "seqlaw/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace seqlaw;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

// --config/--out/--seed are accepted by every subcommand; flags override the
// config file field by field.
void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration");
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)");
}

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) config = config_from_json_file(args.config_path);
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (args.seed) config.seed = *args.seed;
    return config;
}

std::string normalize_mode(std::string mode) {
    if (mode == "rf" || mode == "forest") return "random_forest";
    if (mode == "extra" || mode == "et") return "extra_trees";
    return mode;
}

int cmd_classify(const RunConfig& config, const std::string& model_path) {
    std::vector<BigInt> terms;
    std::string token;
    while (std::cin >> token) terms.push_back(parse_big_integer(token));
    if (terms.empty()) throw DataError("classify: no terms on standard input");

    const FeatureVector features = feature_vector(terms);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        std::cout << kFeatureNames[i] << "\t" << format_g17(features[i]) << "\n";
    }
    const BenfordDistances dist = benford_distances(digit_distribution(terms));
    std::cout << "kl\t" << format_g17(dist.kl) << "\n";
    std::cout << "ks\t" << format_g17(dist.ks) << "\n";
    std::cout << "wd\t" << format_g17(dist.wd) << "\n";
    std::cout << "tv\t" << format_g17(dist.tv) << "\n";

    if (!model_path.empty()) {
        Matrix x(1, kFeatureCount);
        for (std::size_t i = 0; i < kFeatureCount; ++i) x.at(0, i) = features[i];

        const std::string kind = model_kind(model_path);
        if (kind == "multilabel") {
            const MultilabelModel model = load_multilabel_model(model_path);
            const Matrix proba = multilabel_predict_proba(model, x);
            std::string predicted;
            for (std::size_t l = 0; l < kLabelCount; ++l) {
                std::cout << "proba_" << kLabelNames[l] << "\t"
                          << format_g17(proba.at(0, l)) << "\n";
                if (proba.at(0, l) >= model.thresholds[l]) {
                    if (!predicted.empty()) predicted += ',';
                    predicted += kLabelNames[l];
                }
            }
            std::cout << "labels\t" << predicted << "\n";
        } else if (kind == "binary-forest") {
            const BinaryForestBundle model = load_binary_model(model_path);
            const auto proba = forest_predict_proba(model.forest, model.preprocess.apply(x));
            std::cout << "proba_oeis\t" << format_g17(proba[0]) << "\n";
            std::cout << "labels\t" << (proba[0] >= 0.5 ? "oeis" : "random") << "\n";
        } else {
            throw DataError("classify: model kind '" + kind + "' cannot score sequences");
        }
    }
    (void)config;
    return 0;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Integer-sequence fingerprints from Benford's and Taylor's laws, "
                 "with tree-ensemble keyword classification"};
    app.require_subcommand(1);

    CommonArgs ingest_args, features_args, ransac_args, dataset_args, train_args,
        evaluate_args, figs_args, classify_args, run_args, fixture_args, fetch_args;

    auto* ingest = app.add_subcommand("ingest", "build the corpus manifest");
    attach_common(ingest, ingest_args);
    std::string stripped, bfile_dir, entries_dir;
    std::optional<std::size_t> min_terms, sample;
    ingest->add_option("--stripped", stripped, "OEIS stripped file (optionally .gz)");
    ingest->add_option("--bfile-dir", bfile_dir, "directory of b-files");
    ingest->add_option("--min-terms", min_terms, "minimum terms per sequence");
    ingest->add_option("--sample", sample, "random sample size over qualifying ids");

    auto* features = app.add_subcommand("features", "fingerprints and distances");
    attach_common(features, features_args);

    auto* ransac = app.add_subcommand("ransac", "robust line fit over the (r, s) scatter");
    attach_common(ransac, ransac_args);
    std::optional<double> threshold;
    std::optional<std::size_t> iterations;
    ransac->add_option("--threshold", threshold, "inlier residual threshold");
    ransac->add_option("--iterations", iterations, "sampling iterations");

    auto* dataset = app.add_subcommand("make-dataset",
                                       "labels, random negatives and splits");
    attach_common(dataset, dataset_args);
    std::optional<std::size_t> random_count, random_length;
    std::string names_path;
    dataset->add_option("--entries-dir", entries_dir, "per-entry record directory");
    dataset->add_option("--names", names_path,
                        "names file for name-derived labels when no entries exist");
    dataset->add_option("--random-count", random_count, "number of random sequences");
    dataset->add_option("--random-length", random_length, "terms per random sequence");

    auto* train = app.add_subcommand("train", "fit a classifier");
    attach_common(train, train_args);
    std::string task_name = "oeis-vs-random";
    std::string mode = "random_forest";
    std::optional<std::size_t> trees;
    train->add_option("--task", task_name, "oeis-vs-random | keywords");
    train->add_option("--mode", mode, "random_forest | extra_trees | baseline");
    train->add_option("--trees", trees, "number of trees (overrides config)");

    auto* evaluate = app.add_subcommand("evaluate", "test-split reports for trained models");
    attach_common(evaluate, evaluate_args);

    auto* figs = app.add_subcommand("export-figs", "plot-data files");
    attach_common(figs, figs_args);

    auto* classify = app.add_subcommand(
        "classify", "fingerprint one sequence from standard input");
    attach_common(classify, classify_args);
    std::string model_path;
    classify->add_option("--model", model_path, "score with a trained model file");

    auto* run = app.add_subcommand("run", "full pipeline from one config");
    attach_common(run, run_args);

    auto* fixture = app.add_subcommand("fixture", "write the bundled offline corpus");
    attach_common(fixture, fixture_args);
    std::size_t fixture_terms = 995;
    std::uint64_t fixture_seed = 20180909;
    fixture->add_option("--terms", fixture_terms, "terms per fixture sequence");
    fixture->add_option("--fixture-seed", fixture_seed, "seed for pseudo-random families");

    auto* fetch = app.add_subcommand("fetch", "fetch one OEIS entry (cached, rate limited)");
    attach_common(fetch, fetch_args);
    std::string fetch_id;
    std::string cache_dir;
    std::string base_url = "https://oeis.org";
    double rate_limit = 2.0;
    fetch->add_option("--id", fetch_id, "sequence id, e.g. A000045")->required();
    fetch->add_option("--cache-dir", cache_dir, "cache directory (default: env/user cache)");
    fetch->add_option("--base-url", base_url, "server base URL");
    fetch->add_option("--rate", rate_limit, "max requests per second");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return 1;
    }

    if (ingest->parsed()) {
        RunConfig config = resolve_config(ingest_args);
        if (!stripped.empty()) config.stripped_path = stripped;
        if (!bfile_dir.empty()) config.bfile_dir = bfile_dir;
        if (min_terms) config.min_terms = *min_terms;
        if (sample) config.sample_size = *sample;
        stage_ingest(config);
        std::cout << "wrote " << config.manifest_path().string() << "\n";
    } else if (features->parsed()) {
        RunConfig config = resolve_config(features_args);
        stage_features(config);
        std::cout << "wrote " << config.features_path().string() << "\n";
    } else if (ransac->parsed()) {
        RunConfig config = resolve_config(ransac_args);
        if (threshold) config.ransac_threshold = *threshold;
        if (iterations) config.ransac_iterations = *iterations;
        const RansacFit fit = stage_ransac(config);
        std::cout << "slope=" << fit.slope << " intercept=" << fit.intercept
                  << " inlier_r=" << fit.inlier_fit.r << " inliers=" << fit.inlier_count()
                  << "/" << fit.inlier_mask.size() << "\n";
    } else if (dataset->parsed()) {
        RunConfig config = resolve_config(dataset_args);
        if (!entries_dir.empty()) config.entries_dir = entries_dir;
        if (!names_path.empty()) config.names_path = names_path;
        if (random_count) config.random_count = *random_count;
        if (random_length) config.random_length = *random_length;
        stage_make_dataset(config);
        std::cout << "wrote " << config.dataset_dir().string() << "\n";
    } else if (train->parsed()) {
        RunConfig config = resolve_config(train_args);
        const Task task = task_from_string(task_name);
        const std::string resolved = normalize_mode(mode);
        if (trees) {
            config.binary_trees = *trees;
            config.keywords_rf_trees = *trees;
            config.keywords_extra_trees = *trees;
        }
        stage_train(config, task, resolved);
        std::cout << "wrote "
                  << (config.models_dir() / model_file_name(task, resolved)).string() << "\n";
    } else if (evaluate->parsed()) {
        RunConfig config = resolve_config(evaluate_args);
        stage_evaluate(config);
        std::cout << "wrote " << config.reports_dir().string() << "\n";
    } else if (figs->parsed()) {
        RunConfig config = resolve_config(figs_args);
        stage_export_figs(config);
        std::cout << "wrote " << config.figs_dir().string() << "\n";
    } else if (classify->parsed()) {
        return cmd_classify(resolve_config(classify_args), model_path);
    } else if (run->parsed()) {
        RunConfig config = resolve_config(run_args);
        run_pipeline(config);
        std::cout << "pipeline artifacts in " << config.out_dir.string() << "\n";
    } else if (fixture->parsed()) {
        RunConfig config = resolve_config(fixture_args);
        FixtureOptions opts;
        opts.terms = fixture_terms;
        opts.seed = fixture_seed;
        const auto dir = fixture_args.out_dir.empty() ? config.out_dir
                                                      : std::filesystem::path(fixture_args.out_dir);
        write_fixture_corpus(dir, opts);
        std::cout << "wrote fixture corpus to " << dir.string() << "\n";
    } else if (fetch->parsed()) {
        FetchOptions opts;
        if (!cache_dir.empty()) opts.cache_dir = cache_dir;
        opts.base_url = base_url;
        opts.rate_limit = rate_limit;
        OeisFetcher fetcher(opts);
        const OeisEntry entry = fetcher.fetch_entry(SequenceId::parse(fetch_id));
        std::cout << entry.id.value() << "\t" << entry.name << "\n";
        std::string keywords;
        for (const auto& kw : entry.keywords) {
            if (!keywords.empty()) keywords += ',';
            keywords += kw;
        }
        std::cout << "keywords\t" << keywords << "\n";
        std::cout << "terms\t" << entry.terms.size() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
