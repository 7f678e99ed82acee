// zodiaclab command-line driver.
//
// Subcommands:
//   generate        population CSV + generation config sidecar
//   run             full experiment: report.json, CSV summaries, SVG chart
//   export-lexicon  trait vocabulary + assignment table as JSON
//
// Exit codes: 0 success, 2 configuration/usage error, 3 I/O error,
// 4 training divergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zodiaclab/zodiaclab.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDivergence = 4;

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::string models_filter;
    std::string save_models_dir;
    bool dump_features = false;
    std::optional<std::uint64_t> seed_override;
};

zodiaclab::ExperimentConfig load_config(const RunOptions& options) {
    auto config = zodiaclab::load_experiment_config(options.config_path);
    if (!options.out_dir.empty()) config.output_directory = options.out_dir;
    if (options.seed_override) {
        // one seed for the whole experiment: data generation and evaluation
        config.generation.seed = *options.seed_override;
        config.evaluation.experiment_seed = *options.seed_override;
    }
    if (!options.models_filter.empty()) {
        std::vector<zodiaclab::TrainConfig> selected;
        std::string item;
        std::istringstream stream(options.models_filter);
        while (std::getline(stream, item, ',')) {
            const auto kind = zodiaclab::model_kind_from_name(item);
            if (!kind) {
                throw zodiaclab::config_error("--models: unknown model kind \"" + item + "\"");
            }
            bool found = false;
            for (const auto& model : config.models) {
                if (model.kind == *kind) {
                    selected.push_back(model);
                    found = true;
                    break;
                }
            }
            if (!found) {
                zodiaclab::TrainConfig fresh;
                fresh.kind = *kind;
                selected.push_back(fresh);
            }
        }
        if (selected.empty()) throw zodiaclab::config_error("--models: empty selection");
        config.models = std::move(selected);
    }
    return config;
}

int cmd_generate(const RunOptions& options) {
    const auto config = load_config(options);
    const auto lexicon = zodiaclab::build_default_lexicon();
    const auto table = zodiaclab::build_default_assignments(lexicon);
    const auto population = zodiaclab::generate_population(config.generation, lexicon, table);

    std::error_code ec;
    std::filesystem::create_directories(config.output_directory, ec);
    if (ec) throw zodiaclab::io_error("cannot create output directory: " + config.output_directory);
    const auto base = std::filesystem::path(config.output_directory);

    zodiaclab::write_population_csv(population, (base / "population.csv").string());
    zodiaclab::write_text_file(
        zodiaclab::generation_config_to_json(config.generation).dump(2) + "\n",
        (base / "generation_config.json").string());

    std::cout << "wrote " << (base / "population.csv").string() << " ("
              << population.individuals.size() << " individuals)\n";
    return 0;
}

int cmd_run(const RunOptions& options) {
    const auto config = load_config(options);
    const auto report = zodiaclab::run_experiment(config);
    zodiaclab::write_report_files(report, config.output_directory);

    if (options.dump_features || !options.save_models_dir.empty()) {
        const auto lexicon = zodiaclab::build_default_lexicon();
        const auto table = zodiaclab::build_default_assignments(lexicon);
        const auto population = zodiaclab::generate_population(config.generation, lexicon, table);
        const auto matrix = zodiaclab::encode(population);
        if (options.dump_features) {
            zodiaclab::write_features_csv(
                matrix, (std::filesystem::path(config.output_directory) / "features.csv").string());
        }
        if (!options.save_models_dir.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(options.save_models_dir, ec);
            if (ec) {
                throw zodiaclab::io_error("cannot create model directory: " +
                                          options.save_models_dir);
            }
            // retrain on the same training split the report used
            const auto holdout = zodiaclab::stratified_holdout(
                matrix.labels, config.evaluation.test_fraction, config.evaluation.experiment_seed);
            const auto params = zodiaclab::fit_standardizer(matrix, holdout.train_rows);
            const auto standardized = zodiaclab::apply_standardizer(matrix, params);
            const auto train = zodiaclab::take_rows(standardized, holdout.train_rows);
            for (const auto& model_config : config.models) {
                const auto model = zodiaclab::train_model(train, model_config);
                const auto name =
                    "model_" + std::string(zodiaclab::model_kind_name(model_config.kind)) + ".json";
                zodiaclab::save_model(
                    model, (std::filesystem::path(options.save_models_dir) / name).string());
            }
        }
    }

    std::cout << "wrote report to " << config.output_directory << "\n";
    for (const auto& model : report.models) {
        std::printf("  %-7s test_acc=%.4f  shuffled_mean=%.4f  p=%.4f\n",
                    std::string(zodiaclab::model_kind_name(model.config.kind)).c_str(),
                    model.test_accuracy, zodiaclab::mean_of(model.shuffled_accuracies),
                    model.permutation_p_value);
    }
    std::printf("  baselines: uniform=%.4f majority=%.4f ceiling=%.4f\n",
                report.baselines.uniform_random_accuracy,
                report.baselines.majority_class_accuracy, report.baselines.bayes_accuracy);
    return 0;
}

int cmd_export_lexicon(const std::string& out_path) {
    const auto lexicon = zodiaclab::build_default_lexicon();
    const auto table = zodiaclab::build_default_assignments(lexicon);
    zodiaclab::write_lexicon_json(lexicon, table, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic zodiac-personality prediction laboratory"};
    app.require_subcommand(1);

    RunOptions options;
    std::string lexicon_out = "lexicon.json";

    auto* generate = app.add_subcommand("generate", "Generate a population CSV plus config sidecar");
    generate->add_option("--config", options.config_path, "Experiment config JSON")->required();
    generate->add_option("--out", options.out_dir, "Output directory");
    generate->add_option("--seed", options.seed_override, "Override generation and experiment seeds");

    auto* run = app.add_subcommand("run", "Run the full experiment and write reports");
    run->add_option("--config", options.config_path, "Experiment config JSON")->required();
    run->add_option("--out", options.out_dir, "Output directory");
    run->add_option("--models", options.models_filter,
                    "Comma-separated subset of logreg,forest,mlp");
    run->add_option("--seed", options.seed_override, "Override generation and experiment seeds");
    run->add_flag("--dump-features", options.dump_features, "Also write features.csv");
    run->add_option("--save-models", options.save_models_dir,
                    "Save trained models as JSON into this directory");

    auto* export_lexicon =
        app.add_subcommand("export-lexicon", "Write the trait vocabulary and assignments");
    export_lexicon->add_option("--out", lexicon_out, "Output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (generate->parsed()) return cmd_generate(options);
        if (run->parsed()) return cmd_run(options);
        if (export_lexicon->parsed()) return cmd_export_lexicon(lexicon_out);
    } catch (const zodiaclab::divergence_error& e) {
        std::cerr << "error: training diverged in model " << e.model() << ": " << e.what() << "\n";
        return kExitDivergence;
    } catch (const zodiaclab::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const zodiaclab::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
