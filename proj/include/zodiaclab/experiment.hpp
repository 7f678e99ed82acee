#pragma once

// End-to-end experiment: generate the population, encode, split 80/20
// (stratified), run k-fold cross-validation per model on the training
// portion with per-fold standardization, retrain on the full training
// split, score the holdout, and run the shuffled-label control.
// Everything is a pure function of the config; reruns produce identical
// reports regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/eval.hpp"
#include "zodiaclab/features.hpp"
#include "zodiaclab/lexicon.hpp"
#include "zodiaclab/population.hpp"
#include "zodiaclab/train.hpp"

namespace zodiaclab {

struct EvalSettings {
    int k_folds = 5;
    double test_fraction = 0.2;
    int permutation_repetitions = 19;
    std::uint64_t experiment_seed = 7;

    void validate() const {
        if (k_folds < 2) throw config_error("evaluation.k_folds: must be >= 2");
        if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
            throw config_error("evaluation.test_fraction: must be within (0, 1)");
        }
        if (permutation_repetitions < 1) {
            throw config_error("evaluation.permutation_repetitions: must be >= 1");
        }
    }
};

struct ExperimentConfig {
    GenerationConfig generation;
    std::vector<TrainConfig> models;
    EvalSettings evaluation;
    std::string output_directory = "out";

    void validate() const {
        generation.validate();
        evaluation.validate();
        if (models.empty()) throw config_error("models: at least one model is required");
        for (const auto& model : models) model.validate();
    }

    // logreg, forest, mlp with the standard defaults.
    static ExperimentConfig defaults() {
        ExperimentConfig config;
        TrainConfig logreg;
        logreg.kind = ModelKind::LogReg;
        logreg.seed = 1;
        TrainConfig forest;
        forest.kind = ModelKind::Forest;
        forest.seed = 2;
        TrainConfig mlp;
        mlp.kind = ModelKind::Mlp;
        mlp.seed = 3;
        config.models = {logreg, forest, mlp};
        return config;
    }
};

struct ModelEvaluation {
    TrainConfig config;
    std::vector<double> cv_fold_accuracies;
    double cv_mean_accuracy = 0.0;
    double test_accuracy = 0.0;
    ConfusionMatrix confusion;
    std::vector<double> shuffled_accuracies;
    double permutation_p_value = 1.0;
};

struct BaselineSummary {
    double uniform_random_accuracy = 0.0;
    double majority_class_accuracy = 0.0;
    double bayes_accuracy = 0.0;
};

struct EvaluationReport {
    ExperimentConfig config;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    BaselineSummary baselines;
    std::vector<ModelEvaluation> models;
    std::string best_model;  // selected by held-out test accuracy
    std::string best_model_selection = "held_out_test_accuracy";
};

namespace experiment_detail {

struct FoldJob {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> validate_rows;
};

inline std::vector<FoldJob> fold_jobs(std::span<const std::size_t> train_rows,
                                      const SplitPlan& plan) {
    std::vector<FoldJob> jobs(static_cast<std::size_t>(plan.k));
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        const auto fold = static_cast<std::size_t>(plan.fold_of[i]);
        for (std::size_t f = 0; f < jobs.size(); ++f) {
            (f == fold ? jobs[f].validate_rows : jobs[f].train_rows).push_back(train_rows[i]);
        }
    }
    return jobs;
}

inline double run_fold(const FeatureMatrix& X, const FoldJob& job, const TrainConfig& config,
                       unsigned n_threads) {
    const auto params = fit_standardizer(X, job.train_rows);
    const auto standardized = apply_standardizer(X, params);
    const auto X_train = take_rows(standardized, job.train_rows);
    const auto X_validate = take_rows(standardized, job.validate_rows);
    const auto model = train_model(X_train, config, n_threads);
    return accuracy(predict(model, X_validate), X_validate.labels);
}

}  // namespace experiment_detail

inline EvaluationReport run_experiment(const ExperimentConfig& config, unsigned n_threads = 0) {
    config.validate();

    const auto lexicon = build_default_lexicon();
    const auto table = build_default_assignments(lexicon);
    const auto population = generate_population(config.generation, lexicon, table);
    const auto X = encode(population);

    const auto holdout = stratified_holdout(X.labels, config.evaluation.test_fraction,
                                            config.evaluation.experiment_seed);

    EvaluationReport report;
    report.config = config;
    report.n_train = holdout.train_rows.size();
    report.n_test = holdout.test_rows.size();

    std::vector<TraitId> test_truths;
    test_truths.reserve(holdout.test_rows.size());
    for (const auto r : holdout.test_rows) test_truths.push_back(X.labels[r]);

    report.baselines.uniform_random_accuracy = uniform_random_baseline(X.num_classes);
    report.baselines.majority_class_accuracy = majority_baseline(test_truths);
    report.baselines.bayes_accuracy = bayes_accuracy(config.generation.signal_probability);

    std::vector<TraitId> train_labels;
    train_labels.reserve(holdout.train_rows.size());
    for (const auto r : holdout.train_rows) train_labels.push_back(X.labels[r]);
    const auto plan = kfold_split(train_labels, config.evaluation.k_folds,
                                  config.evaluation.experiment_seed);
    const auto jobs = experiment_detail::fold_jobs(holdout.train_rows, plan);

    for (const auto& model_config : config.models) {
        ModelEvaluation eval;
        eval.config = model_config;

        // cross-validation on the training portion only
        eval.cv_fold_accuracies.assign(jobs.size(), 0.0);
        if (model_config.kind == ModelKind::Forest) {
            for (std::size_t f = 0; f < jobs.size(); ++f) {
                eval.cv_fold_accuracies[f] =
                    experiment_detail::run_fold(X, jobs[f], model_config, n_threads);
            }
        } else {
            parallel_for(jobs.size(), n_threads, [&](std::size_t f) {
                eval.cv_fold_accuracies[f] =
                    experiment_detail::run_fold(X, jobs[f], model_config, 1);
            });
        }
        double sum = 0.0;
        for (const double a : eval.cv_fold_accuracies) sum += a;
        eval.cv_mean_accuracy = sum / static_cast<double>(jobs.size());

        // final model on the full training split, scored on the holdout
        const auto params = fit_standardizer(X, holdout.train_rows);
        const auto standardized = apply_standardizer(X, params);
        const auto X_train = take_rows(standardized, holdout.train_rows);
        const auto X_test = take_rows(standardized, holdout.test_rows);
        const auto model = train_model(X_train, model_config, n_threads);
        const auto predictions = predict(model, X_test);
        eval.test_accuracy = accuracy(predictions, X_test.labels);
        eval.confusion = confusion(predictions, X_test.labels, X.num_classes);

        const auto control = permutation_control(
            X, model_config, holdout.train_rows, holdout.test_rows,
            config.evaluation.permutation_repetitions, config.evaluation.experiment_seed,
            eval.test_accuracy, n_threads);
        eval.shuffled_accuracies = control.shuffled_accuracies;
        eval.permutation_p_value = control.p_value;

        report.models.push_back(std::move(eval));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < report.models.size(); ++i) {
        if (report.models[i].test_accuracy > report.models[best].test_accuracy) best = i;
    }
    if (!report.models.empty()) {
        report.best_model = std::string(model_kind_name(report.models[best].config.kind));
    }
    return report;
}

}  // namespace zodiaclab
