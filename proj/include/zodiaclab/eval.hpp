#pragma once

// Evaluation machinery: stratified splits, accuracy and confusion matrices,
// analytic baselines, and the shuffled-label permutation control.
//
// Stream layout within an experiment seed: the holdout split uses stream 1,
// k-fold assignment uses stream 2, and permutation repetition r shuffles with
// stream 1000 + r. Model training draws from the model's own seed, so the two
// seed spaces never collide.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/features.hpp"
#include "zodiaclab/parallel.hpp"
#include "zodiaclab/rng.hpp"
#include "zodiaclab/train.hpp"

namespace zodiaclab {

inline constexpr std::uint64_t kHoldoutStream = 1;
inline constexpr std::uint64_t kKfoldStream = 2;
inline constexpr std::uint64_t kPermutationStreamBase = 1000;

struct SplitPlan {
    int k = 0;
    std::vector<int> fold_of;  // fold index per row, in [0, k)
};

// Stratified k-fold assignment. Within each class (ascending class id) the
// members are shuffled, then dealt round-robin to a single rolling fold cursor
// whose start is one seeded draw. The rolling cursor keeps global fold sizes
// within 1 of each other even when many classes have fewer members than k.
inline SplitPlan kfold_split(std::span<const TraitId> labels, int k, std::uint64_t seed) {
    const auto n = labels.size();
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    if (static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("kfold_split: k exceeds the number of rows");
    }

    std::map<int, std::vector<std::size_t>> members;  // ordered by class id
    for (std::size_t i = 0; i < n; ++i) members[labels[i].index].push_back(i);

    Pcg32 rng(seed, kKfoldStream);
    SplitPlan plan{k, std::vector<int>(n, -1)};
    int cursor = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(k)));
    for (auto& [cls, rows] : members) {
        shuffle(rows, rng);
        for (const auto row : rows) {
            plan.fold_of[row] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return plan;
}

inline double accuracy(std::span<const TraitId> predictions, std::span<const TraitId> truths) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("accuracy: length mismatch");
    }
    if (predictions.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == truths[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<std::int64_t> counts;   // num_classes x num_classes, rows = true class
    std::vector<std::int64_t> support;  // per true class

    std::int64_t at(int truth, int predicted) const {
        return counts[static_cast<std::size_t>(truth) * static_cast<std::size_t>(num_classes) +
                      static_cast<std::size_t>(predicted)];
    }
    std::int64_t trace() const {
        std::int64_t sum = 0;
        for (int c = 0; c < num_classes; ++c) sum += at(c, c);
        return sum;
    }
    std::int64_t total() const {
        return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    }
};

inline ConfusionMatrix confusion(std::span<const TraitId> predictions,
                                 std::span<const TraitId> truths, int num_classes) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("confusion: length mismatch");
    }
    ConfusionMatrix matrix;
    matrix.num_classes = num_classes;
    matrix.counts.assign(
        static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes), 0);
    matrix.support.assign(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const int t = truths[i].index;
        const int p = predictions[i].index;
        if (t < 0 || t >= num_classes || p < 0 || p >= num_classes) {
            throw std::invalid_argument("confusion: class index out of range");
        }
        ++matrix.counts[static_cast<std::size_t>(t) * static_cast<std::size_t>(num_classes) +
                        static_cast<std::size_t>(p)];
        ++matrix.support[static_cast<std::size_t>(t)];
    }
    return matrix;
}

// Expected accuracy of a uniform guesser.
inline double uniform_random_baseline(int num_classes) {
    if (num_classes < 1) throw std::invalid_argument("uniform_random_baseline: K must be >= 1");
    return 1.0 / static_cast<double>(num_classes);
}

// Frequency of the most common class; lowest class index wins ties.
inline double majority_baseline(std::span<const TraitId> truths) {
    if (truths.empty()) throw std::invalid_argument("majority_baseline: empty input");
    std::map<int, std::size_t> counts;
    for (const auto t : truths) ++counts[t.index];
    std::size_t best = 0;
    for (const auto& [cls, count] : counts) {
        if (count > best) best = count;  // map iterates ascending class id
    }
    return static_cast<double>(best) / static_cast<double>(truths.size());
}

// Accuracy of the optimal sign-conditional predictor under the generative
// mixture: every sign trait carries mass p/10 + (1-p)/100, so predicting any
// one of them is optimal and achieves exactly that mass.
inline double bayes_accuracy(double signal_probability) {
    if (!(signal_probability >= 0.0 && signal_probability <= 1.0)) {
        throw std::invalid_argument("bayes_accuracy: signal probability outside [0, 1]");
    }
    return signal_probability / 10.0 + (1.0 - signal_probability) / 100.0;
}

inline std::vector<TraitId> shuffle_labels(std::span<const TraitId> labels, Pcg32& rng) {
    if (labels.empty()) throw std::invalid_argument("shuffle_labels: empty input");
    std::vector<TraitId> shuffled(labels.begin(), labels.end());
    shuffle(shuffled, rng);
    return shuffled;
}

struct HoldoutSplit {
    std::vector<std::size_t> train_rows;  // ascending
    std::vector<std::size_t> test_rows;   // ascending
};

// Stratified holdout. Per class the shuffled members contribute
// floor(m * fraction) test rows; the remaining slots up to
// round(n * fraction) go to the classes with the largest fractional
// remainders (lower class id wins ties).
inline HoldoutSplit stratified_holdout(std::span<const TraitId> labels, double test_fraction,
                                       std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("stratified_holdout: fraction must be in (0, 1)");
    }
    const auto n = labels.size();
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[labels[i].index].push_back(i);

    const auto target =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));

    Pcg32 rng(seed, kHoldoutStream);
    struct ClassDraw {
        int cls;
        std::size_t base;
        double remainder;
        std::vector<std::size_t>* rows;
    };
    std::vector<ClassDraw> draws;
    std::size_t assigned = 0;
    for (auto& [cls, rows] : members) {
        shuffle(rows, rng);
        const double ideal = static_cast<double>(rows.size()) * test_fraction;
        auto base = static_cast<std::size_t>(ideal);
        if (base >= rows.size()) base = rows.size() - 1;  // keep at least one train row
        draws.push_back({cls, base, ideal - static_cast<double>(base), &rows});
        assigned += base;
    }
    std::stable_sort(draws.begin(), draws.end(), [](const ClassDraw& a, const ClassDraw& b) {
        if (a.remainder != b.remainder) return a.remainder > b.remainder;
        return a.cls < b.cls;
    });
    for (auto& draw : draws) {
        if (assigned >= target) break;
        if (draw.base + 1 < draw.rows->size()) {
            ++draw.base;
            ++assigned;
        }
    }

    HoldoutSplit split;
    std::vector<bool> is_test(n, false);
    for (const auto& draw : draws) {
        for (std::size_t i = 0; i < draw.base; ++i) is_test[(*draw.rows)[i]] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        (is_test[i] ? split.test_rows : split.train_rows).push_back(i);
    }
    if (split.test_rows.empty() || split.train_rows.empty()) {
        throw std::invalid_argument("stratified_holdout: degenerate split");
    }
    return split;
}

struct PermutationResult {
    double real_accuracy = 0.0;
    std::vector<double> shuffled_accuracies;
    double p_value = 1.0;
};

namespace eval_detail {

// Fit on the train rows, standardize, train, score on the test rows.
inline double train_and_score(const FeatureMatrix& X_train, const FeatureMatrix& X_test,
                              const TrainConfig& config, unsigned n_threads) {
    const auto model = train_model(X_train, config, n_threads);
    return accuracy(predict(model, X_test), X_test.labels);
}

}  // namespace eval_detail

// Shuffled-label control with full retraining per repetition. Repetition r
// permutes the complete label vector with stream (seed, 1000 + r), keeps the
// original train/test row split, retrains, and scores against the permuted
// test labels. p = (1 + #{shuffled >= real}) / (R + 1). A precomputed
// real_accuracy may be supplied to skip retraining the real model; the value
// is identical either way. Repetitions run in parallel for logreg and mlp;
// forest repetitions run serially and parallelize across trees instead.
inline PermutationResult permutation_control(const FeatureMatrix& X, const TrainConfig& config,
                                             std::span<const std::size_t> train_rows,
                                             std::span<const std::size_t> test_rows,
                                             int repetitions, std::uint64_t seed,
                                             std::optional<double> real_accuracy = std::nullopt,
                                             unsigned n_threads = 0) {
    if (repetitions < 1) throw std::invalid_argument("permutation_control: R must be >= 1");

    const auto params = fit_standardizer(X, train_rows);
    const auto standardized = apply_standardizer(X, params);
    const auto X_train = take_rows(standardized, train_rows);
    const auto X_test = take_rows(standardized, test_rows);

    PermutationResult result;
    result.real_accuracy = real_accuracy.has_value()
                               ? *real_accuracy
                               : eval_detail::train_and_score(X_train, X_test, config, n_threads);

    result.shuffled_accuracies.assign(static_cast<std::size_t>(repetitions), 0.0);
    const auto run_repetition = [&](std::size_t r, unsigned inner_threads) {
        Pcg32 rng(seed, kPermutationStreamBase + r);
        const auto shuffled = shuffle_labels(X.labels, rng);
        FeatureMatrix train = X_train;
        FeatureMatrix test = X_test;
        for (std::size_t i = 0; i < train_rows.size(); ++i) train.labels[i] = shuffled[train_rows[i]];
        for (std::size_t i = 0; i < test_rows.size(); ++i) test.labels[i] = shuffled[test_rows[i]];
        result.shuffled_accuracies[r] =
            eval_detail::train_and_score(train, test, config, inner_threads);
    };

    if (config.kind == ModelKind::Forest) {
        for (std::size_t r = 0; r < static_cast<std::size_t>(repetitions); ++r) {
            run_repetition(r, n_threads);
        }
    } else {
        parallel_for(static_cast<std::size_t>(repetitions), n_threads,
                     [&](std::size_t r) { run_repetition(r, 1); });
    }

    int at_least = 0;
    for (const double a : result.shuffled_accuracies) {
        if (a >= result.real_accuracy) ++at_least;
    }
    result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(repetitions + 1);
    return result;
}

}  // namespace zodiaclab
