#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "zodiaclab/eval.hpp"
#include "zodiaclab/lexicon.hpp"
#include "test_helpers.hpp"

using namespace zodiaclab;
using test_helpers::make_matrix;

namespace {

std::vector<TraitId> ids(const std::vector<int>& values) {
    std::vector<TraitId> out;
    for (const int v : values) out.push_back(TraitId{v});
    return out;
}

}  // namespace

TEST_CASE("kfold deals balanced folds") {
    const auto labels = ids(std::vector<int>(10, 0));
    const auto plan = kfold_split(labels, 5, 1);
    std::array<int, 5> sizes{};
    for (const int fold : plan.fold_of) {
        REQUIRE(fold >= 0);
        REQUIRE(fold < 5);
        ++sizes[static_cast<std::size_t>(fold)];
    }
    for (const int s : sizes) REQUIRE(s == 2);

    const auto big = ids(std::vector<int>(100, 7));
    const auto big_plan = kfold_split(big, 5, 2);
    std::array<int, 5> big_sizes{};
    for (const int fold : big_plan.fold_of) ++big_sizes[static_cast<std::size_t>(fold)];
    for (const int s : big_sizes) REQUIRE(s == 20);
}

TEST_CASE("kfold stratifies within classes and balances globally") {
    std::vector<int> raw;
    for (int c = 0; c < 7; ++c) {
        for (int i = 0; i < 13 + c; ++i) raw.push_back(c);
    }
    const auto labels = ids(raw);
    const int k = 4;
    const auto plan = kfold_split(labels, k, 99);

    std::vector<int> fold_sizes(k, 0);
    std::map<int, std::vector<int>> per_class(std::map<int, std::vector<int>>{});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++fold_sizes[static_cast<std::size_t>(plan.fold_of[i])];
        auto& counts = per_class[labels[i].index];
        counts.resize(k, 0);
        ++counts[static_cast<std::size_t>(plan.fold_of[i])];
    }
    const auto [min_fold, max_fold] = std::minmax_element(fold_sizes.begin(), fold_sizes.end());
    REQUIRE(*max_fold - *min_fold <= 1);

    for (const auto& [cls, counts] : per_class) {
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        INFO("class " << cls);
        REQUIRE(*hi - *lo <= 1);
    }
}

TEST_CASE("kfold is deterministic and validates its inputs") {
    const auto labels = ids({0, 1, 0, 1, 2, 2, 0, 1, 2, 0, 1, 2});
    const auto a = kfold_split(labels, 3, 31);
    const auto b = kfold_split(labels, 3, 31);
    REQUIRE(a.fold_of == b.fold_of);
    const auto c = kfold_split(labels, 3, 32);
    REQUIRE(a.fold_of != c.fold_of);

    REQUIRE_THROWS_AS(kfold_split(labels, 13, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(kfold_split(labels, 1, 1), std::invalid_argument);
}

TEST_CASE("accuracy counts exact matches") {
    REQUIRE(accuracy(ids({1, 2, 3}), ids({1, 2, 3})) == 1.0);
    REQUIRE(accuracy(ids({1, 2, 3}), ids({4, 5, 6})) == 0.0);
    REQUIRE_THAT(accuracy(ids({0, 1, 2}), ids({0, 1, 3})),
                 Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
    REQUIRE_THROWS_AS(accuracy(ids({1}), ids({1, 2})), std::invalid_argument);
    REQUIRE_THROWS_AS(accuracy(ids({}), ids({})), std::invalid_argument);
}

TEST_CASE("confusion matrix identities hold") {
    const auto truths = ids({0, 0, 1, 2, 2, 2, 3});
    const auto predictions = ids({0, 1, 1, 2, 0, 2, 3});
    const auto matrix = confusion(predictions, truths, 4);

    REQUIRE(matrix.total() == 7);
    REQUIRE_THAT(static_cast<double>(matrix.trace()) / static_cast<double>(matrix.total()),
                 Catch::Matchers::WithinAbs(accuracy(predictions, truths), 1e-15));

    std::map<int, std::int64_t> support;
    for (const auto t : truths) ++support[t.index];
    for (int c = 0; c < 4; ++c) {
        std::int64_t row_sum = 0;
        for (int p = 0; p < 4; ++p) row_sum += matrix.at(c, p);
        REQUIRE(row_sum == matrix.support[static_cast<std::size_t>(c)]);
        REQUIRE(row_sum == support[c]);
    }

    const auto perfect = confusion(truths, truths, 4);
    for (int t = 0; t < 4; ++t) {
        for (int p = 0; p < 4; ++p) {
            if (t != p) REQUIRE(perfect.at(t, p) == 0);
        }
    }

    REQUIRE_THROWS_AS(confusion(ids({9}), ids({0}), 4), std::invalid_argument);
}

TEST_CASE("uniform baseline is one over K") {
    REQUIRE(uniform_random_baseline(100) == 0.01);
    REQUIRE(uniform_random_baseline(1) == 1.0);
    REQUIRE(uniform_random_baseline(2) == 0.5);
    REQUIRE_THROWS_AS(uniform_random_baseline(0), std::invalid_argument);
}

TEST_CASE("majority baseline picks the most common class") {
    REQUIRE(majority_baseline(ids({5, 5, 5})) == 1.0);
    REQUIRE_THAT(majority_baseline(ids({0, 0, 1})), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
    std::vector<int> balanced;
    for (int c = 0; c < 100; ++c) balanced.push_back(c);
    REQUIRE(majority_baseline(ids(balanced)) == 0.01);
    REQUIRE_THROWS_AS(majority_baseline(ids({})), std::invalid_argument);
}

TEST_CASE("bayes accuracy closed form matches exhaustive enumeration") {
    REQUIRE(bayes_accuracy(0.0) == 0.01);
    REQUIRE(bayes_accuracy(1.0) == 0.10);
    REQUIRE_THAT(bayes_accuracy(0.1), Catch::Matchers::WithinAbs(0.019, 1e-15));
    REQUIRE_THROWS_AS(bayes_accuracy(-0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(bayes_accuracy(1.1), std::invalid_argument);

    // enumeration oracle: per sign, build the full 100-class mixture and take
    // the best class mass; average over the uniform sign marginal
    const auto lexicon = build_default_lexicon();
    const auto table = build_default_assignments(lexicon);
    for (const double p : {0.0, 0.1, 0.5, 1.0}) {
        double mean_best = 0.0;
        for (const auto sign : all_signs()) {
            double best = 0.0;
            double total = 0.0;
            for (int t = 0; t < kTraitCount; ++t) {
                const double mass = table.contains(sign, TraitId{t})
                                        ? p / 10.0 + (1.0 - p) / 100.0
                                        : (1.0 - p) / 100.0;
                best = std::max(best, mass);
                total += mass;
            }
            REQUIRE(std::abs(total - 1.0) < 1e-12);
            mean_best += best;
        }
        mean_best /= kSignCount;
        REQUIRE_THAT(bayes_accuracy(p), Catch::Matchers::WithinAbs(mean_best, 1e-12));
    }
}

TEST_CASE("label shuffling permutes without changing the multiset") {
    const auto labels = ids({1, 1, 2, 3, 5, 8, 13, 21, 34, 55});
    Pcg32 rng_a(12, 0);
    Pcg32 rng_b(12, 0);
    const auto a = shuffle_labels(labels, rng_a);
    const auto b = shuffle_labels(labels, rng_b);
    REQUIRE(std::equal(a.begin(), a.end(), b.begin()));

    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    auto expected = labels;
    std::sort(expected.begin(), expected.end());
    REQUIRE(std::equal(sorted.begin(), sorted.end(), expected.begin()));

    const auto single = ids({9});
    Pcg32 rng_c(1, 1);
    REQUIRE(shuffle_labels(single, rng_c)[0].index == 9);
}

TEST_CASE("stratified holdout partitions every row exactly once") {
    std::vector<int> raw;
    Pcg32 rng(55, 0);
    for (int i = 0; i < 1000; ++i) raw.push_back(static_cast<int>(rng.uniform_int(20)));
    const auto labels = ids(raw);
    const auto split = stratified_holdout(labels, 0.2, 4);

    REQUIRE(split.test_rows.size() == 200);
    REQUIRE(split.train_rows.size() == 800);
    std::vector<bool> seen(labels.size(), false);
    for (const auto r : split.train_rows) {
        REQUIRE_FALSE(seen[r]);
        seen[r] = true;
    }
    for (const auto r : split.test_rows) {
        REQUIRE_FALSE(seen[r]);
        seen[r] = true;
    }
    REQUIRE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));

    // per-class test share close to the global fraction
    std::map<int, int> class_total;
    std::map<int, int> class_test;
    for (std::size_t i = 0; i < labels.size(); ++i) ++class_total[labels[i].index];
    for (const auto r : split.test_rows) ++class_test[labels[r].index];
    for (const auto& [cls, total] : class_total) {
        const double ideal = total * 0.2;
        INFO("class " << cls);
        REQUIRE(std::abs(class_test[cls] - ideal) <= 1.0);
    }

    const auto again = stratified_holdout(labels, 0.2, 4);
    REQUIRE(again.test_rows == split.test_rows);
}

TEST_CASE("permutation control hits the add-one bounds") {
    TrainConfig config;
    config.kind = ModelKind::LogReg;
    config.logreg.epochs = 60;
    config.logreg.learning_rate = 0.5;
    config.logreg.batch_size = 8;
    config.logreg.l2_penalty = 0.0;

    SECTION("single-class labels collapse to p = 1") {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        Pcg32 rng(2, 0);
        for (int i = 0; i < 24; ++i) {
            rows.push_back({rng.uniform_real(-1, 1), rng.uniform_real(-1, 1)});
            labels.push_back(0);
        }
        auto X = make_matrix(rows, labels, 2);
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < X.rows; ++i) (i < 16 ? train_rows : test_rows).push_back(i);

        const auto result = permutation_control(X, config, train_rows, test_rows, 7, 3);
        REQUIRE(result.p_value == 1.0);
        for (const double a : result.shuffled_accuracies) {
            REQUIRE(a == result.real_accuracy);
        }
    }

    SECTION("perfectly separable data yields the minimal p") {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 16; ++i) {
            const int cls = i % 2;
            const double offset = cls == 0 ? -3.0 : 3.0;
            rows.push_back({offset + 0.1 * i, offset - 0.05 * i});
            labels.push_back(cls);
        }
        auto X = make_matrix(rows, labels, 2);
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < X.rows; ++i) (i < 8 ? train_rows : test_rows).push_back(i);

        const int repetitions = 9;
        const auto result =
            permutation_control(X, config, train_rows, test_rows, repetitions, 11);
        REQUIRE(result.real_accuracy == 1.0);
        for (const double a : result.shuffled_accuracies) {
            REQUIRE(a < 1.0);
        }
        REQUIRE_THAT(result.p_value,
                     Catch::Matchers::WithinAbs(1.0 / (repetitions + 1), 1e-15));
    }
}

TEST_CASE("permutation control is thread-invariant and honors a precomputed real accuracy") {
    Pcg32 rng(77, 0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) {
        rows.push_back({rng.uniform_real(-1, 1), rng.uniform_real(-1, 1)});
        labels.push_back(static_cast<int>(rng.uniform_int(3)));
    }
    auto X = make_matrix(rows, labels, 3);
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < X.rows; ++i) (i < 45 ? train_rows : test_rows).push_back(i);

    TrainConfig config;
    config.kind = ModelKind::LogReg;
    config.logreg.epochs = 30;

    const auto serial =
        permutation_control(X, config, train_rows, test_rows, 6, 5, std::nullopt, 1);
    const auto threaded =
        permutation_control(X, config, train_rows, test_rows, 6, 5, std::nullopt, 4);
    REQUIRE(serial.shuffled_accuracies == threaded.shuffled_accuracies);
    REQUIRE(serial.real_accuracy == threaded.real_accuracy);
    REQUIRE(serial.p_value == threaded.p_value);

    const auto precomputed = permutation_control(X, config, train_rows, test_rows, 6, 5,
                                                 serial.real_accuracy, 1);
    REQUIRE(precomputed.real_accuracy == serial.real_accuracy);
    REQUIRE(precomputed.shuffled_accuracies == serial.shuffled_accuracies);
    REQUIRE(precomputed.p_value == serial.p_value);
}
