#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "zodiaclab/features.hpp"

using namespace zodiaclab;

namespace {

Population small_population() {
    const auto lexicon = build_default_lexicon();
    const auto table = build_default_assignments(lexicon);
    GenerationConfig config;
    config.population_size = 400;
    config.seed = 99;
    return generate_population(config, lexicon, table);
}

}  // namespace

TEST_CASE("canonical schema is 28 columns wide") {
    const auto schema = FeatureSchema::canonical();
    REQUIRE(schema.width() == 28);
    int onehot = 0, numeric = 0, binary = 0;
    for (const auto& column : schema.columns) {
        switch (column.kind) {
            case ColumnKind::OneHot: ++onehot; break;
            case ColumnKind::Numeric: ++numeric; break;
            case ColumnKind::Binary: ++binary; break;
        }
    }
    REQUIRE(onehot == 24);
    REQUIRE(numeric == 3);
    REQUIRE(binary == 1);
    REQUIRE(schema.columns[0].name == "sign_Aries");
    REQUIRE(schema.columns[24].name == "sleep_hours");
    REQUIRE(schema.columns[27].name == "mercury_retrograde");
}

TEST_CASE("encode produces exact one-hot blocks") {
    const auto population = small_population();
    const auto matrix = encode(population);
    REQUIRE(matrix.rows == population.individuals.size());
    REQUIRE(matrix.width() == 28);
    REQUIRE(matrix.num_classes == 100);

    for (std::size_t r = 0; r < matrix.rows; ++r) {
        const auto row = matrix.row(r);
        double sign_sum = 0.0;
        double month_sum = 0.0;
        for (int c = 0; c < 12; ++c) sign_sum += row[static_cast<std::size_t>(c)];
        for (int c = 12; c < 24; ++c) month_sum += row[static_cast<std::size_t>(c)];
        REQUIRE(sign_sum == 1.0);
        REQUIRE(month_sum == 1.0);

        const auto& ind = population.individuals[r];
        REQUIRE(row[static_cast<std::size_t>(static_cast<int>(ind.sign))] == 1.0);
        REQUIRE(decode_sign(row) == ind.sign);
        REQUIRE(decode_month(row) == ind.birth_month);
        REQUIRE(row[kRetrogradeColumn] == (ind.mercury_retrograde ? 1.0 : 0.0));
        REQUIRE(row[kSleepColumn] == ind.sleep_hours);
        REQUIRE(row[kChaiColumn] == static_cast<double>(ind.chai_cups));
        REQUIRE(matrix.labels[r] == ind.label);
    }
}

TEST_CASE("aries row puts the 1 in the first sign slot") {
    Population population;
    population.config.population_size = 1;
    Individual ind;
    ind.sign = ZodiacSign::Aries;
    ind.birth_month = 4;
    ind.sleep_hours = 7.5;
    ind.chai_cups = 2;
    ind.mercury_retrograde = true;
    ind.lunar_vibe = 0.25;
    ind.label = TraitId{16};
    population.individuals.push_back(ind);

    const auto matrix = encode(population);
    const auto row = matrix.row(0);
    const std::vector<double> expected_sign = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    for (int c = 0; c < 12; ++c) {
        REQUIRE(row[static_cast<std::size_t>(c)] == expected_sign[static_cast<std::size_t>(c)]);
    }
    REQUIRE(row[kRetrogradeColumn] == 1.0);
}

TEST_CASE("standardizer arithmetic matches hand values") {
    // three rows, numeric sleep column carrying 1, 2, 3
    Population population;
    for (int i = 1; i <= 3; ++i) {
        Individual ind;
        ind.sign = ZodiacSign::Cancer;
        ind.birth_month = 7;
        ind.sleep_hours = static_cast<double>(i);
        ind.chai_cups = 4;  // constant column
        ind.lunar_vibe = 0.5;
        ind.label = TraitId{0};
        population.individuals.push_back(ind);
    }
    const auto matrix = encode(population);
    const std::vector<std::size_t> all_rows = {0, 1, 2};
    const auto params = fit_standardizer(matrix, all_rows);

    REQUIRE(params.stats.size() == 3);
    REQUIRE(params.stats[0].column == kSleepColumn);
    REQUIRE(params.stats[0].mean == 2.0);
    REQUIRE_THAT(params.stats[0].stddev,
                 Catch::Matchers::WithinAbs(std::sqrt(2.0 / 3.0), 1e-15));

    // constant columns fall back to unit scale
    REQUIRE(params.stats[1].column == kChaiColumn);
    REQUIRE(params.stats[1].mean == 4.0);
    REQUIRE(params.stats[1].stddev == 1.0);

    const auto standardized = apply_standardizer(matrix, params);
    REQUIRE(standardized.at(0, kChaiColumn) == 0.0);
    REQUIRE(standardized.at(1, kSleepColumn) == 0.0);  // (2 - 2) / sd
}

TEST_CASE("identity parameters leave the matrix unchanged") {
    const auto matrix = encode(small_population());
    StandardizationParams identity;
    identity.schema_width = matrix.width();
    identity.stats = {{kSleepColumn, 0.0, 1.0}, {kChaiColumn, 0.0, 1.0}, {kVibeColumn, 0.0, 1.0}};
    const auto out = apply_standardizer(matrix, identity);
    REQUIRE(out.values == matrix.values);
}

TEST_CASE("standardized training columns have zero mean and unit variance") {
    const auto matrix = encode(small_population());
    std::vector<std::size_t> rows(matrix.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});

    const auto params = fit_standardizer(matrix, rows);
    const auto standardized = apply_standardizer(matrix, params);

    for (const int column : {kSleepColumn, kChaiColumn, kVibeColumn}) {
        double sum = 0.0;
        for (const auto r : rows) sum += standardized.at(r, column);
        const double mean = sum / static_cast<double>(rows.size());
        REQUIRE(std::abs(mean) < 1e-9);

        double sq = 0.0;
        for (const auto r : rows) {
            const double d = standardized.at(r, column) - mean;
            sq += d * d;
        }
        const double variance = sq / static_cast<double>(rows.size());
        REQUIRE(std::abs(variance - 1.0) < 1e-6);
    }
}

TEST_CASE("fold safety: parameters fitted on train rows do not center test rows") {
    const auto matrix = encode(small_population());
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        (r % 5 == 0 ? test_rows : train_rows).push_back(r);
    }
    const auto params = fit_standardizer(matrix, train_rows);
    const auto standardized = apply_standardizer(matrix, params);

    const auto mean_over = [&](const std::vector<std::size_t>& rows, int column) {
        double sum = 0.0;
        for (const auto r : rows) sum += standardized.at(r, column);
        return sum / static_cast<double>(rows.size());
    };
    REQUIRE(std::abs(mean_over(train_rows, kSleepColumn)) < 1e-9);
    // the held-out rows were never read while fitting, so their mean is offset
    REQUIRE(std::abs(mean_over(test_rows, kSleepColumn)) > 1e-6);
}

TEST_CASE("one-hot and binary columns are untouched by standardization") {
    const auto matrix = encode(small_population());
    std::vector<std::size_t> rows(matrix.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const auto params = fit_standardizer(matrix, rows);
    const auto standardized = apply_standardizer(matrix, params);

    for (std::size_t r = 0; r < matrix.rows; ++r) {
        for (int c = 0; c < 24; ++c) {
            REQUIRE(standardized.at(r, c) == matrix.at(r, c));
        }
        REQUIRE(standardized.at(r, kRetrogradeColumn) == matrix.at(r, kRetrogradeColumn));
    }
    // and the source matrix itself was not modified
    REQUIRE(matrix.at(0, kSleepColumn) == encode(small_population()).at(0, kSleepColumn));
}

TEST_CASE("empty inputs are rejected") {
    Population empty;
    REQUIRE_THROWS_AS(encode(empty), std::invalid_argument);

    const auto matrix = encode(small_population());
    REQUIRE_THROWS_AS(fit_standardizer(matrix, {}), std::invalid_argument);

    StandardizationParams wrong;
    wrong.schema_width = 5;
    REQUIRE_THROWS_AS(apply_standardizer(matrix, wrong), std::invalid_argument);
}

TEST_CASE("take_rows preserves schema, labels, and values") {
    const auto matrix = encode(small_population());
    const std::vector<std::size_t> rows = {3, 17, 42, 3};
    const auto subset = take_rows(matrix, rows);
    REQUIRE(subset.rows == 4);
    REQUIRE(subset.schema == matrix.schema);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(subset.labels[i] == matrix.labels[rows[i]]);
        for (int c = 0; c < matrix.width(); ++c) {
            REQUIRE(subset.at(i, c) == matrix.at(rows[i], c));
        }
    }
}
