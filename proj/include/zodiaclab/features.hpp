#pragma once

// Numeric design matrix: sign and birth month one-hot, three numeric nuisance
// columns, one binary flag. Width is fixed at 28. Standardization parameters
// are fitted on an explicit row subset so train/test separation stays visible
// at the call site.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/lexicon.hpp"
#include "zodiaclab/population.hpp"

namespace zodiaclab {

enum class ColumnKind { OneHot, Numeric, Binary };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    bool operator==(const Column&) const = default;
};

struct FeatureSchema {
    std::vector<Column> columns;

    int width() const noexcept { return static_cast<int>(columns.size()); }
    bool operator==(const FeatureSchema&) const = default;

    // sign one-hot (12) | month one-hot (12) | sleep, chai, vibe | retrograde
    static FeatureSchema canonical() {
        FeatureSchema schema;
        schema.columns.reserve(28);
        for (const auto name : kSignNames) {
            schema.columns.push_back({"sign_" + std::string(name), ColumnKind::OneHot});
        }
        for (int m = 1; m <= 12; ++m) {
            schema.columns.push_back({"month_" + std::to_string(m), ColumnKind::OneHot});
        }
        schema.columns.push_back({"sleep_hours", ColumnKind::Numeric});
        schema.columns.push_back({"chai_cups", ColumnKind::Numeric});
        schema.columns.push_back({"lunar_vibe", ColumnKind::Numeric});
        schema.columns.push_back({"mercury_retrograde", ColumnKind::Binary});
        return schema;
    }
};

inline constexpr int kSignBlockOffset = 0;
inline constexpr int kMonthBlockOffset = 12;
inline constexpr int kSleepColumn = 24;
inline constexpr int kChaiColumn = 25;
inline constexpr int kVibeColumn = 26;
inline constexpr int kRetrogradeColumn = 27;
inline constexpr int kFeatureWidth = 28;

struct FeatureMatrix {
    FeatureSchema schema;
    std::size_t rows = 0;
    std::vector<double> values;   // rows x width, row-major
    std::vector<TraitId> labels;  // size rows
    int num_classes = kTraitCount;

    int width() const noexcept { return schema.width(); }

    std::span<double> row(std::size_t r) {
        return {values.data() + r * static_cast<std::size_t>(width()),
                static_cast<std::size_t>(width())};
    }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * static_cast<std::size_t>(width()),
                static_cast<std::size_t>(width())};
    }
    double at(std::size_t r, int c) const {
        return values[r * static_cast<std::size_t>(width()) + static_cast<std::size_t>(c)];
    }
};

inline FeatureMatrix encode(const Population& population) {
    if (population.individuals.empty()) {
        throw std::invalid_argument("encode: population is empty");
    }
    FeatureMatrix matrix;
    matrix.schema = FeatureSchema::canonical();
    matrix.rows = population.individuals.size();
    matrix.values.assign(matrix.rows * static_cast<std::size_t>(kFeatureWidth), 0.0);
    matrix.labels.reserve(matrix.rows);
    matrix.num_classes = kTraitCount;

    for (std::size_t r = 0; r < matrix.rows; ++r) {
        const auto& ind = population.individuals[r];
        auto row = matrix.row(r);
        row[static_cast<std::size_t>(kSignBlockOffset + static_cast<int>(ind.sign))] = 1.0;
        row[static_cast<std::size_t>(kMonthBlockOffset + ind.birth_month - 1)] = 1.0;
        row[kSleepColumn] = ind.sleep_hours;
        row[kChaiColumn] = static_cast<double>(ind.chai_cups);
        row[kVibeColumn] = ind.lunar_vibe;
        row[kRetrogradeColumn] = ind.mercury_retrograde ? 1.0 : 0.0;
        matrix.labels.push_back(ind.label);
    }
    return matrix;
}

// Exact sign/month recovery from the one-hot blocks.
inline ZodiacSign decode_sign(std::span<const double> row) {
    for (int i = 0; i < kSignCount; ++i) {
        if (row[static_cast<std::size_t>(kSignBlockOffset + i)] == 1.0) {
            return static_cast<ZodiacSign>(i);
        }
    }
    throw std::invalid_argument("decode_sign: no active sign column");
}

inline int decode_month(std::span<const double> row) {
    for (int m = 0; m < 12; ++m) {
        if (row[static_cast<std::size_t>(kMonthBlockOffset + m)] == 1.0) return m + 1;
    }
    throw std::invalid_argument("decode_month: no active month column");
}

struct StandardizationParams {
    struct ColumnStats {
        int column = 0;
        double mean = 0.0;
        double stddev = 1.0;
    };
    int schema_width = 0;
    std::vector<ColumnStats> stats;  // numeric columns only, ascending column order
};

inline constexpr double kConstantColumnGuard = 1e-12;

// Mean and population (divide-by-n) standard deviation per numeric column,
// computed over row_subset only. A stddev below the guard is replaced by 1.
inline StandardizationParams fit_standardizer(const FeatureMatrix& matrix,
                                              std::span<const std::size_t> row_subset) {
    if (row_subset.empty()) {
        throw std::invalid_argument("fit_standardizer: row subset is empty");
    }
    StandardizationParams params;
    params.schema_width = matrix.width();
    const double n = static_cast<double>(row_subset.size());
    for (int c = 0; c < matrix.width(); ++c) {
        if (matrix.schema.columns[static_cast<std::size_t>(c)].kind != ColumnKind::Numeric) continue;
        double sum = 0.0;
        for (const auto r : row_subset) sum += matrix.at(r, c);
        const double mean = sum / n;
        double sq = 0.0;
        for (const auto r : row_subset) {
            const double d = matrix.at(r, c) - mean;
            sq += d * d;
        }
        double stddev = std::sqrt(sq / n);
        if (stddev < kConstantColumnGuard) stddev = 1.0;
        params.stats.push_back({c, mean, stddev});
    }
    return params;
}

// (x - mean) / stddev on numeric columns; one-hot and binary columns pass
// through untouched. The input matrix is not modified.
inline FeatureMatrix apply_standardizer(const FeatureMatrix& matrix,
                                        const StandardizationParams& params) {
    if (params.schema_width != matrix.width()) {
        throw std::invalid_argument("apply_standardizer: schema width mismatch");
    }
    FeatureMatrix out = matrix;
    for (const auto& stat : params.stats) {
        for (std::size_t r = 0; r < out.rows; ++r) {
            auto& v = out.values[r * static_cast<std::size_t>(out.width()) +
                                 static_cast<std::size_t>(stat.column)];
            v = (v - stat.mean) / stat.stddev;
        }
    }
    return out;
}

inline FeatureMatrix take_rows(const FeatureMatrix& matrix,
                               std::span<const std::size_t> rows) {
    FeatureMatrix out;
    out.schema = matrix.schema;
    out.rows = rows.size();
    out.num_classes = matrix.num_classes;
    out.values.reserve(rows.size() * static_cast<std::size_t>(matrix.width()));
    out.labels.reserve(rows.size());
    for (const auto r : rows) {
        const auto row = matrix.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(matrix.labels[r]);
    }
    return out;
}

}  // namespace zodiaclab
