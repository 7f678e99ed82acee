#pragma once

// Random forest of CART trees. Each tree draws its bootstrap resample and all
// split-time feature subsets from its own PCG32 stream (config.seed, tree
// index), so tree-level parallelism cannot change the result. Nodes are built
// pre-order (feature draws, then the left subtree, then the right). Splits
// minimize weighted Gini impurity over midpoint thresholds between adjacent
// distinct values; ties keep the lowest column index, then the lowest
// threshold. Recursion stops at max_depth, min_samples_split, a pure node, or
// when every sampled column is constant.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/features.hpp"
#include "zodiaclab/model.hpp"
#include "zodiaclab/parallel.hpp"
#include "zodiaclab/rng.hpp"

namespace zodiaclab {
namespace forest_detail {

inline double gini(std::span<const int> class_counts) {
    long long total = 0;
    for (const int c : class_counts) total += c;
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (const int c : class_counts) sum_sq += static_cast<double>(c) * c;
    const double t = static_cast<double>(total);
    return 1.0 - sum_sq / (t * t);
}

struct TreeBuilder {
    const FeatureMatrix& X;
    const ForestSettings& settings;
    Pcg32& rng;
    int num_classes;
    DecisionTree tree;

    std::vector<int> column_pool;       // scratch for feature sampling
    std::vector<int> sampled_columns;   // features_per_split entries, sorted
    std::vector<std::pair<double, int>> sorted_values;  // (value, class)
    std::vector<int> left_counts;
    std::vector<int> right_counts;

    TreeBuilder(const FeatureMatrix& matrix, const ForestSettings& cfg, Pcg32& gen)
        : X(matrix), settings(cfg), rng(gen), num_classes(matrix.num_classes) {
        column_pool.resize(static_cast<std::size_t>(X.width()));
        left_counts.resize(static_cast<std::size_t>(num_classes));
        right_counts.resize(static_cast<std::size_t>(num_classes));
    }

    int make_leaf(std::span<const std::size_t> samples) {
        std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
        for (const auto s : samples) ++counts[static_cast<std::size_t>(X.labels[s].index)];
        TreeNode node;
        const double inv = 1.0 / static_cast<double>(samples.size());
        for (int c = 0; c < num_classes; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                node.leaf.emplace_back(c, counts[static_cast<std::size_t>(c)] * inv);
            }
        }
        tree.nodes.push_back(std::move(node));
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    bool is_pure(std::span<const std::size_t> samples) const {
        const int first = X.labels[samples.front()].index;
        for (const auto s : samples) {
            if (X.labels[s].index != first) return false;
        }
        return true;
    }

    // Partial Fisher-Yates over the column pool; result sorted ascending so the
    // lowest-column tie-break is deterministic.
    void sample_columns() {
        const int d = X.width();
        const int m = std::min(settings.features_per_split, d);
        std::iota(column_pool.begin(), column_pool.end(), 0);
        for (int i = 0; i < m; ++i) {
            const auto j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(d - i)));
            std::swap(column_pool[static_cast<std::size_t>(i)], column_pool[static_cast<std::size_t>(j)]);
        }
        sampled_columns.assign(column_pool.begin(), column_pool.begin() + m);
        std::sort(sampled_columns.begin(), sampled_columns.end());
    }

    struct Split {
        bool found = false;
        int column = -1;
        double threshold = 0.0;
        double weighted_gini = 0.0;
    };

    Split best_split(std::span<const std::size_t> samples) {
        Split best;
        const auto n = samples.size();
        for (const int column : sampled_columns) {
            sorted_values.clear();
            for (const auto s : samples) {
                sorted_values.emplace_back(X.at(s, column), X.labels[s].index);
            }
            std::sort(sorted_values.begin(), sorted_values.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (sorted_values.front().first == sorted_values.back().first) continue;

            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::fill(right_counts.begin(), right_counts.end(), 0);
            for (const auto& [value, cls] : sorted_values) {
                ++right_counts[static_cast<std::size_t>(cls)];
            }
            double left_sum_sq = 0.0;
            double right_sum_sq = 0.0;
            for (const int c : right_counts) right_sum_sq += static_cast<double>(c) * c;

            std::size_t moved = 0;
            std::size_t i = 0;
            while (i < n) {
                // move the whole run of equal values to the left side
                const double value = sorted_values[i].first;
                while (i < n && sorted_values[i].first == value) {
                    const auto cls = static_cast<std::size_t>(sorted_values[i].second);
                    left_sum_sq += 2.0 * left_counts[cls] + 1.0;
                    right_sum_sq -= 2.0 * right_counts[cls] - 1.0;
                    ++left_counts[cls];
                    --right_counts[cls];
                    ++moved;
                    ++i;
                }
                if (i == n) break;
                const double next = sorted_values[i].first;
                const double threshold = value + (next - value) / 2.0;
                // degenerate midpoint (adjacent representable values) cannot separate
                if (!(threshold > value) || threshold > next) continue;
                const double n_left = static_cast<double>(moved);
                const double n_right = static_cast<double>(n - moved);
                const double weighted =
                    (n_left - left_sum_sq / n_left + n_right - right_sum_sq / n_right) /
                    static_cast<double>(n);
                if (!best.found || weighted < best.weighted_gini) {
                    best = {true, column, threshold, weighted};
                }
            }
        }
        return best;
    }

    int build(std::vector<std::size_t>& samples, int depth) {
        if (depth >= settings.max_depth ||
            samples.size() < static_cast<std::size_t>(settings.min_samples_split) ||
            is_pure(samples)) {
            return make_leaf(samples);
        }
        sample_columns();
        const Split split = best_split(samples);
        if (!split.found) return make_leaf(samples);

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (const auto s : samples) {
            (X.at(s, split.column) < split.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_index)].column = split.column;
        tree.nodes[static_cast<std::size_t>(node_index)].threshold = split.threshold;
        const int left_index = build(left, depth + 1);
        const int right_index = build(right, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left_index;
        tree.nodes[static_cast<std::size_t>(node_index)].right = right_index;
        return node_index;
    }
};

inline DecisionTree build_tree(const FeatureMatrix& X, const ForestSettings& settings,
                               Pcg32& rng) {
    // bootstrap: n draws with replacement, consumed before any split draw
    std::vector<std::size_t> samples(X.rows);
    for (auto& s : samples) {
        s = rng.uniform_int(static_cast<std::uint32_t>(X.rows));
    }
    TreeBuilder builder(X, settings, rng);
    builder.tree.nodes.reserve(64);
    builder.build(samples, 0);
    return std::move(builder.tree);
}

}  // namespace forest_detail

inline TrainedModel train_forest(const FeatureMatrix& X, const TrainConfig& config,
                                 unsigned n_threads = 0) {
    config.validate();
    if (X.rows == 0) throw std::invalid_argument("train_forest: empty matrix");
    if (config.forest.features_per_split > X.width()) {
        throw config_error("forest.features_per_split: exceeds feature width");
    }

    ForestModel model;
    model.num_classes = X.num_classes;
    model.width = X.width();
    model.trees.resize(static_cast<std::size_t>(config.forest.n_trees));

    parallel_for(model.trees.size(), n_threads, [&](std::size_t t) {
        Pcg32 rng(config.seed, t);
        model.trees[t] = forest_detail::build_tree(X, config.forest, rng);
    });
    return TrainedModel{config, std::move(model)};
}

}  // namespace zodiaclab
