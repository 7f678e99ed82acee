#pragma once

// Shared model types and the uniform prediction interface over the three
// classifier families. Training lives in logreg.hpp / forest.hpp / mlp.hpp.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/features.hpp"

namespace zodiaclab {

enum class ModelKind { LogReg, Forest, Mlp };

constexpr std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogReg: return "logreg";
        case ModelKind::Forest: return "forest";
        case ModelKind::Mlp: return "mlp";
    }
    return "unknown";
}

inline std::optional<ModelKind> model_kind_from_name(std::string_view name) {
    if (name == "logreg") return ModelKind::LogReg;
    if (name == "forest") return ModelKind::Forest;
    if (name == "mlp") return ModelKind::Mlp;
    return std::nullopt;
}

struct LogRegSettings {
    double learning_rate = 0.1;
    int epochs = 200;
    int batch_size = 64;
    double l2_penalty = 1e-4;
};

struct ForestSettings {
    int n_trees = 100;
    int max_depth = 12;
    int min_samples_split = 2;
    int features_per_split = 5;  // floor(sqrt(28)) for the canonical schema
};

struct MlpSettings {
    int hidden_units = 64;
    double learning_rate = 0.05;
    int epochs = 200;
    int batch_size = 64;
};

struct TrainConfig {
    ModelKind kind = ModelKind::LogReg;
    std::uint64_t seed = 1;
    LogRegSettings logreg;
    ForestSettings forest;
    MlpSettings mlp;

    void validate() const {
        const std::string prefix = std::string(model_kind_name(kind)) + ".";
        switch (kind) {
            case ModelKind::LogReg:
                if (!(logreg.learning_rate > 0.0)) throw config_error(prefix + "learning_rate: must be > 0");
                if (logreg.epochs < 0) throw config_error(prefix + "epochs: must be >= 0");
                if (logreg.batch_size < 1) throw config_error(prefix + "batch_size: must be >= 1");
                if (!(logreg.l2_penalty >= 0.0)) throw config_error(prefix + "l2_penalty: must be >= 0");
                break;
            case ModelKind::Forest:
                if (forest.n_trees < 1) throw config_error(prefix + "n_trees: must be >= 1");
                if (forest.max_depth < 1) throw config_error(prefix + "max_depth: must be >= 1");
                if (forest.min_samples_split < 2) throw config_error(prefix + "min_samples_split: must be >= 2");
                if (forest.features_per_split < 1) throw config_error(prefix + "features_per_split: must be >= 1");
                break;
            case ModelKind::Mlp:
                if (mlp.hidden_units < 1) throw config_error(prefix + "hidden_units: must be >= 1");
                if (!(mlp.learning_rate > 0.0)) throw config_error(prefix + "learning_rate: must be > 0");
                if (mlp.epochs < 0) throw config_error(prefix + "epochs: must be >= 0");
                if (mlp.batch_size < 1) throw config_error(prefix + "batch_size: must be >= 1");
                break;
        }
    }
};

struct LogRegModel {
    int num_classes = 0;
    int width = 0;
    std::vector<double> weights;  // num_classes x width, row-major
    std::vector<double> biases;   // num_classes
};

struct TreeNode {
    int column = -1;  // < 0 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::pair<int, double>> leaf;  // (class, probability), ascending class

    bool is_leaf() const noexcept { return column < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct ForestModel {
    int num_classes = 0;
    int width = 0;
    std::vector<DecisionTree> trees;
};

struct MlpModel {
    int num_classes = 0;
    int width = 0;
    int hidden_units = 0;
    std::vector<double> w1;  // hidden_units x width
    std::vector<double> b1;  // hidden_units
    std::vector<double> w2;  // num_classes x hidden_units
    std::vector<double> b2;  // num_classes
};

struct TrainedModel {
    TrainConfig config;
    std::variant<LogRegModel, ForestModel, MlpModel> model;

    ModelKind kind() const noexcept { return config.kind; }

    int width() const {
        return std::visit([](const auto& m) { return m.width; }, model);
    }
    int num_classes() const {
        return std::visit([](const auto& m) { return m.num_classes; }, model);
    }
};

// Max-subtracted softmax. Rejects non-finite scores.
inline void softmax_inplace(std::span<double> scores) {
    double max = -std::numeric_limits<double>::infinity();
    for (const double s : scores) {
        if (!std::isfinite(s)) throw std::domain_error("softmax: non-finite score");
        if (s > max) max = s;
    }
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - max);
        sum += s;
    }
    for (double& s : scores) s /= sum;
}

inline std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> probs(scores.begin(), scores.end());
    softmax_inplace(probs);
    return probs;
}

// Lowest index wins ties.
inline int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

struct ProbabilityMatrix {
    std::size_t rows = 0;
    int num_classes = 0;
    std::vector<double> values;  // rows x num_classes, row-major

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * static_cast<std::size_t>(num_classes),
                static_cast<std::size_t>(num_classes)};
    }
};

namespace detail {

inline void logreg_scores(const LogRegModel& m, std::span<const double> x,
                          std::span<double> scores) {
    for (int k = 0; k < m.num_classes; ++k) {
        const double* w = m.weights.data() + static_cast<std::size_t>(k) * m.width;
        double s = m.biases[static_cast<std::size_t>(k)];
        for (int j = 0; j < m.width; ++j) s += w[j] * x[static_cast<std::size_t>(j)];
        scores[static_cast<std::size_t>(k)] = s;
    }
}

inline const std::vector<std::pair<int, double>>& tree_leaf(const DecisionTree& tree,
                                                            std::span<const double> x) {
    int node = 0;
    while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const auto& n = tree.nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.column)] < n.threshold ? n.left : n.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].leaf;
}

// z1/h1 scratch supplied by the caller so batch loops can reuse buffers.
inline void mlp_forward(const MlpModel& m, std::span<const double> x,
                        std::span<double> hidden, std::span<double> scores) {
    for (int h = 0; h < m.hidden_units; ++h) {
        const double* w = m.w1.data() + static_cast<std::size_t>(h) * m.width;
        double z = m.b1[static_cast<std::size_t>(h)];
        for (int j = 0; j < m.width; ++j) z += w[j] * x[static_cast<std::size_t>(j)];
        hidden[static_cast<std::size_t>(h)] = z > 0.0 ? z : 0.0;
    }
    for (int k = 0; k < m.num_classes; ++k) {
        const double* w = m.w2.data() + static_cast<std::size_t>(k) * m.hidden_units;
        double s = m.b2[static_cast<std::size_t>(k)];
        for (int h = 0; h < m.hidden_units; ++h) s += w[h] * hidden[static_cast<std::size_t>(h)];
        scores[static_cast<std::size_t>(k)] = s;
    }
}

}  // namespace detail

// Per-row class probabilities; every row sums to 1 within 1e-9. Forest rows
// are the mean of per-tree leaf distributions.
inline ProbabilityMatrix predict_proba(const TrainedModel& model, const FeatureMatrix& X) {
    if (model.width() != X.width()) {
        throw std::invalid_argument("predict_proba: feature width mismatch");
    }
    ProbabilityMatrix out;
    out.rows = X.rows;
    out.num_classes = model.num_classes();
    out.values.assign(out.rows * static_cast<std::size_t>(out.num_classes), 0.0);

    if (const auto* lr = std::get_if<LogRegModel>(&model.model)) {
        for (std::size_t r = 0; r < X.rows; ++r) {
            auto row = std::span<double>(out.values).subspan(
                r * static_cast<std::size_t>(out.num_classes),
                static_cast<std::size_t>(out.num_classes));
            detail::logreg_scores(*lr, X.row(r), row);
            softmax_inplace(row);
        }
    } else if (const auto* forest = std::get_if<ForestModel>(&model.model)) {
        const double inv_trees = 1.0 / static_cast<double>(forest->trees.size());
        for (std::size_t r = 0; r < X.rows; ++r) {
            auto row = std::span<double>(out.values).subspan(
                r * static_cast<std::size_t>(out.num_classes),
                static_cast<std::size_t>(out.num_classes));
            for (const auto& tree : forest->trees) {
                for (const auto& [cls, prob] : detail::tree_leaf(tree, X.row(r))) {
                    row[static_cast<std::size_t>(cls)] += prob;
                }
            }
            for (double& p : row) p *= inv_trees;
        }
    } else {
        const auto& mlp = std::get<MlpModel>(model.model);
        std::vector<double> hidden(static_cast<std::size_t>(mlp.hidden_units));
        for (std::size_t r = 0; r < X.rows; ++r) {
            auto row = std::span<double>(out.values).subspan(
                r * static_cast<std::size_t>(out.num_classes),
                static_cast<std::size_t>(out.num_classes));
            detail::mlp_forward(mlp, X.row(r), hidden, row);
            softmax_inplace(row);
        }
    }
    return out;
}

// Argmax of each probability row; ties break to the lowest class index.
inline std::vector<TraitId> predict(const TrainedModel& model, const FeatureMatrix& X) {
    const auto probs = predict_proba(model, X);
    std::vector<TraitId> labels;
    labels.reserve(probs.rows);
    for (std::size_t r = 0; r < probs.rows; ++r) {
        labels.push_back(TraitId{argmax_lowest(probs.row(r))});
    }
    return labels;
}

}  // namespace zodiaclab
