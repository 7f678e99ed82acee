#pragma once

// Versioned model persistence. Weights round-trip exactly: the serializer
// emits shortest-round-trip decimal doubles, so load(save(m)) reproduces the
// parameters bit for bit.

#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "zodiaclab/config.hpp"
#include "zodiaclab/errors.hpp"
#include "zodiaclab/model.hpp"

namespace zodiaclab {

inline constexpr int kModelFormatVersion = 1;

namespace model_json_detail {

inline nlohmann::ordered_json matrix_to_json(const std::vector<double>& values, int rows,
                                             int cols) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (int r = 0; r < rows; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < cols; ++c) {
            row.push_back(values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                                 static_cast<std::size_t>(c)]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline std::vector<double> matrix_from_json(const nlohmann::json& node, int rows, int cols,
                                            const char* what) {
    if (!node.is_array() || node.size() != static_cast<std::size_t>(rows)) {
        throw io_error(std::string("model JSON: bad shape for ") + what);
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (const auto& row : node) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
            throw io_error(std::string("model JSON: bad shape for ") + what);
        }
        for (const auto& v : row) values.push_back(v.get<double>());
    }
    return values;
}

inline nlohmann::ordered_json vector_to_json(const std::vector<double>& values) {
    return nlohmann::ordered_json(values);
}

inline std::vector<double> vector_from_json(const nlohmann::json& node, int size,
                                            const char* what) {
    if (!node.is_array() || node.size() != static_cast<std::size_t>(size)) {
        throw io_error(std::string("model JSON: bad shape for ") + what);
    }
    return node.get<std::vector<double>>();
}

}  // namespace model_json_detail

inline nlohmann::ordered_json model_to_json(const TrainedModel& model) {
    using model_json_detail::matrix_to_json;
    using model_json_detail::vector_to_json;

    nlohmann::ordered_json root;
    root["format_version"] = kModelFormatVersion;
    root["kind"] = std::string(model_kind_name(model.kind()));
    root["config"] = train_config_to_json(model.config);
    root["num_classes"] = model.num_classes();
    root["width"] = model.width();

    if (const auto* lr = std::get_if<LogRegModel>(&model.model)) {
        root["weights"] = matrix_to_json(lr->weights, lr->num_classes, lr->width);
        root["biases"] = vector_to_json(lr->biases);
    } else if (const auto* forest = std::get_if<ForestModel>(&model.model)) {
        nlohmann::ordered_json trees = nlohmann::ordered_json::array();
        for (const auto& tree : forest->trees) {
            nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
            for (const auto& node : tree.nodes) {
                nlohmann::ordered_json n;
                if (node.is_leaf()) {
                    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
                    nlohmann::ordered_json probs = nlohmann::ordered_json::array();
                    for (const auto& [cls, prob] : node.leaf) {
                        classes.push_back(cls);
                        probs.push_back(prob);
                    }
                    n["classes"] = std::move(classes);
                    n["probs"] = std::move(probs);
                } else {
                    n["column"] = node.column;
                    n["threshold"] = node.threshold;
                    n["left"] = node.left;
                    n["right"] = node.right;
                }
                nodes.push_back(std::move(n));
            }
            trees.push_back(nlohmann::ordered_json{{"nodes", std::move(nodes)}});
        }
        root["trees"] = std::move(trees);
    } else {
        const auto& mlp = std::get<MlpModel>(model.model);
        root["hidden_units"] = mlp.hidden_units;
        root["w1"] = matrix_to_json(mlp.w1, mlp.hidden_units, mlp.width);
        root["b1"] = vector_to_json(mlp.b1);
        root["w2"] = matrix_to_json(mlp.w2, mlp.num_classes, mlp.hidden_units);
        root["b2"] = vector_to_json(mlp.b2);
    }
    return root;
}

inline TrainedModel model_from_json(const nlohmann::json& root) {
    using model_json_detail::matrix_from_json;
    using model_json_detail::vector_from_json;

    if (!root.is_object()) throw io_error("model JSON: expected an object");
    if (!root.contains("format_version") || root["format_version"].get<int>() != kModelFormatVersion) {
        throw io_error("model JSON: missing or unsupported format_version");
    }
    TrainConfig config;
    try {
        config = config_detail::parse_model(root.at("config"), "config");
    } catch (const config_error& e) {
        throw io_error(std::string("model JSON: ") + e.what());
    }

    const int num_classes = root.at("num_classes").get<int>();
    const int width = root.at("width").get<int>();
    if (num_classes < 1 || width < 1) throw io_error("model JSON: bad dimensions");

    switch (config.kind) {
        case ModelKind::LogReg: {
            LogRegModel m;
            m.num_classes = num_classes;
            m.width = width;
            m.weights = matrix_from_json(root.at("weights"), num_classes, width, "weights");
            m.biases = vector_from_json(root.at("biases"), num_classes, "biases");
            return TrainedModel{config, std::move(m)};
        }
        case ModelKind::Forest: {
            ForestModel m;
            m.num_classes = num_classes;
            m.width = width;
            const auto& trees = root.at("trees");
            if (!trees.is_array() || trees.empty()) throw io_error("model JSON: bad trees array");
            for (const auto& tree_node : trees) {
                DecisionTree tree;
                for (const auto& n : tree_node.at("nodes")) {
                    TreeNode node;
                    if (n.contains("column")) {
                        node.column = n.at("column").get<int>();
                        node.threshold = n.at("threshold").get<double>();
                        node.left = n.at("left").get<int>();
                        node.right = n.at("right").get<int>();
                        if (node.column < 0 || node.column >= width) {
                            throw io_error("model JSON: split column out of range");
                        }
                    } else {
                        const auto& classes = n.at("classes");
                        const auto& probs = n.at("probs");
                        if (classes.size() != probs.size() || classes.empty()) {
                            throw io_error("model JSON: malformed leaf");
                        }
                        for (std::size_t i = 0; i < classes.size(); ++i) {
                            const int cls = classes[i].get<int>();
                            if (cls < 0 || cls >= num_classes) {
                                throw io_error("model JSON: leaf class out of range");
                            }
                            node.leaf.emplace_back(cls, probs[i].get<double>());
                        }
                    }
                    tree.nodes.push_back(std::move(node));
                }
                if (tree.nodes.empty()) throw io_error("model JSON: empty tree");
                m.trees.push_back(std::move(tree));
            }
            return TrainedModel{config, std::move(m)};
        }
        case ModelKind::Mlp: {
            MlpModel m;
            m.num_classes = num_classes;
            m.width = width;
            m.hidden_units = root.at("hidden_units").get<int>();
            if (m.hidden_units < 1) throw io_error("model JSON: bad hidden_units");
            m.w1 = matrix_from_json(root.at("w1"), m.hidden_units, width, "w1");
            m.b1 = vector_from_json(root.at("b1"), m.hidden_units, "b1");
            m.w2 = matrix_from_json(root.at("w2"), num_classes, m.hidden_units, "w2");
            m.b2 = vector_from_json(root.at("b2"), num_classes, "b2");
            return TrainedModel{config, std::move(m)};
        }
    }
    throw io_error("model JSON: unknown kind");
}

inline void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw io_error("write failure: " + path);
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("model JSON parse error in " + path + ": " + e.what());
    }
    return model_from_json(root);
}

}  // namespace zodiaclab
