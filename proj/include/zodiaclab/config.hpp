#pragma once

// Experiment configuration as a single JSON document. Parsing is strict:
// unknown keys and type mismatches are reported with their field path, and
// syntax errors carry the line and column computed from the parser's byte
// offset.

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/experiment.hpp"

namespace zodiaclab {
namespace config_detail {

using json = nlohmann::json;

inline std::string json_type_name(const json& value) {
    return value.type_name();
}

class FieldReader {
public:
    FieldReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
        if (!object_.is_object()) {
            throw config_error(path_ + ": expected an object, got " + json_type_name(object_));
        }
    }

    ~FieldReader() = default;

    template <typename T>
    void read(const char* key, T& out) {
        const auto it = object_.find(key);
        if (it == object_.end()) return;  // keep default
        consumed_.push_back(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) throw type_mismatch(key, *it, "a boolean");
            out = it->get<bool>();
        } else if constexpr (std::is_unsigned_v<T>) {
            std::uint64_t value = 0;
            if (it->is_number_unsigned()) {
                value = it->get<std::uint64_t>();
            } else if (it->is_number_integer()) {
                const auto v = it->get<std::int64_t>();
                if (v < 0) throw config_error(qualified(key) + ": must be >= 0");
                value = static_cast<std::uint64_t>(v);
            } else {
                throw type_mismatch(key, *it, "an integer");
            }
            if (value > std::numeric_limits<T>::max()) {
                throw config_error(qualified(key) + ": value out of range");
            }
            out = static_cast<T>(value);
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw type_mismatch(key, *it, "an integer");
            const auto value = it->get<std::int64_t>();
            if (value < std::numeric_limits<T>::min() || value > std::numeric_limits<T>::max()) {
                throw config_error(qualified(key) + ": value out of range");
            }
            out = static_cast<T>(value);
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) throw type_mismatch(key, *it, "a number");
            out = it->get<double>();
        } else {
            if (!it->is_string()) throw type_mismatch(key, *it, "a string");
            out = it->get<std::string>();
        }
    }

    const json* child(const char* key) {
        const auto it = object_.find(key);
        if (it == object_.end()) return nullptr;
        consumed_.push_back(key);
        return &*it;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : object_.items()) {
            bool known = false;
            for (const auto& c : consumed_) {
                if (c == key) {
                    known = true;
                    break;
                }
            }
            if (!known) throw config_error(qualified(key.c_str()) + ": unknown field");
        }
    }

    std::string qualified(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

private:
    config_error type_mismatch(const char* key, const json& value, const char* expected) const {
        return config_error(qualified(key) + ": expected " + expected + ", got " +
                            json_type_name(value));
    }

    const json& object_;
    std::string path_;
    std::vector<std::string> consumed_;
};

inline GenerationConfig parse_generation(const json& node, const std::string& path) {
    GenerationConfig config;
    FieldReader reader(node, path);
    reader.read("population_size", config.population_size);
    reader.read("signal_probability", config.signal_probability);
    reader.read("seed", config.seed);
    reader.read("sleep_mean_hours", config.sleep_mean_hours);
    reader.read("sleep_sd_hours", config.sleep_sd_hours);
    reader.read("chai_rate_cups_per_day", config.chai_rate_cups_per_day);
    reader.read("retrograde_probability", config.retrograde_probability);
    reader.reject_unknown();
    return config;
}

inline TrainConfig parse_model(const json& node, const std::string& path) {
    FieldReader reader(node, path);
    std::string kind_name;
    reader.read("kind", kind_name);
    if (kind_name.empty()) throw config_error(path + ".kind: required field is missing");
    const auto kind = model_kind_from_name(kind_name);
    if (!kind) {
        throw config_error(path + ".kind: unknown model kind \"" + kind_name +
                           "\" (expected logreg, forest, or mlp)");
    }
    TrainConfig config;
    config.kind = *kind;
    reader.read("seed", config.seed);
    switch (*kind) {
        case ModelKind::LogReg:
            reader.read("learning_rate", config.logreg.learning_rate);
            reader.read("epochs", config.logreg.epochs);
            reader.read("batch_size", config.logreg.batch_size);
            reader.read("l2_penalty", config.logreg.l2_penalty);
            break;
        case ModelKind::Forest:
            reader.read("n_trees", config.forest.n_trees);
            reader.read("max_depth", config.forest.max_depth);
            reader.read("min_samples_split", config.forest.min_samples_split);
            reader.read("features_per_split", config.forest.features_per_split);
            break;
        case ModelKind::Mlp:
            reader.read("hidden_units", config.mlp.hidden_units);
            reader.read("learning_rate", config.mlp.learning_rate);
            reader.read("epochs", config.mlp.epochs);
            reader.read("batch_size", config.mlp.batch_size);
            break;
    }
    reader.reject_unknown();
    return config;
}

inline EvalSettings parse_evaluation(const json& node, const std::string& path) {
    EvalSettings settings;
    FieldReader reader(node, path);
    reader.read("k_folds", settings.k_folds);
    reader.read("test_fraction", settings.test_fraction);
    reader.read("permutation_repetitions", settings.permutation_repetitions);
    reader.read("experiment_seed", settings.experiment_seed);
    reader.reject_unknown();
    return settings;
}

}  // namespace config_detail

inline ExperimentConfig parse_experiment_config_json(const nlohmann::json& root) {
    using config_detail::FieldReader;
    ExperimentConfig config = ExperimentConfig::defaults();
    FieldReader reader(root, "");
    if (const auto* generation = reader.child("generation")) {
        config.generation = config_detail::parse_generation(*generation, "generation");
    }
    if (const auto* models = reader.child("models")) {
        if (!models->is_array()) throw config_error("models: expected an array");
        if (models->empty()) throw config_error("models: must not be empty");
        config.models.clear();
        for (std::size_t i = 0; i < models->size(); ++i) {
            config.models.push_back(config_detail::parse_model(
                (*models)[i], "models[" + std::to_string(i) + "]"));
        }
    }
    if (const auto* evaluation = reader.child("evaluation")) {
        config.evaluation = config_detail::parse_evaluation(*evaluation, "evaluation");
    }
    reader.read("output_directory", config.output_directory);
    reader.reject_unknown();
    config.validate();
    return config;
}

// Parses and validates; syntax errors are reported as path:line:column.
inline ExperimentConfig parse_experiment_config(const std::string& text,
                                                const std::string& source_name = "<config>") {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t limit = std::min(e.byte, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw config_error(source_name + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": JSON syntax error");
    }
    return parse_experiment_config_json(root);
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw io_error("cannot read config file: " + path);
    return parse_experiment_config(buffer.str(), path);
}

inline nlohmann::ordered_json generation_config_to_json(const GenerationConfig& config) {
    nlohmann::ordered_json node;
    node["population_size"] = config.population_size;
    node["signal_probability"] = config.signal_probability;
    node["seed"] = config.seed;
    node["sleep_mean_hours"] = config.sleep_mean_hours;
    node["sleep_sd_hours"] = config.sleep_sd_hours;
    node["chai_rate_cups_per_day"] = config.chai_rate_cups_per_day;
    node["retrograde_probability"] = config.retrograde_probability;
    return node;
}

inline nlohmann::ordered_json train_config_to_json(const TrainConfig& config) {
    nlohmann::ordered_json node;
    node["kind"] = std::string(model_kind_name(config.kind));
    node["seed"] = config.seed;
    switch (config.kind) {
        case ModelKind::LogReg:
            node["learning_rate"] = config.logreg.learning_rate;
            node["epochs"] = config.logreg.epochs;
            node["batch_size"] = config.logreg.batch_size;
            node["l2_penalty"] = config.logreg.l2_penalty;
            break;
        case ModelKind::Forest:
            node["n_trees"] = config.forest.n_trees;
            node["max_depth"] = config.forest.max_depth;
            node["min_samples_split"] = config.forest.min_samples_split;
            node["features_per_split"] = config.forest.features_per_split;
            break;
        case ModelKind::Mlp:
            node["hidden_units"] = config.mlp.hidden_units;
            node["learning_rate"] = config.mlp.learning_rate;
            node["epochs"] = config.mlp.epochs;
            node["batch_size"] = config.mlp.batch_size;
            break;
    }
    return node;
}

inline nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json node;
    node["generation"] = generation_config_to_json(config.generation);
    node["models"] = nlohmann::ordered_json::array();
    for (const auto& model : config.models) {
        node["models"].push_back(train_config_to_json(model));
    }
    nlohmann::ordered_json evaluation;
    evaluation["k_folds"] = config.evaluation.k_folds;
    evaluation["test_fraction"] = config.evaluation.test_fraction;
    evaluation["permutation_repetitions"] = config.evaluation.permutation_repetitions;
    evaluation["experiment_seed"] = config.evaluation.experiment_seed;
    node["evaluation"] = evaluation;
    node["output_directory"] = config.output_directory;
    return node;
}

}  // namespace zodiaclab
