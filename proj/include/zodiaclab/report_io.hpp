#pragma once

// Report artifacts: report.json, accuracy_summary.csv, per-model confusion
// CSVs, and the grouped-bar accuracy chart as SVG.
//
// report.json is written by a local serializer that formats every real with
// 17 significant digits, so identical experiment configs produce identical
// bytes and parsing recovers the exact double values.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zodiaclab/config.hpp"
#include "zodiaclab/errors.hpp"
#include "zodiaclab/experiment.hpp"

namespace zodiaclab {
namespace report_detail {

inline std::string format_real17(double value) {
    if (!std::isfinite(value)) throw io_error("report: non-finite real value");
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline void escape_json_string(const std::string& text, std::string& out) {
    out += '"';
    for (const char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    out += buffer;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

// Recursive pretty printer; floats at 17 significant digits.
inline void dump_17g(const nlohmann::ordered_json& node, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (node.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (node.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : node.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_inner;
                escape_json_string(key, out);
                out += ": ";
                dump_17g(value, out, indent + 1);
            }
            out += '\n';
            out += pad;
            out += '}';
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (node.empty()) {
                out += "[]";
                return;
            }
            // scalar-only arrays stay on one line
            bool scalars_only = true;
            for (const auto& v : node) {
                if (v.is_structured()) {
                    scalars_only = false;
                    break;
                }
            }
            if (scalars_only) {
                out += '[';
                bool first = true;
                for (const auto& v : node) {
                    if (!first) out += ", ";
                    first = false;
                    dump_17g(v, out, indent);
                }
                out += ']';
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : node) {
                if (!first) out += ",\n";
                first = false;
                out += pad_inner;
                dump_17g(v, out, indent + 1);
            }
            out += '\n';
            out += pad;
            out += ']';
            return;
        }
        case nlohmann::ordered_json::value_t::string:
            escape_json_string(node.get<std::string>(), out);
            return;
        case nlohmann::ordered_json::value_t::boolean:
            out += node.get<bool>() ? "true" : "false";
            return;
        case nlohmann::ordered_json::value_t::number_integer:
            out += std::to_string(node.get<std::int64_t>());
            return;
        case nlohmann::ordered_json::value_t::number_unsigned:
            out += std::to_string(node.get<std::uint64_t>());
            return;
        case nlohmann::ordered_json::value_t::number_float:
            out += format_real17(node.get<double>());
            return;
        default:
            out += "null";
            return;
    }
}

inline nlohmann::ordered_json confusion_to_json(const ConfusionMatrix& matrix) {
    nlohmann::ordered_json node;
    node["num_classes"] = matrix.num_classes;
    node["support"] = matrix.support;
    nlohmann::ordered_json counts = nlohmann::ordered_json::array();
    for (int t = 0; t < matrix.num_classes; ++t) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int p = 0; p < matrix.num_classes; ++p) row.push_back(matrix.at(t, p));
        counts.push_back(std::move(row));
    }
    node["counts"] = std::move(counts);
    return node;
}

inline ConfusionMatrix confusion_from_json(const nlohmann::json& node) {
    ConfusionMatrix matrix;
    matrix.num_classes = node.at("num_classes").get<int>();
    if (matrix.num_classes < 1) throw io_error("report JSON: bad confusion num_classes");
    matrix.support = node.at("support").get<std::vector<std::int64_t>>();
    const auto& counts = node.at("counts");
    if (matrix.support.size() != static_cast<std::size_t>(matrix.num_classes) ||
        !counts.is_array() || counts.size() != static_cast<std::size_t>(matrix.num_classes)) {
        throw io_error("report JSON: bad confusion shape");
    }
    for (const auto& row : counts) {
        const auto values = row.get<std::vector<std::int64_t>>();
        if (values.size() != static_cast<std::size_t>(matrix.num_classes)) {
            throw io_error("report JSON: bad confusion row");
        }
        matrix.counts.insert(matrix.counts.end(), values.begin(), values.end());
    }
    return matrix;
}

}  // namespace report_detail

inline constexpr int kReportFormatVersion = 1;

inline nlohmann::ordered_json report_to_ordered_json(const EvaluationReport& report) {
    nlohmann::ordered_json root;
    root["format_version"] = kReportFormatVersion;
    root["config"] = experiment_config_to_json(report.config);
    root["n_train"] = report.n_train;
    root["n_test"] = report.n_test;
    nlohmann::ordered_json baselines;
    baselines["uniform_random_accuracy"] = report.baselines.uniform_random_accuracy;
    baselines["majority_class_accuracy"] = report.baselines.majority_class_accuracy;
    baselines["bayes_accuracy"] = report.baselines.bayes_accuracy;
    root["baselines"] = std::move(baselines);

    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (const auto& model : report.models) {
        nlohmann::ordered_json node;
        node["kind"] = std::string(model_kind_name(model.config.kind));
        node["config"] = train_config_to_json(model.config);
        node["cv_fold_accuracies"] = model.cv_fold_accuracies;
        node["cv_mean_accuracy"] = model.cv_mean_accuracy;
        node["test_accuracy"] = model.test_accuracy;
        node["shuffled_accuracies"] = model.shuffled_accuracies;
        node["permutation_p_value"] = model.permutation_p_value;
        node["confusion"] = report_detail::confusion_to_json(model.confusion);
        models.push_back(std::move(node));
    }
    root["models"] = std::move(models);
    root["best_model"] = report.best_model;
    root["best_model_selection"] = report.best_model_selection;
    return root;
}

inline std::string report_to_json(const EvaluationReport& report) {
    std::string out;
    report_detail::dump_17g(report_to_ordered_json(report), out, 0);
    out += '\n';
    return out;
}

inline EvaluationReport report_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(std::string("report JSON parse error: ") + e.what());
    }
    if (!root.contains("format_version") ||
        root["format_version"].get<int>() != kReportFormatVersion) {
        throw io_error("report JSON: missing or unsupported format_version");
    }
    EvaluationReport report;
    try {
        report.config = parse_experiment_config_json(root.at("config"));
    } catch (const config_error& e) {
        throw io_error(std::string("report JSON: ") + e.what());
    }
    report.n_train = root.at("n_train").get<std::size_t>();
    report.n_test = root.at("n_test").get<std::size_t>();
    const auto& baselines = root.at("baselines");
    report.baselines.uniform_random_accuracy = baselines.at("uniform_random_accuracy").get<double>();
    report.baselines.majority_class_accuracy = baselines.at("majority_class_accuracy").get<double>();
    report.baselines.bayes_accuracy = baselines.at("bayes_accuracy").get<double>();
    for (const auto& node : root.at("models")) {
        ModelEvaluation model;
        try {
            model.config = config_detail::parse_model(node.at("config"), "models[].config");
        } catch (const config_error& e) {
            throw io_error(std::string("report JSON: ") + e.what());
        }
        model.cv_fold_accuracies = node.at("cv_fold_accuracies").get<std::vector<double>>();
        model.cv_mean_accuracy = node.at("cv_mean_accuracy").get<double>();
        model.test_accuracy = node.at("test_accuracy").get<double>();
        model.shuffled_accuracies = node.at("shuffled_accuracies").get<std::vector<double>>();
        model.permutation_p_value = node.at("permutation_p_value").get<double>();
        model.confusion = report_detail::confusion_from_json(node.at("confusion"));
        report.models.push_back(std::move(model));
    }
    report.best_model = root.at("best_model").get<std::string>();
    report.best_model_selection = root.at("best_model_selection").get<std::string>();
    return report;
}

inline constexpr std::string_view kSummaryCsvHeader =
    "model,cv_mean,test_acc,shuffled_mean,p_value,uniform_baseline,majority_baseline,bayes_accuracy";

inline double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

inline std::string accuracy_summary_csv(const EvaluationReport& report) {
    std::string out(kSummaryCsvHeader);
    out += '\n';
    for (const auto& model : report.models) {
        out += std::string(model_kind_name(model.config.kind));
        out += ',';
        out += report_detail::format_real17(model.cv_mean_accuracy);
        out += ',';
        out += report_detail::format_real17(model.test_accuracy);
        out += ',';
        out += report_detail::format_real17(mean_of(model.shuffled_accuracies));
        out += ',';
        out += report_detail::format_real17(model.permutation_p_value);
        out += ',';
        out += report_detail::format_real17(report.baselines.uniform_random_accuracy);
        out += ',';
        out += report_detail::format_real17(report.baselines.majority_class_accuracy);
        out += ',';
        out += report_detail::format_real17(report.baselines.bayes_accuracy);
        out += '\n';
    }
    return out;
}

struct SummaryRow {
    std::string model;
    double cv_mean = 0.0;
    double test_acc = 0.0;
    double shuffled_mean = 0.0;
    double p_value = 0.0;
    double uniform_baseline = 0.0;
    double majority_baseline = 0.0;
    double bayes_accuracy = 0.0;
};

inline std::vector<SummaryRow> read_accuracy_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSummaryCsvHeader) {
        throw io_error("summary CSV: missing or malformed header");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        SummaryRow row;
        std::vector<std::string> parts;
        while (std::getline(fields, field, ',')) parts.push_back(field);
        if (parts.size() != 8) throw io_error("summary CSV: expected 8 fields");
        row.model = parts[0];
        try {
            row.cv_mean = std::stod(parts[1]);
            row.test_acc = std::stod(parts[2]);
            row.shuffled_mean = std::stod(parts[3]);
            row.p_value = std::stod(parts[4]);
            row.uniform_baseline = std::stod(parts[5]);
            row.majority_baseline = std::stod(parts[6]);
            row.bayes_accuracy = std::stod(parts[7]);
        } catch (const std::exception&) {
            throw io_error("summary CSV: unparsable number");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string confusion_csv(const ConfusionMatrix& matrix) {
    std::string out = "true_class";
    for (int p = 0; p < matrix.num_classes; ++p) {
        out += ",pred_" + std::to_string(p);
    }
    out += '\n';
    for (int t = 0; t < matrix.num_classes; ++t) {
        out += std::to_string(t);
        for (int p = 0; p < matrix.num_classes; ++p) {
            out += ',' + std::to_string(matrix.at(t, p));
        }
        out += '\n';
    }
    return out;
}

inline ConfusionMatrix read_confusion_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("true_class,pred_0", 0) != 0) {
        throw io_error("confusion CSV: missing or malformed header");
    }
    ConfusionMatrix matrix;
    std::vector<std::int64_t> counts;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        bool first = true;
        int parsed = 0;
        while (std::getline(fields, field, ',')) {
            if (first) {
                first = false;
                continue;  // leading true-class id column
            }
            counts.push_back(std::stoll(field));
            ++parsed;
        }
        if (rows == 0) {
            matrix.num_classes = parsed;
        } else if (parsed != matrix.num_classes) {
            throw io_error("confusion CSV: ragged row");
        }
        ++rows;
    }
    if (rows != matrix.num_classes) throw io_error("confusion CSV: not square");
    matrix.counts = std::move(counts);
    matrix.support.assign(static_cast<std::size_t>(matrix.num_classes), 0);
    for (int t = 0; t < matrix.num_classes; ++t) {
        for (int p = 0; p < matrix.num_classes; ++p) {
            matrix.support[static_cast<std::size_t>(t)] += matrix.at(t, p);
        }
    }
    return matrix;
}

// Grouped bar chart, one group per model: held-out accuracy next to the mean
// shuffled-label accuracy, with dashed horizontal rules for the uniform
// baseline and the generative ceiling.
inline std::string accuracy_chart_svg(const EvaluationReport& report) {
    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 80.0;
    constexpr double right = 690.0;
    constexpr double top = 48.0;
    constexpr double bottom = 380.0;

    double max_value = std::max(report.baselines.bayes_accuracy,
                                report.baselines.uniform_random_accuracy);
    for (const auto& model : report.models) {
        max_value = std::max(max_value, model.test_accuracy);
        max_value = std::max(max_value, mean_of(model.shuffled_accuracies));
    }
    const double y_max = std::max(0.02, max_value * 1.3);

    const auto y_of = [&](double value) { return bottom - (value / y_max) * (bottom - top); };
    const auto fmt = [](double v) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.2f", v);
        return std::string(buffer);
    };
    const auto fmt4 = [](double v) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.4f", v);
        return std::string(buffer);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "  <text x=\"" + fmt((left + right) / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
           "Held-out accuracy: real vs shuffled labels</text>\n";

    // axes and ticks
    svg += "  <g class=\"axis\" stroke=\"#444444\" stroke-width=\"1\">\n";
    svg += "    <line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(bottom) + "\"/>\n";
    svg += "    <line x1=\"" + fmt(left) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(right) +
           "\" y2=\"" + fmt(bottom) + "\"/>\n";
    svg += "  </g>\n";
    svg += "  <g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double value = y_max * tick / 5.0;
        const double y = y_of(value);
        svg += "    <line x1=\"" + fmt(left - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"#444444\"/>\n";
        svg += "    <text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\">" + fmt4(value) + "</text>\n";
    }
    svg += "  </g>\n";

    // baseline rules
    const auto rule = [&](double value, const char* color, const std::string& label) {
        const double y = y_of(value);
        std::string out;
        out += "  <line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(right) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"" + color +
               "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
        out += "  <text x=\"" + fmt(right) + "\" y=\"" + fmt(y - 5) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
               color + "\">" + label + "</text>\n";
        return out;
    };
    svg += rule(report.baselines.uniform_random_accuracy, "#888888",
                "uniform baseline " + fmt4(report.baselines.uniform_random_accuracy));
    svg += rule(report.baselines.bayes_accuracy, "#bb3344",
                "generative ceiling " + fmt4(report.baselines.bayes_accuracy));

    // bars
    const auto groups = static_cast<double>(report.models.size());
    const double group_width = (right - left) / std::max(groups, 1.0);
    constexpr double bar_width = 44.0;
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        const auto& model = report.models[i];
        const double center = left + group_width * (static_cast<double>(i) + 0.5);
        const double real = model.test_accuracy;
        const double shuffled = mean_of(model.shuffled_accuracies);
        const double x_real = center - bar_width - 3.0;
        const double x_shuffled = center + 3.0;
        const std::string kind(model_kind_name(model.config.kind));

        svg += "  <g class=\"model-group\" id=\"group-" + kind + "\">\n";
        svg += "    <rect x=\"" + fmt(x_real) + "\" y=\"" + fmt(y_of(real)) + "\" width=\"" +
               fmt(bar_width) + "\" height=\"" + fmt(bottom - y_of(real)) +
               "\" fill=\"#4477aa\"/>\n";
        svg += "    <rect x=\"" + fmt(x_shuffled) + "\" y=\"" + fmt(y_of(shuffled)) +
               "\" width=\"" + fmt(bar_width) + "\" height=\"" + fmt(bottom - y_of(shuffled)) +
               "\" fill=\"#ddaa33\"/>\n";
        svg += "    <text x=\"" + fmt(x_real + bar_width / 2) + "\" y=\"" + fmt(y_of(real) - 4) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               fmt4(real) + "</text>\n";
        svg += "    <text x=\"" + fmt(x_shuffled + bar_width / 2) + "\" y=\"" +
               fmt(y_of(shuffled) - 4) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               fmt4(shuffled) + "</text>\n";
        svg += "    <text x=\"" + fmt(center) + "\" y=\"" + fmt(bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + kind +
               "</text>\n";
        svg += "  </g>\n";
    }

    // legend
    svg += "  <g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "    <rect x=\"" + fmt(left) + "\" y=\"" + fmt(height - 28) +
           "\" width=\"14\" height=\"14\" fill=\"#4477aa\"/>\n";
    svg += "    <text x=\"" + fmt(left + 20) + "\" y=\"" + fmt(height - 16) +
           "\">real labels</text>\n";
    svg += "    <rect x=\"" + fmt(left + 130) + "\" y=\"" + fmt(height - 28) +
           "\" width=\"14\" height=\"14\" fill=\"#ddaa33\"/>\n";
    svg += "    <text x=\"" + fmt(left + 150) + "\" y=\"" + fmt(height - 16) +
           "\">shuffled labels (mean of " +
           std::to_string(report.config.evaluation.permutation_repetitions) + ")</text>\n";
    svg += "  </g>\n";
    svg += "</svg>\n";
    return svg;
}

inline void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw io_error("write failure: " + path);
}

// report.json + accuracy_summary.csv + confusion_<kind>.csv + accuracy_comparison.svg
inline void write_report_files(const EvaluationReport& report, const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw io_error("cannot create output directory: " + directory);
    const auto base = std::filesystem::path(directory);
    write_text_file(report_to_json(report), (base / "report.json").string());
    write_text_file(accuracy_summary_csv(report), (base / "accuracy_summary.csv").string());
    for (const auto& model : report.models) {
        const auto name =
            "confusion_" + std::string(model_kind_name(model.config.kind)) + ".csv";
        write_text_file(confusion_csv(model.confusion), (base / name).string());
    }
    write_text_file(accuracy_chart_svg(report), (base / "accuracy_comparison.svg").string());
}

// Optional feature-matrix dump with the schema in the header row.
inline void write_features_csv(const FeatureMatrix& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    for (int c = 0; c < matrix.width(); ++c) {
        if (c > 0) out << ',';
        out << matrix.schema.columns[static_cast<std::size_t>(c)].name;
    }
    out << ",label\n";
    char buffer[40];
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        const auto row = matrix.row(r);
        for (int c = 0; c < matrix.width(); ++c) {
            if (c > 0) out << ',';
            std::snprintf(buffer, sizeof(buffer), "%.9g", row[static_cast<std::size_t>(c)]);
            out << buffer;
        }
        out << ',' << matrix.labels[r].index << '\n';
    }
    if (!out) throw io_error("write failure: " + path);
}

}  // namespace zodiaclab
