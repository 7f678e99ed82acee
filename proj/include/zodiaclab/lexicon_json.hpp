#pragma once

// Lexicon + assignment table as a single JSON document, for documentation and
// auditing: {"descriptors": [...100 strings...], "assignments": {"Aries":
// [10 trait ids], ...}}. Sign keys appear in canonical zodiac order.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/lexicon.hpp"

namespace zodiaclab {

inline nlohmann::ordered_json lexicon_to_json(const TraitLexicon& lexicon,
                                              const AssignmentTable& table) {
    nlohmann::ordered_json root;
    root["descriptors"] = nlohmann::ordered_json::array();
    for (const auto& descriptor : lexicon.descriptors()) {
        root["descriptors"].push_back(descriptor);
    }
    nlohmann::ordered_json assignments;
    for (const auto sign : all_signs()) {
        nlohmann::ordered_json ids = nlohmann::ordered_json::array();
        for (const auto trait : table.traits_of(sign)) ids.push_back(trait.index);
        assignments[std::string(sign_name(sign))] = std::move(ids);
    }
    root["assignments"] = std::move(assignments);
    return root;
}

struct LexiconDocument {
    std::vector<std::string> descriptors;
    std::array<std::vector<int>, kSignCount> assignments;
};

inline LexiconDocument lexicon_from_json(const nlohmann::json& root) {
    LexiconDocument doc;
    if (!root.is_object() || !root.contains("descriptors") || !root.contains("assignments")) {
        throw io_error("lexicon JSON: expected descriptors and assignments");
    }
    doc.descriptors = root.at("descriptors").get<std::vector<std::string>>();
    for (const auto sign : all_signs()) {
        const auto key = std::string(sign_name(sign));
        if (!root.at("assignments").contains(key)) {
            throw io_error("lexicon JSON: missing sign \"" + key + "\"");
        }
        doc.assignments[static_cast<std::size_t>(sign)] =
            root.at("assignments").at(key).get<std::vector<int>>();
    }
    return doc;
}

inline void write_lexicon_json(const TraitLexicon& lexicon, const AssignmentTable& table,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << lexicon_to_json(lexicon, table).dump(2) << '\n';
    if (!out) throw io_error("write failure: " + path);
}

}  // namespace zodiaclab
