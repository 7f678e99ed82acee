#pragma once

// Trait vocabulary and the overlapping zodiac-to-trait assignment table.
//
// The vocabulary holds 100 everyday personality descriptors in ascending ASCII
// order; a TraitId is a position in that list. Each sign owns 10 descriptors.
// The sets overlap on purpose: the four signs of each classical element share a
// four-trait temperament core, 24 further traits are shared by exactly one pair
// of signs, and 24 are unique to a single sign. Every assigned trait therefore
// appears in one to three signs.
//
// All data is immutable after construction and safe for concurrent reads.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zodiaclab {

inline constexpr int kSignCount = 12;
inline constexpr int kTraitCount = 100;
inline constexpr int kTraitsPerSign = 10;

enum class ZodiacSign : int {
    Aries,
    Taurus,
    Gemini,
    Cancer,
    Leo,
    Virgo,
    Libra,
    Scorpio,
    Sagittarius,
    Capricorn,
    Aquarius,
    Pisces,
};

inline constexpr std::array<std::string_view, kSignCount> kSignNames = {
    "Aries",   "Taurus",      "Gemini",    "Cancer",   "Leo",      "Virgo",
    "Libra",   "Scorpio",     "Sagittarius", "Capricorn", "Aquarius", "Pisces",
};

constexpr std::string_view sign_name(ZodiacSign sign) {
    return kSignNames[static_cast<std::size_t>(sign)];
}

inline std::optional<ZodiacSign> sign_from_name(std::string_view name) {
    for (int i = 0; i < kSignCount; ++i) {
        if (kSignNames[static_cast<std::size_t>(i)] == name) {
            return static_cast<ZodiacSign>(i);
        }
    }
    return std::nullopt;
}

constexpr std::array<ZodiacSign, kSignCount> all_signs() {
    std::array<ZodiacSign, kSignCount> signs{};
    for (int i = 0; i < kSignCount; ++i) signs[static_cast<std::size_t>(i)] = static_cast<ZodiacSign>(i);
    return signs;
}

// Index into the trait vocabulary. Traits compare by id, never by string, so
// ordering is locale-independent.
struct TraitId {
    int index = 0;
    friend constexpr auto operator<=>(TraitId, TraitId) = default;
};

namespace detail {

// Canonical vocabulary, ascending ASCII order. Position defines the TraitId.
inline constexpr std::array<std::string_view, kTraitCount> kDescriptors = {
    "Adaptable",  "Adventurous",   "Affectionate", "Ambitious",
    "Analytical", "Anxious",       "Assertive",    "Bold",
    "Brave",      "Calm",          "Caring",       "Cautious",
    "Charming",   "Cheerful",      "Compassionate", "Competitive",
    "Confident",  "Considerate",   "Cooperative",  "Courageous",
    "Creative",   "Curious",       "Decisive",     "Dependable",
    "DetailOriented", "Determined", "Diplomatic",  "Direct",
    "Disciplined", "Dramatic",     "Dreamy",       "Easygoing",
    "Eccentric",  "Efficient",     "Emotional",    "Empathetic",
    "Energetic",  "Enthusiastic",  "Expressive",   "FairMinded",
    "Faithful",   "Flexible",      "Focused",      "Forgiving",
    "FreeSpirited", "Friendly",    "Generous",     "Gentle",
    "Grounded",   "Helpful",       "Honest",       "Humble",
    "Humorous",   "Idealistic",    "Imaginative",  "Impulsive",
    "Independent", "Intense",      "Intuitive",    "Inventive",
    "Kind",       "Logical",       "Loyal",        "Methodical",
    "Modest",     "Moody",         "Mysterious",   "Nurturing",
    "Observant",  "OpenMinded",    "Optimistic",   "Organized",
    "Outgoing",   "Passionate",    "Patient",      "Perceptive",
    "Persistent", "Philosophical", "Playful",      "Polite",
    "Practical",  "Protective",    "Quiet",        "Reflective",
    "Reserved",   "Resourceful",   "Responsible",  "Restless",
    "Romantic",   "Sensitive",     "Serious",      "Social",
    "Stubborn",   "Sympathetic",   "Tactful",      "Talkative",
    "Thoughtful", "Visionary",     "Warm",         "Witty",
};

// Stereotype sets, 10 descriptors per sign. The leading four entries are the
// shared element core (fire/earth/air/water).
inline constexpr std::array<std::array<std::string_view, kTraitsPerSign>, kSignCount>
    kSignTraitNames = {{
        // Aries
        {"Confident", "Energetic", "Bold", "Passionate", "Adventurous", "Restless",
         "Brave", "Competitive", "Impulsive", "Direct"},
        // Taurus
        {"Practical", "Disciplined", "Dependable", "Patient", "Persistent",
         "Protective", "Romantic", "Grounded", "Stubborn", "Calm"},
        // Gemini
        {"Social", "Curious", "Expressive", "OpenMinded", "Restless", "Witty",
         "Inventive", "Imaginative", "Talkative", "Adaptable"},
        // Cancer
        {"Emotional", "Intuitive", "Sensitive", "Loyal", "Warm", "Protective",
         "Compassionate", "Moody", "Sympathetic", "Caring"},
        // Leo
        {"Confident", "Energetic", "Bold", "Passionate", "Charming", "Optimistic",
         "Warm", "Ambitious", "Dramatic", "Generous"},
        // Virgo
        {"Practical", "Disciplined", "Dependable", "Patient", "Grounded",
         "Observant", "Logical", "Organized", "Analytical", "DetailOriented"},
        // Libra
        {"Social", "Curious", "Expressive", "OpenMinded", "Charming", "Romantic",
         "Gentle", "FairMinded", "Tactful", "Easygoing"},
        // Scorpio
        {"Emotional", "Intuitive", "Sensitive", "Loyal", "Brave", "Observant",
         "Moody", "Mysterious", "Intense", "Determined"},
        // Sagittarius
        {"Confident", "Energetic", "Bold", "Passionate", "Adventurous",
         "Optimistic", "Independent", "Witty", "Philosophical", "FreeSpirited"},
        // Capricorn
        {"Practical", "Disciplined", "Dependable", "Patient", "Competitive",
         "Ambitious", "Persistent", "Organized", "Responsible", "Serious"},
        // Aquarius
        {"Social", "Curious", "Expressive", "OpenMinded", "Independent",
         "Logical", "Inventive", "FairMinded", "Eccentric", "Visionary"},
        // Pisces
        {"Emotional", "Intuitive", "Sensitive", "Loyal", "Imaginative", "Gentle",
         "Compassionate", "Mysterious", "Dreamy", "Empathetic"},
    }};

}  // namespace detail

class TraitLexicon {
public:
    int size() const noexcept { return static_cast<int>(descriptors_.size()); }

    std::string_view name(TraitId id) const {
        if (id.index < 0 || id.index >= size()) {
            throw std::out_of_range("TraitLexicon: trait id out of range");
        }
        return descriptors_[static_cast<std::size_t>(id.index)];
    }

    std::optional<TraitId> find(std::string_view descriptor) const {
        for (int i = 0; i < size(); ++i) {
            if (descriptors_[static_cast<std::size_t>(i)] == descriptor) return TraitId{i};
        }
        return std::nullopt;
    }

    std::span<const std::string> descriptors() const noexcept { return descriptors_; }

private:
    friend TraitLexicon build_default_lexicon();
    std::vector<std::string> descriptors_;
};

class AssignmentTable {
public:
    // Ascending TraitId order.
    std::span<const TraitId, kTraitsPerSign> traits_of(ZodiacSign sign) const {
        return sets_[static_cast<std::size_t>(sign)];
    }

    bool contains(ZodiacSign sign, TraitId trait) const {
        const auto traits = traits_of(sign);
        return std::binary_search(traits.begin(), traits.end(), trait);
    }

private:
    friend AssignmentTable build_default_assignments(const TraitLexicon&);
    std::array<std::array<TraitId, kTraitsPerSign>, kSignCount> sets_{};
};

inline TraitLexicon build_default_lexicon() {
    TraitLexicon lexicon;
    lexicon.descriptors_.assign(detail::kDescriptors.begin(), detail::kDescriptors.end());
    return lexicon;
}

inline AssignmentTable build_default_assignments(const TraitLexicon& lexicon) {
    AssignmentTable table;
    for (int s = 0; s < kSignCount; ++s) {
        auto& set = table.sets_[static_cast<std::size_t>(s)];
        for (int t = 0; t < kTraitsPerSign; ++t) {
            const auto name = detail::kSignTraitNames[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
            const auto id = lexicon.find(name);
            if (!id) {
                throw std::invalid_argument(
                    "build_default_assignments: descriptor \"" + std::string(name) +
                    "\" missing from lexicon");
            }
            set[static_cast<std::size_t>(t)] = *id;
        }
        std::sort(set.begin(), set.end());
        if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
            throw std::invalid_argument("build_default_assignments: duplicate trait in sign set");
        }
    }
    return table;
}

using OverlapMatrix = std::array<std::array<int, kSignCount>, kSignCount>;

// entry (i, j) = |traits(sign_i) intersect traits(sign_j)|
inline OverlapMatrix overlap_matrix(const AssignmentTable& table) {
    OverlapMatrix matrix{};
    for (int i = 0; i < kSignCount; ++i) {
        for (int j = 0; j < kSignCount; ++j) {
            const auto a = table.traits_of(static_cast<ZodiacSign>(i));
            const auto b = table.traits_of(static_cast<ZodiacSign>(j));
            int count = 0;
            for (const auto t : a) {
                count += std::binary_search(b.begin(), b.end(), t) ? 1 : 0;
            }
            matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = count;
        }
    }
    return matrix;
}

}  // namespace zodiaclab
