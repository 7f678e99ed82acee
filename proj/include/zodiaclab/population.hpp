#pragma once

// Seeded synthetic population: one zodiac sign, a handful of nuisance
// covariates, and a personality label sampled from a sign-conditional mixture.
//
// Generation is a pure function of (config, lexicon, table). A single PCG32
// stream (config.seed, stream 0) drives everything; per individual the draw
// order is fixed: sign, birth month, sleep (two draws), chai, retrograde,
// lunar vibe, label (two draws). Changing that order is a breaking change to
// the data format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "zodiaclab/errors.hpp"
#include "zodiaclab/lexicon.hpp"
#include "zodiaclab/rng.hpp"

namespace zodiaclab {

inline constexpr std::uint64_t kPopulationStream = 0;

struct GenerationConfig {
    std::uint32_t population_size = 5000;
    double signal_probability = 0.1;
    std::uint64_t seed = 42;
    double sleep_mean_hours = 7.0;
    double sleep_sd_hours = 1.0;
    double chai_rate_cups_per_day = 3.0;
    double retrograde_probability = 0.19;

    void validate() const {
        if (population_size < 1) {
            throw config_error("generation.population_size: must be >= 1");
        }
        if (!(signal_probability >= 0.0 && signal_probability <= 1.0)) {
            throw config_error("generation.signal_probability: must be within [0, 1]");
        }
        if (!(sleep_sd_hours > 0.0)) {
            throw config_error("generation.sleep_sd_hours: must be > 0");
        }
        if (!(chai_rate_cups_per_day > 0.0)) {
            throw config_error("generation.chai_rate_cups_per_day: must be > 0");
        }
        if (!(retrograde_probability >= 0.0 && retrograde_probability <= 1.0)) {
            throw config_error("generation.retrograde_probability: must be within [0, 1]");
        }
        if (!std::isfinite(sleep_mean_hours)) {
            throw config_error("generation.sleep_mean_hours: must be finite");
        }
    }
};

struct Individual {
    ZodiacSign sign = ZodiacSign::Aries;
    int birth_month = 1;             // 1..12, within the sign's calendar span
    double sleep_hours = 0.0;        // clamped to [0, 24]
    int chai_cups = 0;               // cups per day
    bool mercury_retrograde = false;
    double lunar_vibe = 0.0;         // (0, 1)
    TraitId label;
};

struct Population {
    GenerationConfig config;  // provenance record
    std::vector<Individual> individuals;
};

// Calendar span of a sign in a non-leap year. Every tropical sign straddles
// exactly two months; the day counts weight the month choice.
struct SignMonthSpan {
    int first_month;
    int first_days;
    int second_month;
    int second_days;
};

inline const SignMonthSpan& month_span(ZodiacSign sign) {
    static constexpr std::array<SignMonthSpan, kSignCount> kSpans = {{
        {3, 11, 4, 19},   // Aries: Mar 21 - Apr 19
        {4, 11, 5, 20},   // Taurus: Apr 20 - May 20
        {5, 11, 6, 20},   // Gemini: May 21 - Jun 20
        {6, 10, 7, 22},   // Cancer: Jun 21 - Jul 22
        {7, 9, 8, 22},    // Leo: Jul 23 - Aug 22
        {8, 9, 9, 22},    // Virgo: Aug 23 - Sep 22
        {9, 8, 10, 22},   // Libra: Sep 23 - Oct 22
        {10, 9, 11, 21},  // Scorpio: Oct 23 - Nov 21
        {11, 9, 12, 21},  // Sagittarius: Nov 22 - Dec 21
        {12, 10, 1, 19},  // Capricorn: Dec 22 - Jan 19
        {1, 12, 2, 18},   // Aquarius: Jan 20 - Feb 18
        {2, 10, 3, 20},   // Pisces: Feb 19 - Mar 20
    }};
    return kSpans[static_cast<std::size_t>(sign)];
}

// Mixture label draw. One unit draw decides the branch; one uniform_int draw
// selects within the branch (sign set indexed in ascending TraitId order, or
// the full pool).
inline TraitId sample_label(ZodiacSign sign, const AssignmentTable& table,
                            double signal_probability, Pcg32& rng) {
    if (rng.bernoulli(signal_probability)) {
        const auto traits = table.traits_of(sign);
        return traits[rng.uniform_int(kTraitsPerSign)];
    }
    return TraitId{static_cast<int>(rng.uniform_int(kTraitCount))};
}

inline Population generate_population(const GenerationConfig& config,
                                      const TraitLexicon& lexicon,
                                      const AssignmentTable& table) {
    config.validate();
    if (lexicon.size() != kTraitCount) {
        throw std::invalid_argument("generate_population: lexicon must hold exactly 100 descriptors");
    }

    Pcg32 rng(config.seed, kPopulationStream);
    Population population{config, {}};
    population.individuals.reserve(config.population_size);

    for (std::uint32_t i = 0; i < config.population_size; ++i) {
        Individual ind;
        ind.sign = static_cast<ZodiacSign>(rng.uniform_int(kSignCount));

        const auto& span = month_span(ind.sign);
        const double first_weight =
            static_cast<double>(span.first_days) / (span.first_days + span.second_days);
        ind.birth_month = rng.bernoulli(first_weight) ? span.first_month : span.second_month;

        ind.sleep_hours =
            std::clamp(rng.normal(config.sleep_mean_hours, config.sleep_sd_hours), 0.0, 24.0);
        ind.chai_cups = static_cast<int>(rng.poisson(config.chai_rate_cups_per_day));
        ind.mercury_retrograde = rng.bernoulli(config.retrograde_probability);
        ind.lunar_vibe = rng.next_unit();
        ind.label = sample_label(ind.sign, table, config.signal_probability, rng);

        population.individuals.push_back(ind);
    }
    return population;
}

namespace detail {

// %.9g, matching the CSV contract for real-valued fields.
inline std::string format_real9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

}  // namespace detail

inline constexpr std::string_view kPopulationCsvHeader =
    "sign,birth_month,sleep_hours,chai_cups,mercury_retrograde,lunar_vibe,label";

inline void write_population_csv(const Population& population, std::ostream& out) {
    out << kPopulationCsvHeader << '\n';
    for (const auto& ind : population.individuals) {
        out << sign_name(ind.sign) << ',' << ind.birth_month << ','
            << detail::format_real9(ind.sleep_hours) << ',' << ind.chai_cups << ','
            << (ind.mercury_retrograde ? 1 : 0) << ','
            << detail::format_real9(ind.lunar_vibe) << ',' << ind.label.index << '\n';
    }
    if (!out) throw io_error("write_population_csv: stream failure");
}

inline void write_population_csv(const Population& population, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    write_population_csv(population, out);
}

inline std::vector<Individual> read_population_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kPopulationCsvHeader) {
        throw io_error("population CSV: missing or malformed header");
    }
    std::vector<Individual> individuals;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<std::string, 7> fields;
        std::size_t start = 0;
        for (int f = 0; f < 7; ++f) {
            const auto comma = line.find(',', start);
            const bool last = (f == 6);
            if (last != (comma == std::string::npos)) {
                throw io_error("population CSV line " + std::to_string(line_no) +
                               ": expected 7 fields");
            }
            fields[static_cast<std::size_t>(f)] =
                line.substr(start, last ? std::string::npos : comma - start);
            start = comma + 1;
        }
        Individual ind;
        const auto sign = sign_from_name(fields[0]);
        if (!sign) {
            throw io_error("population CSV line " + std::to_string(line_no) +
                           ": unknown sign \"" + fields[0] + "\"");
        }
        try {
            ind.sign = *sign;
            ind.birth_month = std::stoi(fields[1]);
            ind.sleep_hours = std::stod(fields[2]);
            ind.chai_cups = std::stoi(fields[3]);
            ind.mercury_retrograde = std::stoi(fields[4]) != 0;
            ind.lunar_vibe = std::stod(fields[5]);
            ind.label = TraitId{std::stoi(fields[6])};
        } catch (const std::exception&) {
            throw io_error("population CSV line " + std::to_string(line_no) +
                           ": unparsable field");
        }
        individuals.push_back(ind);
    }
    return individuals;
}

inline std::vector<Individual> read_population_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path);
    return read_population_csv(in);
}

}  // namespace zodiaclab
