#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catml/table.hpp"

namespace catml::synth {

// The seven constitution classes: three pure doshas, three pairs, one triple.
const std::vector<std::string>& dosha_names();

struct GeneratorSpec {
    std::size_t rows = 1000;
    std::size_t features = 147;
    // Used for every feature unless categories_per_feature is non-empty.
    std::size_t categories = 3;
    std::vector<std::size_t> categories_per_feature;
    std::size_t informative_features = 20;
    // Probability that an informative cell takes its class's preferred
    // category; otherwise the cell is uniform over the feature's categories.
    double signal = 0.9;
    double missing_rate = 0.0;
    std::vector<std::string> class_names = dosha_names();
    // Class proportions; empty means balanced.
    std::vector<double> class_balance;
    std::string label_column = "dosha";

    std::size_t categories_of(std::size_t feature) const {
        return categories_per_feature.empty() ? categories : categories_per_feature[feature];
    }
    // Throws ArgumentError describing the first violated constraint.
    void validate() const;
};

// Generated table plus the structure planted in it.
struct Planted {
    CategoricalTable table;
    std::vector<std::size_t> informative_columns;         // ascending
    std::vector<std::vector<Cell>> preferred;             // [class][i] for informative_columns[i]
};

// Feature columns are named f000, f001, ...; categories c0, c1, ... Class
// sizes follow class_balance by largest remainder and the label order is
// shuffled. Informative columns are a seeded random subset. Each class gets
// a seeded preferred category per informative column; when the informative
// columns allow it, classes receive pairwise distinct preference vectors.
Planted generate_planted(const GeneratorSpec& spec, std::uint64_t seed);

CategoricalTable generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace catml::synth
