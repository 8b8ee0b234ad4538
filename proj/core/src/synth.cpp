#include "catml/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "catml/errors.hpp"
#include "catml/rng.hpp"

namespace catml::synth {
namespace {

std::vector<std::size_t> class_sizes(const GeneratorSpec& spec) {
    const std::size_t classes = spec.class_names.size();
    std::vector<double> weights = spec.class_balance;
    if (weights.empty()) weights.assign(classes, 1.0 / static_cast<double>(classes));

    std::vector<std::size_t> sizes(classes, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        const double exact = weights[c] * static_cast<double>(spec.rows);
        sizes[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += sizes[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < spec.rows; i = (i + 1) % classes) {
        ++sizes[remainders[i].second];
        ++assigned;
    }
    return sizes;
}

// Upper bound on distinct preference vectors, saturating.
std::size_t distinct_capacity(const GeneratorSpec& spec, const std::vector<std::size_t>& informative) {
    std::size_t capacity = 1;
    for (std::size_t f : informative) {
        capacity *= spec.categories_of(f);
        if (capacity >= spec.class_names.size()) return capacity;
    }
    return capacity;
}

}  // namespace

const std::vector<std::string>& dosha_names() {
    static const std::vector<std::string> names{"Vata",       "Pita",      "Kapha",          "Vata-Kapha",
                                                "Vata-Pita",  "Pita-Kapha", "Vata-Pita-Kapha"};
    return names;
}

void GeneratorSpec::validate() const {
    if (class_names.empty()) throw ArgumentError("generator needs at least one class");
    if (std::set<std::string>(class_names.begin(), class_names.end()).size() != class_names.size())
        throw ArgumentError("class names must be distinct");
    if (informative_features > features) throw ArgumentError("informative_features exceeds features");
    if (!categories_per_feature.empty() && categories_per_feature.size() != features)
        throw ArgumentError("categories_per_feature must list every feature");
    for (std::size_t f = 0; f < features; ++f) {
        if (categories_of(f) < 1) throw ArgumentError("every feature needs at least one category");
    }
    if (!(signal >= 0.0 && signal <= 1.0)) throw ArgumentError("signal must lie in [0, 1]");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw ArgumentError("missing_rate must lie in [0, 1)");
    if (!class_balance.empty()) {
        if (class_balance.size() != class_names.size()) throw ArgumentError("class_balance must list every class");
        double sum = 0.0;
        for (double w : class_balance) {
            if (!(w >= 0.0)) throw ArgumentError("class proportions must be non-negative");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw ArgumentError("class proportions must sum to 1");
    }
    if (label_column.empty()) throw ArgumentError("label column name must not be empty");
}

Planted generate_planted(const GeneratorSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t classes = spec.class_names.size();

    // Separate streams keep the layout independent of the row count.
    Rng layout(derive_seed(seed, "synth/layout"));
    Rng cells_rng(derive_seed(seed, "synth/cells"));
    Rng missing_rng(derive_seed(seed, "synth/missing"));

    Planted out;
    std::vector<std::size_t> columns(spec.features);
    std::iota(columns.begin(), columns.end(), 0);
    layout.shuffle(std::span(columns));
    out.informative_columns.assign(columns.begin(), columns.begin() + static_cast<std::ptrdiff_t>(spec.informative_features));
    std::sort(out.informative_columns.begin(), out.informative_columns.end());

    const bool want_distinct = distinct_capacity(spec, out.informative_columns) >= classes;
    std::set<std::vector<Cell>> taken;
    for (std::size_t c = 0; c < classes; ++c) {
        std::vector<Cell> prefs(out.informative_columns.size());
        for (int attempt = 0;; ++attempt) {
            for (std::size_t i = 0; i < prefs.size(); ++i) {
                prefs[i] = static_cast<Cell>(layout.uniform_index(spec.categories_of(out.informative_columns[i])));
            }
            if (!want_distinct || taken.insert(prefs).second || attempt > 10000) break;
        }
        out.preferred.push_back(prefs);
    }

    // Labels: exact class sizes, shuffled order.
    std::vector<Cell> labels;
    const auto sizes = class_sizes(spec);
    for (std::size_t c = 0; c < classes; ++c) labels.insert(labels.end(), sizes[c], static_cast<Cell>(c));
    layout.shuffle(std::span(labels));

    std::vector<std::ptrdiff_t> informative_slot(spec.features, -1);
    for (std::size_t i = 0; i < out.informative_columns.size(); ++i)
        informative_slot[out.informative_columns[i]] = static_cast<std::ptrdiff_t>(i);

    std::vector<Cell> cells;
    cells.reserve(spec.rows * spec.features);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        const auto cls = static_cast<std::size_t>(labels[r]);
        for (std::size_t f = 0; f < spec.features; ++f) {
            const auto slot = informative_slot[f];
            // Always consume both draws so cell values do not depend on signal
            // through the stream position.
            const bool follow = cells_rng.bernoulli(spec.signal);
            const auto uniform = static_cast<Cell>(cells_rng.uniform_index(spec.categories_of(f)));
            Cell v = uniform;
            if (slot >= 0 && follow) v = out.preferred[cls][static_cast<std::size_t>(slot)];
            if (spec.missing_rate > 0.0 && missing_rng.bernoulli(spec.missing_rate)) v = kMissing;
            cells.push_back(v);
        }
    }

    std::vector<std::string> names;
    std::vector<Vocabulary> vocabularies;
    for (std::size_t f = 0; f < spec.features; ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "f%03zu", f);
        names.emplace_back(name);
        std::vector<std::string> entries;
        for (std::size_t v = 0; v < spec.categories_of(f); ++v) entries.push_back("c" + std::to_string(v));
        vocabularies.emplace_back(std::move(entries));
    }
    out.table = CategoricalTable(std::move(names), std::move(vocabularies), std::move(cells),
                                 LabelColumn{spec.label_column, Vocabulary(spec.class_names), std::move(labels)});
    return out;
}

CategoricalTable generate(const GeneratorSpec& spec, std::uint64_t seed) {
    return generate_planted(spec, seed).table;
}

}  // namespace catml::synth
