#include "catml/kmodes.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "catml/errors.hpp"
#include "catml/rng.hpp"

namespace catml::kmodes {
namespace {

std::size_t nearest(const std::vector<std::vector<Cell>>& modes, Row row) {
    std::size_t best = 0;
    std::size_t best_distance = dissimilarity(modes[0], row);
    for (std::size_t m = 1; m < modes.size() && best_distance > 0; ++m) {
        const std::size_t d = dissimilarity(modes[m], row);
        if (d < best_distance) {
            best = m;
            best_distance = d;
        }
    }
    return best;
}

std::vector<std::vector<Cell>> distinct_rows(const CategoricalTable& table) {
    std::set<std::vector<Cell>> seen;
    std::vector<std::vector<Cell>> out;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        std::vector<Cell> row(table.row(r).begin(), table.row(r).end());
        if (seen.insert(row).second) out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<Cell>> init_random(std::vector<std::vector<Cell>> candidates, std::size_t k, Rng& rng) {
    // Partial Fisher-Yates: the first k slots become a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(k);
    return candidates;
}

std::vector<std::vector<Cell>> init_huang(const CategoricalTable& table, std::vector<std::vector<Cell>> candidates,
                                          std::size_t k, Rng& rng) {
    const std::size_t columns = table.column_count();
    std::vector<std::vector<std::size_t>> freq(columns);
    for (std::size_t c = 0; c < columns; ++c) {
        freq[c].assign(table.vocabulary(c).size(), 0);
        for (std::size_t r = 0; r < table.row_count(); ++r) ++freq[c][static_cast<std::size_t>(table.at(r, c))];
    }
    std::vector<char> used(candidates.size(), 0);
    std::vector<std::vector<Cell>> modes;
    for (std::size_t m = 0; m < k; ++m) {
        std::vector<Cell> draft(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            auto pick = rng.uniform_index(table.row_count());
            std::size_t v = 0;
            while (pick >= freq[c][v]) pick -= freq[c][v++];
            draft[c] = static_cast<Cell>(v);
        }
        std::size_t best = candidates.size();
        std::size_t best_distance = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (used[i]) continue;
            const std::size_t d = dissimilarity(candidates[i], draft);
            if (best == candidates.size() || d < best_distance) {
                best = i;
                best_distance = d;
            }
        }
        used[best] = 1;
        modes.push_back(candidates[best]);
    }
    return modes;
}

void update_modes(const CategoricalTable& table, const std::vector<std::size_t>& assignments,
                  std::vector<std::vector<Cell>>& modes) {
    const std::size_t columns = table.column_count();
    for (std::size_t c = 0; c < columns; ++c) {
        const std::size_t vocab = table.vocabulary(c).size();
        std::vector<std::size_t> counts(modes.size() * vocab, 0);
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            ++counts[assignments[r] * vocab + static_cast<std::size_t>(table.at(r, c))];
        }
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const auto begin = counts.begin() + static_cast<std::ptrdiff_t>(m * vocab);
            const auto best = std::max_element(begin, begin + static_cast<std::ptrdiff_t>(vocab));
            if (*best > 0) modes[m][c] = static_cast<Cell>(best - begin);
        }
    }
}

std::uint64_t total_cost(const CategoricalTable& table, const std::vector<std::size_t>& assignments,
                         const std::vector<std::vector<Cell>>& modes) {
    std::uint64_t cost = 0;
    for (std::size_t r = 0; r < table.row_count(); ++r) cost += dissimilarity(modes[assignments[r]], table.row(r));
    return cost;
}

// Gives every empty cluster one row: the row farthest from its own mode
// among clusters that can spare one. Returns the number of rows moved.
std::size_t repair_empty(const CategoricalTable& table, std::vector<std::size_t>& assignments,
                         std::vector<std::vector<Cell>>& modes) {
    std::vector<std::size_t> sizes(modes.size(), 0);
    for (auto a : assignments) ++sizes[a];
    std::size_t moved = 0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        if (sizes[m] > 0) continue;
        std::optional<std::size_t> donor;
        std::size_t donor_distance = 0;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            if (sizes[assignments[r]] < 2) continue;
            const std::size_t d = dissimilarity(modes[assignments[r]], table.row(r));
            if (!donor || d > donor_distance) {
                donor = r;
                donor_distance = d;
            }
        }
        if (!donor) throw FitError("cannot refill an empty cluster");
        --sizes[assignments[*donor]];
        assignments[*donor] = m;
        sizes[m] = 1;
        modes[m].assign(table.row(*donor).begin(), table.row(*donor).end());
        ++moved;
    }
    return moved;
}

}  // namespace

std::size_t dissimilarity(Row a, Row b) {
    if (a.size() != b.size()) throw ArgumentError("dissimilarity of vectors with different lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
    return d;
}

ClusterModel fit(const CategoricalTable& table, const Options& options) {
    if (options.k < 1) throw ArgumentError("k must be at least 1");
    if (options.max_iter < 1) throw ArgumentError("max_iter must be at least 1");
    require_complete(table, "kmodes::fit", false);
    if (options.k > table.row_count())
        throw ArgumentError("k = " + std::to_string(options.k) + " exceeds row count " + std::to_string(table.row_count()));

    auto candidates = distinct_rows(table);
    if (options.k > candidates.size())
        throw InitializationError("k = " + std::to_string(options.k) + " exceeds the " +
                                  std::to_string(candidates.size()) + " distinct rows");

    Rng rng(options.seed);
    ClusterModel model;
    model.k = options.k;
    model.seed = options.seed;
    model.feature_names = table.column_names();
    model.vocabularies = table.vocabularies();
    model.modes = options.init == Init::huang ? init_huang(table, std::move(candidates), options.k, rng)
                                              : init_random(std::move(candidates), options.k, rng);

    const std::size_t rows = table.row_count();
    std::vector<std::size_t> previous(rows, options.k);
    std::vector<std::size_t> assignments(rows, 0);
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        for (std::size_t r = 0; r < rows; ++r) assignments[r] = nearest(model.modes, table.row(r));
        repair_empty(table, assignments, model.modes);

        std::size_t moves = 0;
        for (std::size_t r = 0; r < rows; ++r) moves += assignments[r] != previous[r] ? 1 : 0;

        update_modes(table, assignments, model.modes);
        model.cost_trace.push_back(total_cost(table, assignments, model.modes));
        model.moves_trace.push_back(moves);
        model.iterations_run = iter + 1;
        previous = assignments;
        if (moves == 0) {
            model.converged = true;
            break;
        }
    }
    model.assignments = std::move(assignments);
    return model;
}

ClusterModel fit_best(const CategoricalTable& table, const Options& options, std::size_t restarts) {
    if (restarts < 1) throw ArgumentError("restarts must be at least 1");
    std::optional<ClusterModel> best;
    for (std::size_t i = 0; i < restarts; ++i) {
        Options attempt = options;
        attempt.seed = i == 0 ? options.seed : derive_seed(options.seed, "kmodes-restart-" + std::to_string(i));
        auto model = fit(table, attempt);
        if (!best || model.cost() < best->cost()) best = std::move(model);
    }
    return std::move(*best);
}

std::size_t predict(const ClusterModel& model, Row row) {
    if (model.modes.empty()) throw ArgumentError("model has no modes");
    if (row.size() != model.modes.front().size()) throw ArgumentError("row length does not match the model");
    return nearest(model.modes, row);
}

ClusterNaming name_clusters(const ClusterModel& model, std::span<const Cell> labels, const Vocabulary& label_vocabulary) {
    if (labels.size() != model.assignments.size()) throw ArgumentError("labels do not align with the clustered rows");
    const std::size_t classes = label_vocabulary.size();
    std::vector<std::vector<std::size_t>> counts(model.k, std::vector<std::size_t>(classes, 0));
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (!label_vocabulary.contains(labels[r])) throw ArgumentError("label index out of range");
        ++counts[model.assignments[r]][static_cast<std::size_t>(labels[r])];
    }

    ClusterNaming naming;
    for (std::size_t m = 0; m < model.k; ++m) {
        const std::size_t size = std::accumulate(counts[m].begin(), counts[m].end(), std::size_t{0});
        naming.sizes.push_back(size);
        if (size == 0) {
            naming.mapping.push_back(std::nullopt);
            naming.names.emplace_back();
            naming.purity.push_back(0.0);
            naming.warnings.push_back("cluster " + std::to_string(m) + " is empty and was left unnamed");
            continue;
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < classes; ++c) {
            if (counts[m][c] > counts[m][best] ||
                (counts[m][c] == counts[m][best] && label_vocabulary.decode(static_cast<Cell>(c)) <
                                                        label_vocabulary.decode(static_cast<Cell>(best)))) {
                best = c;
            }
        }
        naming.mapping.push_back(static_cast<Cell>(best));
        naming.names.push_back(label_vocabulary.decode(static_cast<Cell>(best)));
        naming.purity.push_back(static_cast<double>(counts[m][best]) / static_cast<double>(size));
    }
    return naming;
}

}  // namespace catml::kmodes
