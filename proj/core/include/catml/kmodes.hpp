#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catml/table.hpp"

namespace catml::kmodes {

enum class Init {
    random,  // k distinct records drawn uniformly
    huang,   // frequency-weighted attribute draws snapped to the nearest unused record
};

struct Options {
    std::size_t k = 7;
    std::uint64_t seed = 0;
    std::size_t max_iter = 100;
    Init init = Init::random;
};

struct ClusterModel {
    std::size_t k = 0;
    std::vector<std::vector<Cell>> modes;
    std::vector<std::size_t> assignments;
    // Total dissimilarity after each iteration's mode update.
    std::vector<std::uint64_t> cost_trace;
    // Rows whose cluster changed in each iteration (the first iteration
    // counts every row).
    std::vector<std::size_t> moves_trace;
    std::size_t iterations_run = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    std::vector<Vocabulary> vocabularies;

    std::uint64_t cost() const { return cost_trace.empty() ? 0 : cost_trace.back(); }
};

struct ClusterNaming {
    // Label index per cluster; std::nullopt for clusters with no rows.
    std::vector<std::optional<Cell>> mapping;
    std::vector<std::string> names;  // empty string for unnamed clusters
    std::vector<double> purity;      // 0 for unnamed clusters
    std::vector<std::size_t> sizes;
    std::vector<std::string> warnings;
};

// Simple-matching dissimilarity: number of positions where a and b differ.
std::size_t dissimilarity(Row a, Row b);

// Huang-style k-modes. Each iteration assigns every row to its nearest mode
// (ties to the lowest cluster id), repairs empty clusters by moving in the
// row farthest from its current mode (ties to the lowest row id), then
// recomputes each mode column-wise as the most frequent category (ties to
// the lowest category index). Stops when no row moves or after max_iter
// iterations.
ClusterModel fit(const CategoricalTable& table, const Options& options);

// Runs fit with `restarts` seeds derived from options.seed and keeps the
// lowest final cost (ties to the earliest restart).
ClusterModel fit_best(const CategoricalTable& table, const Options& options, std::size_t restarts);

// Nearest mode; cells outside the training vocabulary mismatch every mode.
std::size_t predict(const ClusterModel& model, Row row);

// Majority label per cluster (ties to the lexicographically smallest label
// name) with its purity.
ClusterNaming name_clusters(const ClusterModel& model, std::span<const Cell> labels, const Vocabulary& label_vocabulary);

}  // namespace catml::kmodes
