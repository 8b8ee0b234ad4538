#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catml/table.hpp"

namespace catml::dtree {

struct Params {
    std::optional<std::size_t> max_depth;  // unlimited when empty
    std::size_t min_samples_split = 2;
    double min_gain = 0.0;
    bool prune = false;            // reduced-error pruning on a holdout
    double prune_fraction = 0.2;   // share of the training rows held out
    std::uint64_t seed = 0;        // drives the holdout draw

    void validate() const;
};

using NodeId = std::uint32_t;

// A leaf has no split feature. Internal nodes keep one child per category
// observed in their partition, sorted by category index.
struct Node {
    std::optional<std::size_t> split_feature;
    std::vector<std::pair<Cell, NodeId>> children;
    Cell majority_class = 0;
    std::size_t sample_count = 0;
    std::vector<std::size_t> class_counts;

    bool is_leaf() const noexcept { return !split_feature.has_value(); }
};

// Nodes live in a flat arena; nodes[0] is the root.
struct Tree {
    std::vector<Node> nodes;
    std::vector<std::string> feature_names;
    std::vector<Vocabulary> vocabularies;
    std::vector<std::string> class_names;

    const Node& root() const { return nodes.front(); }
    std::size_t depth() const;
    std::size_t leaf_count() const;
};

// Shannon entropy in bits over the non-zero counts.
double entropy(std::span<const std::size_t> class_counts);

// entropy(partition) - sum_v (n_v / n) * entropy(rows with feature == v)
double information_gain(const CategoricalTable& partition, std::size_t feature);

// ID3-style growth with multiway splits. Picks the unused feature of
// highest gain (ties to the lowest column) and stops at pure nodes, when no
// feature is left, at max_depth, below min_samples_split rows, or when the
// best gain is <= min_gain. With params.prune a holdout is carved from train
// first and the grown tree is pruned against it.
Tree fit(const CategoricalTable& train, const Params& params = {});

// Follows the row's categories; a category with no child stops at the
// current node and returns its majority class.
Cell predict(const Tree& tree, Row row);
std::vector<Cell> predict_all(const Tree& tree, const CategoricalTable& table);

// Reduced-error pruning. Visits internal nodes bottom-up and collapses a
// node to a leaf of its majority class whenever that does not lose
// validation rows reaching it (ties prune). Unreachable nodes are dropped
// and the arena is compacted.
Tree prune(const Tree& tree, const CategoricalTable& validation);

// Fraction of rows classified correctly.
double accuracy(const Tree& tree, const CategoricalTable& table);

}  // namespace catml::dtree
