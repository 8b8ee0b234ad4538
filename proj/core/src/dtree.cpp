#include "catml/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "catml/dataset.hpp"
#include "catml/errors.hpp"

namespace catml::dtree {
namespace {

Cell majority(const std::vector<std::size_t>& counts) {
    return static_cast<Cell>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

class Builder {
public:
    Builder(const CategoricalTable& table, const Params& params, Tree& tree)
        : table_(table), params_(params), tree_(tree), used_(table.column_count(), 0) {}

    NodeId build(const std::vector<std::size_t>& rows, std::size_t depth) {
        const auto id = static_cast<NodeId>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        {
            Node& node = tree_.nodes.back();
            node.sample_count = rows.size();
            node.class_counts = class_counts(rows);
            node.majority_class = majority(node.class_counts);
        }
        const auto& counts = tree_.nodes[id].class_counts;
        const bool pure = std::count_if(counts.begin(), counts.end(), [](auto n) { return n > 0; }) <= 1;
        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_capped || rows.size() < params_.min_samples_split) return id;

        std::optional<std::size_t> best;
        double best_gain = 0.0;
        const double parent = entropy(counts);
        for (std::size_t f = 0; f < table_.column_count(); ++f) {
            if (used_[f]) continue;
            const double g = gain(rows, f, parent);
            if (!best || g > best_gain) {
                best = f;
                best_gain = g;
            }
        }
        if (!best || best_gain <= params_.min_gain) return id;

        const std::size_t feature = *best;
        std::vector<std::vector<std::size_t>> branches(table_.vocabulary(feature).size());
        for (std::size_t r : rows) branches[static_cast<std::size_t>(table_.at(r, feature))].push_back(r);

        used_[feature] = 1;
        std::vector<std::pair<Cell, NodeId>> children;
        for (std::size_t v = 0; v < branches.size(); ++v) {
            if (branches[v].empty()) continue;
            children.emplace_back(static_cast<Cell>(v), build(branches[v], depth + 1));
        }
        used_[feature] = 0;

        Node& node = tree_.nodes[id];
        node.split_feature = feature;
        node.children = std::move(children);
        return id;
    }

private:
    std::vector<std::size_t> class_counts(const std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> counts(table_.class_count(), 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(table_.label(r))];
        return counts;
    }

    double gain(const std::vector<std::size_t>& rows, std::size_t feature, double parent) const {
        const std::size_t classes = table_.class_count();
        const std::size_t vocab = table_.vocabulary(feature).size();
        std::vector<std::size_t> counts(vocab * classes, 0);
        for (std::size_t r : rows) {
            ++counts[static_cast<std::size_t>(table_.at(r, feature)) * classes + static_cast<std::size_t>(table_.label(r))];
        }
        double weighted = 0.0;
        for (std::size_t v = 0; v < vocab; ++v) {
            std::span<const std::size_t> branch(counts.data() + v * classes, classes);
            std::size_t n = 0;
            for (auto x : branch) n += x;
            if (n == 0) continue;
            weighted += static_cast<double>(n) / static_cast<double>(rows.size()) * entropy(branch);
        }
        return parent - weighted;
    }

    const CategoricalTable& table_;
    const Params& params_;
    Tree& tree_;
    std::vector<char> used_;
};

std::size_t subtree_depth(const Tree& tree, NodeId id) {
    const Node& node = tree.nodes[id];
    std::size_t deepest = 0;
    for (const auto& [category, child] : node.children) deepest = std::max(deepest, 1 + subtree_depth(tree, child));
    return deepest;
}

void check_row(const Tree& tree, Row row) {
    if (row.size() != tree.feature_names.size())
        throw ArgumentError("row has " + std::to_string(row.size()) + " cells, tree expects " +
                            std::to_string(tree.feature_names.size()));
}

std::optional<NodeId> child_for(const Node& node, Cell category) {
    auto it = std::lower_bound(node.children.begin(), node.children.end(), category,
                               [](const auto& entry, Cell c) { return entry.first < c; });
    if (it == node.children.end() || it->first != category) return std::nullopt;
    return it->second;
}

// Copies the subtree reachable from the root into a fresh arena.
Tree compact(const Tree& tree) {
    Tree out;
    out.feature_names = tree.feature_names;
    out.vocabularies = tree.vocabularies;
    out.class_names = tree.class_names;
    std::function<NodeId(NodeId)> copy = [&](NodeId id) -> NodeId {
        const auto new_id = static_cast<NodeId>(out.nodes.size());
        out.nodes.push_back(tree.nodes[id]);
        out.nodes[new_id].children.clear();
        std::vector<std::pair<Cell, NodeId>> children;
        for (const auto& [category, child] : tree.nodes[id].children) children.emplace_back(category, copy(child));
        out.nodes[new_id].children = std::move(children);
        return new_id;
    };
    copy(0);
    return out;
}

}  // namespace

void Params::validate() const {
    if (min_samples_split < 2) throw ArgumentError("min_samples_split must be at least 2");
    if (!(min_gain >= 0.0)) throw ArgumentError("min_gain must be non-negative");
    if (!(prune_fraction > 0.0 && prune_fraction < 1.0)) throw ArgumentError("prune_fraction must lie in (0, 1)");
}

std::size_t Tree::depth() const { return nodes.empty() ? 0 : subtree_depth(*this, 0); }

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
}

double entropy(std::span<const std::size_t> class_counts) {
    std::size_t total = 0;
    for (auto n : class_counts) total += n;
    if (total == 0) throw ArgumentError("entropy of an all-zero count vector");
    double h = 0.0;
    for (auto n : class_counts) {
        if (n == 0) continue;
        const double p = static_cast<double>(n) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double information_gain(const CategoricalTable& partition, std::size_t feature) {
    if (feature >= partition.column_count()) throw ArgumentError("unknown feature index " + std::to_string(feature));
    require_complete(partition, "information_gain", true);
    if (partition.row_count() == 0) throw ArgumentError("information gain of an empty partition");

    const std::size_t classes = partition.class_count();
    std::vector<std::size_t> parent(classes, 0);
    std::vector<std::vector<std::size_t>> branches(partition.vocabulary(feature).size(), std::vector<std::size_t>(classes, 0));
    for (std::size_t r = 0; r < partition.row_count(); ++r) {
        const auto label = static_cast<std::size_t>(partition.label(r));
        ++parent[label];
        ++branches[static_cast<std::size_t>(partition.at(r, feature))][label];
    }
    double weighted = 0.0;
    const auto n = static_cast<double>(partition.row_count());
    for (const auto& branch : branches) {
        std::size_t size = 0;
        for (auto x : branch) size += x;
        if (size > 0) weighted += static_cast<double>(size) / n * entropy(branch);
    }
    return entropy(parent) - weighted;
}

Tree fit(const CategoricalTable& train, const Params& params) {
    params.validate();
    require_complete(train, "dtree::fit", true);
    if (train.row_count() == 0) throw FitError("cannot fit a decision tree on an empty training set");

    const CategoricalTable* grow_on = &train;
    std::optional<SplitPair> holdout;
    if (params.prune) {
        holdout = train_test_split(train, params.prune_fraction, params.seed);
        if (holdout->train.row_count() == 0) throw FitError("prune holdout leaves no rows to grow on");
        grow_on = &holdout->train;
    }

    Tree tree;
    tree.feature_names = train.column_names();
    tree.vocabularies = train.vocabularies();
    tree.class_names = train.labels().vocabulary.entries();
    std::vector<std::size_t> rows(grow_on->row_count());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    Builder(*grow_on, params, tree).build(rows, 0);

    if (holdout && holdout->test.row_count() > 0) return prune(tree, holdout->test);
    return tree;
}

Cell predict(const Tree& tree, Row row) {
    check_row(tree, row);
    NodeId id = 0;
    for (;;) {
        const Node& node = tree.nodes[id];
        if (node.is_leaf()) return node.majority_class;
        auto next = child_for(node, row[*node.split_feature]);
        if (!next) return node.majority_class;
        id = *next;
    }
}

std::vector<Cell> predict_all(const Tree& tree, const CategoricalTable& table) {
    std::vector<Cell> out;
    out.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) out.push_back(predict(tree, table.row(r)));
    return out;
}

Tree prune(const Tree& tree, const CategoricalTable& validation) {
    if (validation.row_count() == 0) throw PruneError("cannot prune against an empty validation set");
    require_complete(validation, "dtree::prune", true);
    if (validation.column_count() != tree.feature_names.size()) throw PruneError("validation schema does not match the tree");

    Tree pruned = tree;
    std::vector<std::size_t> all(validation.row_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    // Returns the number of validation errors of the (possibly pruned)
    // subtree on the rows that reach it.
    std::function<std::size_t(NodeId, const std::vector<std::size_t>&)> visit =
        [&](NodeId id, const std::vector<std::size_t>& rows) -> std::size_t {
        const Cell majority_class = pruned.nodes[id].majority_class;
        std::size_t leaf_errors = 0;
        for (std::size_t r : rows) leaf_errors += validation.label(r) != majority_class ? 1 : 0;
        if (pruned.nodes[id].is_leaf()) return leaf_errors;

        const std::size_t feature = *pruned.nodes[id].split_feature;
        std::vector<std::vector<std::size_t>> routed(pruned.nodes[id].children.size());
        std::size_t subtree_errors = 0;
        for (std::size_t r : rows) {
            const Cell category = validation.at(r, feature);
            const auto& children = pruned.nodes[id].children;
            auto it = std::lower_bound(children.begin(), children.end(), category,
                                       [](const auto& entry, Cell c) { return entry.first < c; });
            if (it == children.end() || it->first != category) {
                subtree_errors += validation.label(r) != majority_class ? 1 : 0;
            } else {
                routed[static_cast<std::size_t>(it - children.begin())].push_back(r);
            }
        }
        for (std::size_t i = 0; i < routed.size(); ++i) {
            subtree_errors += visit(pruned.nodes[id].children[i].second, routed[i]);
        }
        if (leaf_errors <= subtree_errors) {
            pruned.nodes[id].split_feature.reset();
            pruned.nodes[id].children.clear();
            return leaf_errors;
        }
        return subtree_errors;
    };
    visit(0, all);
    return compact(pruned);
}

double accuracy(const Tree& tree, const CategoricalTable& table) {
    if (table.row_count() == 0) throw ArgumentError("accuracy of an empty table");
    std::size_t correct = 0;
    for (std::size_t r = 0; r < table.row_count(); ++r) correct += predict(tree, table.row(r)) == table.label(r) ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(table.row_count());
}

}  // namespace catml::dtree
