#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "builders.hpp"
#include "catml/errors.hpp"
#include "catml/kmodes.hpp"
#include "catml/synth.hpp"
#include "oracles.hpp"

namespace catml::kmodes {
namespace {

std::vector<Cell> to_cells(const std::vector<int>& v) { return {v.begin(), v.end()}; }

TEST(Dissimilarity, CountsMismatchedPositions) {
    const auto a = to_cells({0, 1, 2, 0, 1});
    const auto b = to_cells({0, 2, 2, 1, 1});
    EXPECT_EQ(dissimilarity(a, a), 0u);
    EXPECT_EQ(dissimilarity(a, b), 2u);
    const auto shorter = to_cells({0, 1});
    EXPECT_THROW(dissimilarity(a, shorter), ArgumentError);
}

TEST(Dissimilarity, MatchesComparisonOracle) {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        std::vector<int> a(9), b(9);
        for (auto& v : a) v = static_cast<int>(rng.uniform_index(3));
        for (auto& v : b) v = static_cast<int>(rng.uniform_index(3));
        EXPECT_EQ(dissimilarity(to_cells(a), to_cells(b)), oracle::mismatches(a, b));
    }
}

oracle::Rows eight_rows() {
    return {{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {2, 2, 0}, {2, 1, 0}, {0, 0, 0}, {1, 2, 2}, {2, 2, 1}};
}

TEST(Fit, EveryRowItsOwnModeCostsNothing) {
    const auto rows = eight_rows();
    const auto table = test::make_table(rows, {3, 3, 3});
    const auto model = fit(table, {.k = rows.size(), .seed = 3});
    EXPECT_EQ(model.cost(), 0u);
}

TEST(Fit, SingleClusterModeIsColumnMode) {
    const oracle::Rows rows{{0, 1, 2}, {0, 2, 2}, {1, 1, 0}, {0, 1, 1}, {2, 0, 2}};
    const auto model = fit(test::make_table(rows, {3, 3, 3}), {.k = 1, .seed = 1});
    EXPECT_EQ(model.modes.front(), (std::vector<Cell>{0, 1, 2}));
    EXPECT_EQ(model.cost(), oracle::mode_cost(rows, std::vector<int>(rows.size(), 0), 1));
}

TEST(Fit, BestOfTwentySeedsReachesExhaustiveOptimum) {
    const auto rows = eight_rows();
    const auto table = test::make_table(rows, {3, 3, 3});
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t seed = 0; seed < 20; ++seed) best = std::min(best, fit(table, {.k = 2, .seed = seed}).cost());
    EXPECT_EQ(best, oracle::best_two_partition_cost(rows));
}

TEST(Fit, FinalCostIsTheModeCostOfItsAssignments) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        oracle::Rows rows(40, std::vector<int>(5));
        for (auto& row : rows)
            for (auto& v : row) v = static_cast<int>(rng.uniform_index(4));
        const auto model = fit(test::make_table(rows, {4, 4, 4, 4, 4}), {.k = 4, .seed = static_cast<std::uint64_t>(trial)});
        std::vector<int> block(model.assignments.begin(), model.assignments.end());
        // Modes are per-cluster column modes, so the cost equals the oracle's.
        EXPECT_EQ(model.cost(), oracle::mode_cost(rows, block, 4));
    }
}

TEST(Fit, Invariants) {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        oracle::Rows rows(60, std::vector<int>(6));
        for (auto& row : rows)
            for (auto& v : row) v = static_cast<int>(rng.uniform_index(3));
        const auto table = test::make_table(rows, {3, 3, 3, 3, 3, 3});
        const auto model = fit(table, {.k = 5, .seed = static_cast<std::uint64_t>(trial)});
        EXPECT_TRUE(std::is_sorted(model.cost_trace.rbegin(), model.cost_trace.rend()));
        EXPECT_LE(model.iterations_run, 100u);
        EXPECT_EQ(model.cost_trace.size(), model.iterations_run);
        for (auto a : model.assignments) EXPECT_LT(a, 5u);
        for (const auto& mode : model.modes)
            for (std::size_t f = 0; f < mode.size(); ++f) EXPECT_TRUE(table.vocabulary(f).contains(mode[f]));
        if (model.converged) EXPECT_EQ(model.moves_trace.back(), 0u);
        // No cluster ends empty.
        for (std::size_t c = 0; c < 5; ++c)
            EXPECT_NE(std::count(model.assignments.begin(), model.assignments.end(), c), 0);
    }
}

TEST(Fit, Deterministic) {
    const auto table = synth::generate({.rows = 200, .features = 10, .informative_features = 5}, 9);
    const auto a = fit(table.without_labels(), {.k = 7, .seed = 44});
    const auto b = fit(table.without_labels(), {.k = 7, .seed = 44});
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.modes, b.modes);
    EXPECT_EQ(a.cost_trace, b.cost_trace);
}

TEST(Fit, ColumnPermutationKeepsAssignments) {
    const auto table = synth::generate({.rows = 150, .features = 8, .informative_features = 6}, 3);
    std::vector<std::size_t> order(8);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    const auto a = fit(table, {.k = 7, .seed = 2});
    const auto b = fit(table.select_columns(order), {.k = 7, .seed = 2});
    EXPECT_EQ(a.assignments, b.assignments);
}

TEST(Fit, ReassigningAfterConvergenceMovesNothing) {
    const auto table = synth::generate({.rows = 200, .features = 12, .informative_features = 8}, 21);
    const auto model = fit(table, {.k = 7, .seed = 6});
    ASSERT_TRUE(model.converged);
    for (std::size_t r = 0; r < table.row_count(); ++r) EXPECT_EQ(predict(model, table.row(r)), model.assignments[r]);
}

TEST(Fit, HuangInitAlsoConverges) {
    const auto table = synth::generate({.rows = 200, .features = 12, .informative_features = 8}, 21);
    const auto model = fit(table, {.k = 7, .seed = 6, .init = Init::huang});
    EXPECT_TRUE(model.converged);
    EXPECT_TRUE(std::is_sorted(model.cost_trace.rbegin(), model.cost_trace.rend()));
}

TEST(Fit, RejectsBadArguments) {
    const auto table = test::make_table({{0, 0}, {0, 0}, {1, 1}}, {2, 2});
    EXPECT_THROW(fit(table, {.k = 0}), ArgumentError);
    EXPECT_THROW(fit(table, {.k = 3}), InitializationError);
    EXPECT_THROW(fit(table, {.k = 2, .max_iter = 0}), ArgumentError);
    const CategoricalTable missing({"a"}, {Vocabulary({"x"})}, {kMissing, 0}, std::nullopt);
    EXPECT_THROW(fit(missing, {.k = 1}), StateError);
}

TEST(FitBest, NeverWorseThanFirstRestart) {
    const auto table = synth::generate({.rows = 300, .features = 15, .informative_features = 10, .signal = 0.6}, 17);
    const Options options{.k = 7, .seed = 99};
    EXPECT_LE(fit_best(table, options, 5).cost(), fit(table, options).cost());
}

TEST(Predict, NearestModeWithLowestIdOnTies) {
    ClusterModel model;
    model.k = 4;
    model.modes = {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {2, 2, 2}};
    model.vocabularies = {Vocabulary({"a", "b", "c"}), Vocabulary({"a", "b", "c"}), Vocabulary({"a", "b", "c"})};
    EXPECT_EQ(predict(model, to_cells({2, 2, 2})), 3u);
    EXPECT_EQ(predict(model, to_cells({1, 0, 0})), 0u);  // distance 1 to modes 0, 1 and 2
    EXPECT_EQ(predict(model, to_cells({1, 1, 1})), 1u);  // distance 1 to modes 1 and 2
    EXPECT_THROW(predict(model, to_cells({0, 0})), ArgumentError);

    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        std::vector<int> row(3);
        for (auto& v : row) v = static_cast<int>(rng.uniform_index(4));  // 3 is unseen
        std::size_t best = 0, best_d = 99;
        for (std::size_t c = 0; c < 4; ++c) {
            const std::vector<int> m(model.modes[c].begin(), model.modes[c].end());
            const auto d = oracle::mismatches(row, m);
            if (d < best_d) best = c, best_d = d;
        }
        EXPECT_EQ(predict(model, to_cells(row)), best);
    }
}

ClusterModel model_with(std::vector<std::size_t> assignments, std::size_t k) {
    ClusterModel model;
    model.k = k;
    model.assignments = std::move(assignments);
    return model;
}

TEST(NameClusters, MajorityNameAndPurity) {
    const Vocabulary doshas(synth::dosha_names());
    const Cell vata = *doshas.find("Vata"), pita = *doshas.find("Pita"), kapha = *doshas.find("Kapha");
    const auto model = model_with({0, 0, 0, 1, 1, 1, 1, 1}, 2);
    const std::vector<Cell> labels{vata, vata, vata, pita, kapha, pita, kapha, pita};
    const auto naming = name_clusters(model, labels, doshas);
    EXPECT_EQ(naming.names[0], "Vata");
    EXPECT_DOUBLE_EQ(naming.purity[0], 1.0);
    EXPECT_EQ(naming.names[1], "Pita");
    EXPECT_DOUBLE_EQ(naming.purity[1], 0.6);
    EXPECT_TRUE(naming.warnings.empty());
}

TEST(NameClusters, TiesGoToSmallestName) {
    const Vocabulary doshas(synth::dosha_names());
    const Cell vata = *doshas.find("Vata"), kapha = *doshas.find("Kapha");
    const auto naming = name_clusters(model_with({0, 0}, 1), std::vector<Cell>{vata, kapha}, doshas);
    EXPECT_EQ(naming.names[0], "Kapha");
    EXPECT_DOUBLE_EQ(naming.purity[0], 0.5);
}

TEST(NameClusters, EmptyClusterIsWarnedAndUnmapped) {
    const Vocabulary doshas(synth::dosha_names());
    const auto naming = name_clusters(model_with({0, 0, 2}, 3), std::vector<Cell>{0, 0, 1}, doshas);
    EXPECT_FALSE(naming.mapping[1].has_value());
    EXPECT_EQ(naming.sizes[1], 0u);
    EXPECT_EQ(naming.warnings.size(), 1u);
    EXPECT_THROW(name_clusters(model_with({0, 0, 2}, 3), std::vector<Cell>{0, 0}, doshas), ArgumentError);
}

}  // namespace
}  // namespace catml::kmodes
