#include "catml/feature_selection.hpp"

#include <algorithm>

#include "catml/errors.hpp"
#include "catml/special_functions.hpp"

namespace catml::features {

ContingencyTable ContingencyTable::from_observed(std::vector<std::vector<std::uint64_t>> observed) {
    ContingencyTable ct;
    const std::size_t rows = observed.size();
    const std::size_t cols = rows == 0 ? 0 : observed.front().size();
    ct.row_totals.assign(rows, 0);
    ct.col_totals.assign(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        if (observed[i].size() != cols) throw ArgumentError("contingency rows differ in length");
        for (std::size_t j = 0; j < cols; ++j) {
            ct.row_totals[i] += observed[i][j];
            ct.col_totals[j] += observed[i][j];
            ct.grand_total += observed[i][j];
        }
    }
    ct.expected.assign(rows, std::vector<double>(cols, 0.0));
    if (ct.grand_total > 0) {
        const auto total = static_cast<double>(ct.grand_total);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                ct.expected[i][j] = static_cast<double>(ct.row_totals[i]) * static_cast<double>(ct.col_totals[j]) / total;
            }
        }
    }
    ct.observed = std::move(observed);
    return ct;
}

ContingencyTable build_contingency(const CategoricalTable& table, std::size_t feature) {
    if (feature >= table.column_count()) throw ArgumentError("feature index out of range");
    require_complete(table, "build_contingency", true);
    std::vector<std::vector<std::uint64_t>> observed(
        table.vocabulary(feature).size(), std::vector<std::uint64_t>(table.class_count(), 0));
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        ++observed[static_cast<std::size_t>(table.at(r, feature))][static_cast<std::size_t>(table.label(r))];
    }
    return ContingencyTable::from_observed(std::move(observed));
}

ChiSquare chi_square_statistic(const ContingencyTable& table) {
    if (table.grand_total == 0) throw ArgumentError("chi-square of an empty contingency table");
    double statistic = 0.0;
    for (std::size_t i = 0; i < table.observed.size(); ++i) {
        for (std::size_t j = 0; j < table.observed[i].size(); ++j) {
            const double e = table.expected[i][j];
            if (e == 0.0) continue;
            const double diff = static_cast<double>(table.observed[i][j]) - e;
            statistic += diff * diff / e;
        }
    }
    const auto nonzero = [](const std::vector<std::uint64_t>& totals) {
        return static_cast<int>(std::count_if(totals.begin(), totals.end(), [](auto t) { return t > 0; }));
    };
    const int dof = std::max(1, (nonzero(table.row_totals) - 1) * (nonzero(table.col_totals) - 1));
    return {statistic, dof};
}

double chi_square_p_value(double statistic, int dof) {
    if (!(statistic >= 0.0)) throw ArgumentError("chi-square statistic must be non-negative");
    if (dof < 1) throw ArgumentError("chi-square dof must be >= 1");
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

std::vector<FeatureScore> score_features(const CategoricalTable& table) {
    require_complete(table, "score_features", true);
    std::vector<FeatureScore> scores;
    scores.reserve(table.column_count());
    for (std::size_t c = 0; c < table.column_count(); ++c) {
        const auto ct = build_contingency(table, c);
        FeatureScore score{table.column_names()[c], c, 0.0, 1, 1.0};
        if (ct.grand_total > 0) {
            const auto chi = chi_square_statistic(ct);
            score.statistic = chi.statistic;
            score.dof = chi.dof;
            score.p_value = chi_square_p_value(chi.statistic, chi.dof);
        }
        scores.push_back(std::move(score));
    }
    return scores;
}

void rank_scores(std::vector<FeatureScore>& scores) {
    std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        if (a.statistic != b.statistic) return a.statistic > b.statistic;
        if (a.p_value != b.p_value) return a.p_value < b.p_value;
        return a.column < b.column;
    });
}

Selection select_k_best(const CategoricalTable& table, std::size_t k) {
    if (k == 0) throw ArgumentError("k must be positive");
    if (k > table.column_count())
        throw ArgumentError("k = " + std::to_string(k) + " exceeds column count " + std::to_string(table.column_count()));
    Selection selection;
    selection.ranked = score_features(table);
    rank_scores(selection.ranked);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i) keep.push_back(selection.ranked[i].column);
    std::sort(keep.begin(), keep.end());
    selection.reduced = table.select_columns(keep);
    return selection;
}

}  // namespace catml::features
