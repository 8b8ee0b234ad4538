#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catml/table.hpp"

namespace catml::features {

// Cross-tabulation of one feature (rows: the feature's categories, in
// vocabulary order) against the class label (columns: label vocabulary).
struct ContingencyTable {
    std::vector<std::vector<std::uint64_t>> observed;
    std::vector<std::uint64_t> row_totals;
    std::vector<std::uint64_t> col_totals;
    std::uint64_t grand_total = 0;
    // expected[i][j] = row_totals[i] * col_totals[j] / grand_total
    std::vector<std::vector<double>> expected;

    // Derives totals and expected counts. Rows must be of equal length.
    static ContingencyTable from_observed(std::vector<std::vector<std::uint64_t>> observed);
};

struct ChiSquare {
    double statistic = 0.0;
    int dof = 1;
};

struct FeatureScore {
    std::string feature_name;
    std::size_t column = 0;
    double statistic = 0.0;
    int dof = 1;
    double p_value = 1.0;
};

ContingencyTable build_contingency(const CategoricalTable& table, std::size_t feature);

// Pearson statistic sum((O - E)^2 / E). Cells with E == 0 lie in an empty
// row or column and are skipped; dof counts only non-empty rows and columns,
// (r - 1)(c - 1), floored at 1.
ChiSquare chi_square_statistic(const ContingencyTable& table);

// Upper tail of the chi-square distribution, Q(dof / 2, statistic / 2).
double chi_square_p_value(double statistic, int dof);

// Scores every feature; result is in column order.
std::vector<FeatureScore> score_features(const CategoricalTable& table);

// Orders scores by statistic (descending), then p-value (ascending), then
// column index.
void rank_scores(std::vector<FeatureScore>& scores);

struct Selection {
    std::vector<FeatureScore> ranked;  // every feature, best first
    CategoricalTable reduced;          // top k, in original column order
};

Selection select_k_best(const CategoricalTable& table, std::size_t k);

}  // namespace catml::features
