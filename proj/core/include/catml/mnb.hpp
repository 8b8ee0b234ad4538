#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catml/table.hpp"

namespace catml::mnb {

// Multinomial naive Bayes over one-hot categorical events: every feature
// contributes exactly one count per row. All parameters are stored as
// natural logs.
struct Model {
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    std::vector<Vocabulary> vocabularies;
    double alpha = 1.0;
    std::size_t row_count = 0;
    std::vector<std::uint64_t> class_counts;
    // log((count(c) + alpha) / (row_count + alpha * classes))
    std::vector<double> log_prior;
    // Per feature, |vocab| x classes, row-major:
    // log((count(f = v, c) + alpha) / (count(c) + alpha * |vocab(f)|))
    std::vector<std::vector<double>> log_likelihood;

    std::size_t class_count() const noexcept { return class_names.size(); }
    std::size_t feature_count() const noexcept { return feature_names.size(); }

    double likelihood(std::size_t feature, Cell category, std::size_t cls) const {
        return log_likelihood[feature][static_cast<std::size_t>(category) * class_count() + cls];
    }
    // Log-probability assigned to a category absent from the vocabulary.
    double unseen_likelihood(std::size_t feature, std::size_t cls) const;
};

// alpha must be > 0.
Model fit(const CategoricalTable& train, double alpha = 1.0);

// log P(c) + sum_f log P(x_f | c) per class; the evidence term is omitted.
std::vector<double> predict_log_scores(const Model& model, Row row);

// Argmax of the log scores, ties to the lowest class index.
Cell predict(const Model& model, Row row);

std::vector<Cell> predict_all(const Model& model, const CategoricalTable& table);

namespace detail {
// Same as fit but accepts alpha >= 0. With alpha == 0 unseen pairs give
// -inf; only tests use it.
Model fit_unchecked(const CategoricalTable& train, double alpha);
}  // namespace detail

}  // namespace catml::mnb
