#include "catml/mnb.hpp"

#include <cmath>

#include "catml/errors.hpp"

namespace catml::mnb {

double Model::unseen_likelihood(std::size_t feature, std::size_t cls) const {
    const double denom = static_cast<double>(class_counts[cls]) + alpha * static_cast<double>(vocabularies[feature].size());
    return std::log(alpha / denom);
}

namespace detail {

Model fit_unchecked(const CategoricalTable& train, double alpha) {
    require_complete(train, "mnb::fit", true);
    if (train.row_count() == 0) throw FitError("cannot fit naive Bayes on an empty training set");

    Model model;
    model.class_names = train.labels().vocabulary.entries();
    model.feature_names = train.column_names();
    model.vocabularies = train.vocabularies();
    model.alpha = alpha;
    model.row_count = train.row_count();

    const std::size_t classes = model.class_count();
    model.class_counts.assign(classes, 0);
    for (Cell label : train.labels().values) ++model.class_counts[static_cast<std::size_t>(label)];

    const double prior_denom = static_cast<double>(model.row_count) + alpha * static_cast<double>(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        model.log_prior.push_back(std::log((static_cast<double>(model.class_counts[c]) + alpha) / prior_denom));
    }

    for (std::size_t f = 0; f < train.column_count(); ++f) {
        const std::size_t vocab = train.vocabulary(f).size();
        std::vector<std::uint64_t> counts(vocab * classes, 0);
        for (std::size_t r = 0; r < train.row_count(); ++r) {
            ++counts[static_cast<std::size_t>(train.at(r, f)) * classes + static_cast<std::size_t>(train.label(r))];
        }
        std::vector<double> table(vocab * classes);
        for (std::size_t c = 0; c < classes; ++c) {
            const double denom = static_cast<double>(model.class_counts[c]) + alpha * static_cast<double>(vocab);
            for (std::size_t v = 0; v < vocab; ++v) {
                table[v * classes + c] = std::log((static_cast<double>(counts[v * classes + c]) + alpha) / denom);
            }
        }
        model.log_likelihood.push_back(std::move(table));
    }
    return model;
}

}  // namespace detail

Model fit(const CategoricalTable& train, double alpha) {
    if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
    return detail::fit_unchecked(train, alpha);
}

std::vector<double> predict_log_scores(const Model& model, Row row) {
    if (row.size() != model.feature_count())
        throw ArgumentError("row has " + std::to_string(row.size()) + " cells, model expects " +
                            std::to_string(model.feature_count()));
    std::vector<double> scores = model.log_prior;
    for (std::size_t f = 0; f < row.size(); ++f) {
        const bool seen = model.vocabularies[f].contains(row[f]);
        for (std::size_t c = 0; c < scores.size(); ++c) {
            scores[c] += seen ? model.likelihood(f, row[f], c) : model.unseen_likelihood(f, c);
        }
    }
    return scores;
}

Cell predict(const Model& model, Row row) {
    const auto scores = predict_log_scores(model, row);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return static_cast<Cell>(best);
}

std::vector<Cell> predict_all(const Model& model, const CategoricalTable& table) {
    std::vector<Cell> out;
    out.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) out.push_back(predict(model, table.row(r)));
    return out;
}

}  // namespace catml::mnb
