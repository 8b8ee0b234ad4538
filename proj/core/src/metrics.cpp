#include "catml/metrics.hpp"

#include "catml/errors.hpp"

namespace catml::metrics {

ConfusionMatrix::ConfusionMatrix(std::size_t class_count, std::vector<std::string> classes)
    : classes_(std::move(classes)), counts_(class_count * class_count, 0) {
    if (class_count == 0) throw ArgumentError("confusion matrix needs at least one class");
    if (classes_.empty()) {
        for (std::size_t i = 0; i < class_count; ++i) classes_.push_back(std::to_string(i));
    } else if (classes_.size() != class_count) {
        throw ArgumentError("class name count does not match class_count");
    }
}

void ConfusionMatrix::add(Cell truth, Cell predicted) {
    const auto n = static_cast<Cell>(class_count());
    if (truth < 0 || truth >= n || predicted < 0 || predicted >= n) throw ArgumentError("class index out of range");
    ++counts_[static_cast<std::size_t>(truth) * class_count() + static_cast<std::size_t>(predicted)];
    ++total_;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < class_count(); ++j) s += at(i, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < class_count(); ++i) s += at(i, j);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < class_count(); ++i) s += at(i, i);
    return s;
}

ConfusionMatrix confusion(std::span<const Cell> y_true, std::span<const Cell> y_pred, std::size_t class_count,
                          std::vector<std::string> classes) {
    if (y_true.size() != y_pred.size()) throw ArgumentError("y_true and y_pred differ in length");
    ConfusionMatrix cm(class_count, std::move(classes));
    for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
    return cm;
}

Report report(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ArgumentError("metrics of an empty confusion matrix");
    Report out;
    const auto total = static_cast<double>(cm.total());
    out.accuracy = static_cast<double>(cm.trace()) / total;

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    double f1_sum = 0.0;
    for (std::size_t i = 0; i < cm.class_count(); ++i) {
        ClassMetrics m;
        m.name = cm.classes()[i];
        m.support = cm.row_sum(i);
        const auto tp = static_cast<double>(cm.true_positives(i));
        const auto support = static_cast<double>(m.support);
        const std::uint64_t predicted = cm.col_sum(i);

        if (predicted == 0) {
            ++out.zero_division_events;
        } else {
            m.precision = tp / static_cast<double>(predicted);
            precision_sum += support * tp / static_cast<double>(predicted);
        }
        if (m.support == 0) {
            ++out.zero_division_events;
        } else {
            m.recall = tp / support;
            recall_sum += support * tp / support;
        }
        if (m.precision + m.recall == 0.0) {
            ++out.zero_division_events;
        } else {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
            f1_sum += support * m.f1;
        }
        out.per_class.push_back(std::move(m));
    }
    out.precision_weighted = precision_sum / total;
    out.recall_weighted = recall_sum / total;
    out.f1_weighted = f1_sum / total;
    return out;
}

}  // namespace catml::metrics
