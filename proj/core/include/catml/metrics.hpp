#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catml/table.hpp"

namespace catml::metrics {

// counts[i][j] = rows of true class i predicted as class j.
class ConfusionMatrix {
public:
    ConfusionMatrix(std::size_t class_count, std::vector<std::string> classes = {});

    void add(Cell truth, Cell predicted);

    std::size_t class_count() const noexcept { return classes_.size(); }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * class_count() + predicted]; }
    std::uint64_t total() const noexcept { return total_; }

    std::uint64_t row_sum(std::size_t i) const;
    std::uint64_t col_sum(std::size_t j) const;
    std::uint64_t true_positives(std::size_t i) const { return at(i, i); }
    std::uint64_t false_positives(std::size_t i) const { return col_sum(i) - at(i, i); }
    std::uint64_t false_negatives(std::size_t i) const { return row_sum(i) - at(i, i); }
    std::uint64_t true_negatives(std::size_t i) const {
        return total_ - true_positives(i) - false_positives(i) - false_negatives(i);
    }
    std::uint64_t trace() const;

private:
    std::vector<std::string> classes_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Class names default to "0", "1", ... when not given.
ConfusionMatrix confusion(std::span<const Cell> y_true, std::span<const Cell> y_pred, std::size_t class_count,
                          std::vector<std::string> classes = {});

struct ClassMetrics {
    std::string name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;

    friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct Report {
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    std::vector<ClassMetrics> per_class;
    // Per-class precision, recall or F1 whose denominator was zero (scored 0).
    std::size_t zero_division_events = 0;

    friend bool operator==(const Report&, const Report&) = default;
};

// Accuracy is trace / total. Precision, recall and F1 are computed per
// class and averaged with weights support_i / total. Each weighted term is
// evaluated as support_i * numerator_i / denominator_i so that the recall
// terms cancel to TP_i exactly and recall_weighted equals accuracy bit for
// bit.
Report report(const ConfusionMatrix& cm);

}  // namespace catml::metrics
