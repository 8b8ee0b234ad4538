#include "catml/table.hpp"

#include <algorithm>
#include <unordered_set>

#include "catml/errors.hpp"

namespace catml {

Vocabulary::Vocabulary(std::vector<std::string> entries) {
    for (auto& entry : entries) {
        if (find(entry)) throw SchemaError("duplicate vocabulary entry '" + entry + "'");
        intern(entry);
    }
}

Cell Vocabulary::intern(std::string_view text) {
    std::string key(text);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const auto index = static_cast<Cell>(entries_.size());
    index_.emplace(key, index);
    entries_.push_back(std::move(key));
    return index;
}

std::optional<Cell> Vocabulary::find(std::string_view text) const {
    if (auto it = index_.find(std::string(text)); it != index_.end()) return it->second;
    return std::nullopt;
}

const std::string& Vocabulary::decode(Cell index) const {
    if (!contains(index)) throw ArgumentError("category index " + std::to_string(index) + " out of range");
    return entries_[static_cast<std::size_t>(index)];
}

CategoricalTable::CategoricalTable(std::vector<std::string> column_names,
                                   std::vector<Vocabulary> vocabularies,
                                   std::vector<Cell> cells,
                                   std::optional<LabelColumn> labels)
    : column_names_(std::move(column_names)),
      vocabularies_(std::move(vocabularies)),
      cells_(std::move(cells)),
      labels_(std::move(labels)) {
    if (vocabularies_.size() != column_names_.size())
        throw SchemaError("vocabulary count does not match column count");

    std::unordered_set<std::string> seen;
    for (const auto& name : column_names_) {
        if (!seen.insert(name).second) throw SchemaError("duplicate column name '" + name + "'");
    }

    const std::size_t columns = column_names_.size();
    if (columns == 0) {
        if (!cells_.empty()) throw SchemaError("cells given for a table without columns");
        row_count_ = labels_ ? labels_->values.size() : 0;
    } else {
        if (cells_.size() % columns != 0) throw SchemaError("cell count is not a multiple of column count");
        row_count_ = cells_.size() / columns;
    }

    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell v = cells_[i];
        if (v == kMissing) continue;
        if (!vocabularies_[i % columns].contains(v))
            throw SchemaError("cell index out of vocabulary range in column '" + column_names_[i % columns] + "'");
    }

    if (labels_) {
        if (labels_->values.size() != row_count_) throw SchemaError("label count does not match row count");
        for (Cell v : labels_->values) {
            if (!labels_->vocabulary.contains(v)) throw SchemaError("label index out of vocabulary range");
        }
        if (seen.count(labels_->name)) throw SchemaError("label column '" + labels_->name + "' duplicates a feature name");
    }
}

std::vector<Cell> CategoricalTable::column(std::size_t c) const {
    std::vector<Cell> out;
    out.reserve(row_count_);
    for (std::size_t r = 0; r < row_count_; ++r) out.push_back(at(r, c));
    return out;
}

std::optional<std::size_t> CategoricalTable::column_index(std::string_view name) const {
    auto it = std::find(column_names_.begin(), column_names_.end(), name);
    if (it == column_names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - column_names_.begin());
}

const LabelColumn& CategoricalTable::labels() const {
    if (!labels_) throw StateError("table has no labels");
    return *labels_;
}

std::size_t CategoricalTable::missing_count() const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kMissing));
}

CategoricalTable CategoricalTable::select_rows(std::span<const std::size_t> rows) const {
    const std::size_t columns = column_count();
    std::vector<Cell> cells;
    cells.reserve(rows.size() * columns);
    for (std::size_t r : rows) {
        if (r >= row_count_) throw ArgumentError("row index out of range");
        auto source = row(r);
        cells.insert(cells.end(), source.begin(), source.end());
    }
    std::optional<LabelColumn> labels;
    if (labels_) {
        labels = LabelColumn{labels_->name, labels_->vocabulary, {}};
        labels->values.reserve(rows.size());
        for (std::size_t r : rows) labels->values.push_back(labels_->values[r]);
    }
    return CategoricalTable(column_names_, vocabularies_, std::move(cells), std::move(labels));
}

CategoricalTable CategoricalTable::select_columns(std::span<const std::size_t> columns) const {
    std::vector<std::string> names;
    std::vector<Vocabulary> vocabularies;
    for (std::size_t c : columns) {
        if (c >= column_count()) throw ArgumentError("column index out of range");
        names.push_back(column_names_[c]);
        vocabularies.push_back(vocabularies_[c]);
    }
    std::vector<Cell> cells;
    cells.reserve(row_count_ * columns.size());
    for (std::size_t r = 0; r < row_count_; ++r) {
        for (std::size_t c : columns) cells.push_back(at(r, c));
    }
    return CategoricalTable(std::move(names), std::move(vocabularies), std::move(cells), labels_);
}

CategoricalTable CategoricalTable::with_labels(LabelColumn labels) const {
    return CategoricalTable(column_names_, vocabularies_, cells_, std::move(labels));
}

CategoricalTable CategoricalTable::without_labels() const {
    return CategoricalTable(column_names_, vocabularies_, cells_, std::nullopt);
}

void require_complete(const CategoricalTable& table, std::string_view operation, bool require_labels) {
    if (require_labels && !table.has_labels())
        throw StateError(std::string(operation) + " requires a labeled table");
    if (table.has_missing())
        throw StateError(std::string(operation) + " requires a table without missing cells (impute first)");
}

}  // namespace catml
