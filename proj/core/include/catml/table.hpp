#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace catml {

// Category index of one cell. Valid indices are >= 0 and below the size of
// the column's vocabulary.
using Cell = std::int32_t;

inline constexpr Cell kMissing = -1;

// Encoded row handed to a fitted model at prediction time. Any value that is
// not a valid index for the model's vocabulary (missing, or a category seen
// only at test time) is treated as unseen.
using Row = std::span<const Cell>;

// Ordered set of distinct category strings for one column. Order is the
// order in which categories were first interned.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> entries);

    // Returns the index of text, adding it if absent.
    Cell intern(std::string_view text);

    std::optional<Cell> find(std::string_view text) const;
    const std::string& decode(Cell index) const;
    bool contains(Cell index) const noexcept {
        return index >= 0 && static_cast<std::size_t>(index) < entries_.size();
    }

    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<std::string>& entries() const noexcept { return entries_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.entries_ == b.entries_; }

private:
    std::vector<std::string> entries_;
    std::unordered_map<std::string, Cell> index_;
};

struct LabelColumn {
    std::string name;
    Vocabulary vocabulary;
    std::vector<Cell> values;

    friend bool operator==(const LabelColumn&, const LabelColumn&) = default;
};

// Immutable, rectangular table of category-encoded cells (row-major) with
// optional class labels. Construction validates every invariant, so a table
// that exists is well formed.
class CategoricalTable {
public:
    CategoricalTable() = default;
    CategoricalTable(std::vector<std::string> column_names,
                     std::vector<Vocabulary> vocabularies,
                     std::vector<Cell> cells,
                     std::optional<LabelColumn> labels = std::nullopt);

    std::size_t row_count() const noexcept { return row_count_; }
    std::size_t column_count() const noexcept { return column_names_.size(); }

    Row row(std::size_t r) const {
        return {cells_.data() + r * column_count(), column_count()};
    }
    Cell at(std::size_t r, std::size_t c) const { return cells_[r * column_count() + c]; }
    std::vector<Cell> column(std::size_t c) const;

    const std::vector<std::string>& column_names() const noexcept { return column_names_; }
    const std::vector<Vocabulary>& vocabularies() const noexcept { return vocabularies_; }
    const Vocabulary& vocabulary(std::size_t c) const { return vocabularies_.at(c); }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    std::optional<std::size_t> column_index(std::string_view name) const;

    bool has_labels() const noexcept { return labels_.has_value(); }
    // Throws StateError when the table is unlabeled.
    const LabelColumn& labels() const;
    Cell label(std::size_t r) const { return labels().values[r]; }
    std::size_t class_count() const { return labels().vocabulary.size(); }

    std::size_t missing_count() const noexcept;
    bool has_missing() const noexcept { return missing_count() > 0; }

    // Rows in the given order; vocabularies are shared unchanged.
    CategoricalTable select_rows(std::span<const std::size_t> rows) const;
    // Columns in the given order; labels are kept.
    CategoricalTable select_columns(std::span<const std::size_t> columns) const;
    CategoricalTable with_labels(LabelColumn labels) const;
    CategoricalTable without_labels() const;

    friend bool operator==(const CategoricalTable&, const CategoricalTable&) = default;

private:
    std::vector<std::string> column_names_;
    std::vector<Vocabulary> vocabularies_;
    std::vector<Cell> cells_;
    std::optional<LabelColumn> labels_;
    std::size_t row_count_ = 0;
};

// Throws StateError naming the operation when table has missing cells or,
// if require_labels is set, no labels.
void require_complete(const CategoricalTable& table, std::string_view operation, bool require_labels);

}  // namespace catml
