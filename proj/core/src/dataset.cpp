#include "catml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "catml/errors.hpp"
#include "catml/rng.hpp"

namespace catml {

CategoricalTable table_from_csv(const RawCsv& csv, const IngestOptions& options) {
    std::optional<std::size_t> label_pos;
    if (options.label_column) {
        auto it = std::find(csv.header.begin(), csv.header.end(), *options.label_column);
        if (it == csv.header.end()) throw SchemaError("label column '" + *options.label_column + "' not in header");
        label_pos = static_cast<std::size_t>(it - csv.header.begin());
    }

    auto is_missing = [&](const std::string& field) {
        return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), field) !=
               options.missing_tokens.end();
    };

    std::vector<std::size_t> feature_pos;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < csv.header.size(); ++i) {
        if (label_pos && *label_pos == i) continue;
        feature_pos.push_back(i);
        names.push_back(csv.header[i]);
    }

    std::vector<Vocabulary> vocabularies(names.size());
    std::vector<Cell> cells;
    cells.reserve(csv.rows.size() * names.size());
    std::optional<LabelColumn> labels;
    if (label_pos) labels = LabelColumn{*options.label_column, {}, {}};

    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& record = csv.rows[r];
        if (record.size() != csv.header.size())
            throw IngestError("ragged row " + std::to_string(r + 1));
        for (std::size_t j = 0; j < feature_pos.size(); ++j) {
            const auto& field = record[feature_pos[j]];
            cells.push_back(is_missing(field) ? kMissing : vocabularies[j].intern(field));
        }
        if (labels) {
            const auto& field = record[*label_pos];
            if (is_missing(field)) throw IngestError("missing label in row " + std::to_string(r + 1));
            labels->values.push_back(labels->vocabulary.intern(field));
        }
    }
    return CategoricalTable(std::move(names), std::move(vocabularies), std::move(cells), std::move(labels));
}

CategoricalTable load_csv(const std::filesystem::path& path, const IngestOptions& options) {
    return table_from_csv(read_csv_file(path), options);
}

void write_table_csv(std::ostream& out, const CategoricalTable& table, const std::string& missing_token) {
    std::vector<std::string> record = table.column_names();
    if (table.has_labels()) record.push_back(table.labels().name);
    write_csv_record(out, record);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        record.clear();
        for (std::size_t c = 0; c < table.column_count(); ++c) {
            const Cell v = table.at(r, c);
            record.push_back(v == kMissing ? missing_token : table.vocabulary(c).decode(v));
        }
        if (table.has_labels()) record.push_back(table.labels().vocabulary.decode(table.label(r)));
        write_csv_record(out, record);
    }
}

void save_table_csv(const std::filesystem::path& path, const CategoricalTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write '" + path.string() + "'");
    write_table_csv(out, table);
}

std::vector<std::vector<Cell>> encode_rows(const RawCsv& csv,
                                           const std::vector<std::string>& feature_names,
                                           const std::vector<Vocabulary>& vocabularies) {
    std::vector<std::size_t> positions;
    for (const auto& name : feature_names) {
        auto it = std::find(csv.header.begin(), csv.header.end(), name);
        if (it == csv.header.end()) throw SchemaError("input lacks feature column '" + name + "'");
        positions.push_back(static_cast<std::size_t>(it - csv.header.begin()));
    }
    std::vector<std::vector<Cell>> rows;
    rows.reserve(csv.rows.size());
    for (const auto& record : csv.rows) {
        std::vector<Cell> row;
        row.reserve(positions.size());
        for (std::size_t j = 0; j < positions.size(); ++j) {
            row.push_back(vocabularies[j].find(record[positions[j]]).value_or(kMissing));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CategoricalTable forward_fill(const CategoricalTable& table) {
    const std::size_t rows = table.row_count();
    const std::size_t columns = table.column_count();
    std::vector<Cell> cells = table.cells();

    for (std::size_t c = 0; c < columns; ++c) {
        std::vector<std::size_t> counts(table.vocabulary(c).size(), 0);
        std::optional<std::size_t> first_observed;
        for (std::size_t r = 0; r < rows; ++r) {
            const Cell v = cells[r * columns + c];
            if (v == kMissing) continue;
            ++counts[static_cast<std::size_t>(v)];
            if (!first_observed) first_observed = r;
        }
        if (!first_observed) {
            if (rows == 0) continue;
            throw ImputationError("column '" + table.column_names()[c] + "' has no observed values");
        }
        // max_element returns the first maximum, i.e. the lowest index on ties.
        const auto mode = static_cast<Cell>(std::max_element(counts.begin(), counts.end()) - counts.begin());

        Cell last = mode;
        for (std::size_t r = 0; r < rows; ++r) {
            Cell& v = cells[r * columns + c];
            if (v == kMissing) {
                v = last;
            } else {
                last = v;
            }
        }
    }
    std::optional<LabelColumn> labels;
    if (table.has_labels()) labels = table.labels();
    return CategoricalTable(table.column_names(), table.vocabularies(), std::move(cells), std::move(labels));
}

namespace {

// Largest-remainder apportionment of total over weights; ties in the
// remainder go to the lower index.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t population, std::size_t total) {
    std::vector<std::size_t> out(sizes.size(), 0);
    if (population == 0) return out;
    std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const std::uint64_t scaled = static_cast<std::uint64_t>(sizes[i]) * total;
        out[i] = static_cast<std::size_t>(scaled / population);
        assigned += out[i];
        remainders.emplace_back(scaled % population, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total && i < remainders.size(); ++i) {
        const std::size_t idx = remainders[i].second;
        if (out[idx] < sizes[idx]) {
            ++out[idx];
            ++assigned;
        }
    }
    return out;
}

}  // namespace

SplitPair train_test_split(const CategoricalTable& table, double test_fraction, std::uint64_t seed,
                           bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ArgumentError("test_fraction must lie in (0, 1)");
    if (stratified && !table.has_labels()) throw StateError("stratified split requires labels");

    const std::size_t n = table.row_count();
    const auto test_count = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));

    Rng rng(seed);
    std::vector<char> in_test(n, 0);
    if (!stratified) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(std::span(order));
        for (std::size_t i = 0; i < test_count; ++i) in_test[order[i]] = 1;
    } else {
        const auto& labels = table.labels();
        std::vector<std::vector<std::size_t>> by_class(labels.vocabulary.size());
        for (std::size_t r = 0; r < n; ++r) by_class[static_cast<std::size_t>(labels.values[r])].push_back(r);
        std::vector<std::size_t> sizes;
        for (const auto& rows : by_class) sizes.push_back(rows.size());
        const auto quota = apportion(sizes, n, test_count);
        for (std::size_t k = 0; k < by_class.size(); ++k) {
            auto& rows = by_class[k];
            rng.shuffle(std::span(rows));
            for (std::size_t i = 0; i < quota[k]; ++i) in_test[rows[i]] = 1;
        }
    }

    SplitPair split;
    split.seed = seed;
    split.test_fraction = test_fraction;
    for (std::size_t r = 0; r < n; ++r) (in_test[r] ? split.test_rows : split.train_rows).push_back(r);
    split.train = table.select_rows(split.train_rows);
    split.test = table.select_rows(split.test_rows);
    return split;
}

}  // namespace catml
