#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catml/csv.hpp"
#include "catml/table.hpp"

namespace catml {

struct IngestOptions {
    // Column holding class labels; std::nullopt loads an unlabeled table.
    std::optional<std::string> label_column;
    // Field values treated as missing.
    std::vector<std::string> missing_tokens{"", "NA"};
};

// Builds a table from parsed CSV. Vocabularies follow first appearance.
// A named label column that is absent from the header is a SchemaError; a
// missing token inside the label column is an IngestError.
CategoricalTable table_from_csv(const RawCsv& csv, const IngestOptions& options = {});
CategoricalTable load_csv(const std::filesystem::path& path, const IngestOptions& options = {});

// Writes the table in the dialect load_csv reads; the label column (if any)
// is written last and missing cells as missing_token.
void write_table_csv(std::ostream& out, const CategoricalTable& table, const std::string& missing_token = "");
void save_table_csv(const std::filesystem::path& path, const CategoricalTable& table);

// Encodes raw records against fixed feature names and vocabularies (for
// prediction). Columns are matched by header name; categories not in the
// vocabulary become kMissing, which every model treats as unseen. Extra
// columns are ignored; a feature absent from the header is a SchemaError.
std::vector<std::vector<Cell>> encode_rows(const RawCsv& csv,
                                           const std::vector<std::string>& feature_names,
                                           const std::vector<Vocabulary>& vocabularies);

// Fills each missing cell with the nearest preceding observed value in its
// column. Cells before the first observation take the column mode (ties to
// the lowest category index). A column with no observed value raises
// ImputationError.
CategoricalTable forward_fill(const CategoricalTable& table);

struct SplitPair {
    CategoricalTable train;
    CategoricalTable test;
    // Source row ids of each side, ascending.
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
};

// Test size is llround(row_count * test_fraction). Rows are drawn with Rng
// (seeded with seed); stratified mode allots per-class test counts by
// largest remainder, so each class is within one row of its proportional
// share.
SplitPair train_test_split(const CategoricalTable& table, double test_fraction, std::uint64_t seed,
                           bool stratified = false);

}  // namespace catml
