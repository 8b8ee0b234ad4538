#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "builders.hpp"
#include "catml/dataset.hpp"
#include "catml/errors.hpp"
#include "catml/synth.hpp"

namespace catml {
namespace {

CategoricalTable from_text(const std::string& text, IngestOptions options = {}) {
    std::istringstream in(text);
    return table_from_csv(parse_csv(in), options);
}

TEST(LoadCsv, SimpleTable) {
    const auto t = from_text("a,b\nx,y\nx,z\nw,y\n");
    EXPECT_EQ(t.row_count(), 3u);
    EXPECT_EQ(t.column_count(), 2u);
    EXPECT_EQ(t.vocabulary(0).entries(), (std::vector<std::string>{"x", "w"}));
    EXPECT_FALSE(t.has_labels());
}

TEST(LoadCsv, SevenDistinctLabels) {
    std::string text = "f,dosha\n";
    for (const auto& name : synth::dosha_names()) text += "a," + name + "\n";
    text += "b,Vata\n";
    IngestOptions options;
    options.label_column = "dosha";
    const auto t = from_text(text, options);
    EXPECT_EQ(t.class_count(), 7u);
    EXPECT_EQ(t.column_names(), std::vector<std::string>{"f"});
    EXPECT_EQ(t.labels().vocabulary.entries(), synth::dosha_names());
}

TEST(LoadCsv, RaggedRowNamesTheRow) {
    try {
        from_text("a,b\nx,y\nz\n");
        FAIL() << "expected IngestError";
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
}

TEST(LoadCsv, DuplicateHeaderAndEmptyFileAreSchemaErrors) {
    EXPECT_THROW(from_text("a,a\n1,2\n"), SchemaError);
    EXPECT_THROW(from_text(""), SchemaError);
}

TEST(LoadCsv, MissingTokensAndQuotedFields) {
    const auto t = from_text("a,b\n\"x,1\",NA\n,\"say \"\"hi\"\"\"\r\n\"multi\nline\",q\n");
    EXPECT_EQ(t.row_count(), 3u);
    EXPECT_EQ(t.vocabulary(0).decode(t.at(0, 0)), "x,1");
    EXPECT_EQ(t.at(0, 1), kMissing);
    EXPECT_EQ(t.at(1, 0), kMissing);
    EXPECT_EQ(t.vocabulary(1).decode(t.at(1, 1)), "say \"hi\"");
    EXPECT_EQ(t.vocabulary(0).decode(t.at(2, 0)), "multi\nline");
}

TEST(LoadCsv, CustomMissingTokens) {
    IngestOptions options;
    options.missing_tokens = {"?"};
    const auto t = from_text("a\n?\nNA\n", options);
    EXPECT_EQ(t.at(0, 0), kMissing);
    EXPECT_EQ(t.vocabulary(0).decode(t.at(1, 0)), "NA");
}

TEST(LoadCsv, UnknownLabelColumn) {
    IngestOptions options;
    options.label_column = "nope";
    EXPECT_THROW(from_text("a\nx\n", options), SchemaError);
}

TEST(WriteTableCsv, RoundTripsThroughTheLoader) {
    synth::GeneratorSpec spec;
    spec.rows = 40;
    spec.features = 6;
    spec.informative_features = 3;
    spec.missing_rate = 0.1;
    const auto original = synth::generate(spec, 8);
    std::stringstream buffer;
    write_table_csv(buffer, original);
    IngestOptions options;
    options.label_column = "dosha";
    const auto reloaded = table_from_csv(parse_csv(buffer), options);
    ASSERT_EQ(reloaded.row_count(), original.row_count());
    for (std::size_t r = 0; r < original.row_count(); ++r) {
        for (std::size_t c = 0; c < original.column_count(); ++c) {
            const Cell a = original.at(r, c);
            const Cell b = reloaded.at(r, c);
            ASSERT_EQ(a == kMissing, b == kMissing);
            if (a != kMissing) EXPECT_EQ(original.vocabulary(c).decode(a), reloaded.vocabulary(c).decode(b));
        }
        EXPECT_EQ(original.labels().vocabulary.decode(original.label(r)),
                  reloaded.labels().vocabulary.decode(reloaded.label(r)));
    }
}

TEST(EncodeRows, UsesFixedVocabulariesAndMarksUnseen) {
    std::istringstream in("q,a\n1,x\n2,new\n");
    const auto csv = parse_csv(in);
    const auto rows = encode_rows(csv, {"a"}, {Vocabulary({"y", "x"})});
    EXPECT_EQ(rows, (std::vector<std::vector<Cell>>{{1}, {kMissing}}));
    EXPECT_THROW(encode_rows(csv, {"zzz"}, {Vocabulary({"y"})}), SchemaError);
}

CategoricalTable one_column(const std::vector<Cell>& cells, int levels) {
    return CategoricalTable({"a"}, {Vocabulary(test::level_names("v", levels))}, cells);
}

TEST(ForwardFill, CopiesPrecedingValue) {
    const auto filled = forward_fill(one_column({0, kMissing, kMissing, 1}, 2));
    EXPECT_EQ(filled.column(0), (std::vector<Cell>{0, 0, 0, 1}));
}

TEST(ForwardFill, LeadingMissingTakesColumnMode) {
    // Mode oracle over the observed values {a, a, b}: a.
    const std::vector<Cell> cells{kMissing, 0, 0, 1};
    std::map<Cell, int> freq;
    for (Cell v : cells)
        if (v != kMissing) ++freq[v];
    const Cell mode = std::max_element(freq.begin(), freq.end(), [](auto x, auto y) { return x.second < y.second; })->first;
    const auto filled = forward_fill(one_column(cells, 2));
    EXPECT_EQ(filled.column(0), (std::vector<Cell>{mode, 0, 0, 1}));
}

TEST(ForwardFill, ModeTieGoesToLowestIndex) {
    const auto filled = forward_fill(one_column({kMissing, 1, 0}, 2));
    EXPECT_EQ(filled.at(0, 0), 0);
}

TEST(ForwardFill, NoMissingIsIdentity) {
    const auto t = one_column({1, 0, 1}, 2);
    EXPECT_EQ(forward_fill(t), t);
}

TEST(ForwardFill, EntirelyMissingColumnNamesIt) {
    try {
        forward_fill(one_column({kMissing, kMissing}, 1));
        FAIL();
    } catch (const ImputationError& e) {
        EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
    }
}

TEST(ForwardFill, IdempotentAndComplete) {
    synth::GeneratorSpec spec;
    spec.rows = 200;
    spec.features = 10;
    spec.informative_features = 4;
    spec.missing_rate = 0.3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto once = forward_fill(synth::generate(spec, seed));
        EXPECT_FALSE(once.has_missing());
        EXPECT_EQ(forward_fill(once), once);
    }
}

CategoricalTable labeled_rows(std::size_t n, int classes) {
    std::vector<std::vector<int>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({static_cast<int>(i % 5)});
        labels.push_back(static_cast<int>(i % static_cast<std::size_t>(classes)));
    }
    return test::make_table(rows, {5}, labels, classes);
}

TEST(TrainTestSplit, Sizes) {
    const auto t = labeled_rows(30, 3);
    const auto a = train_test_split(t, 0.2, 1);
    EXPECT_EQ(a.test.row_count(), 6u);
    EXPECT_EQ(a.train.row_count(), 24u);
    EXPECT_EQ(train_test_split(t, 0.1, 1).test.row_count(), 3u);
}

TEST(TrainTestSplit, DeterministicForASeed) {
    const auto t = labeled_rows(30, 3);
    const auto a = train_test_split(t, 0.2, 77);
    const auto b = train_test_split(t, 0.2, 77);
    EXPECT_EQ(a.test_rows, b.test_rows);
    EXPECT_EQ(a.train, b.train);
    EXPECT_NE(train_test_split(t, 0.2, 78).test_rows, a.test_rows);
}

TEST(TrainTestSplit, RejectsBadFraction) {
    const auto t = labeled_rows(10, 2);
    EXPECT_THROW(train_test_split(t, 0.0, 1), ArgumentError);
    EXPECT_THROW(train_test_split(t, 1.0, 1), ArgumentError);
    EXPECT_THROW(train_test_split(t.without_labels(), 0.5, 1, true), StateError);
}

TEST(TrainTestSplit, PartitionReassemblesTheSource) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = 5 + rng.uniform_index(60);
        const auto inst = test::random_instance(rng, n, 3, 4, 3);
        const auto t = inst.table();
        const bool stratified = trial % 2 == 1;
        const auto split = train_test_split(t, 0.05 + 0.9 * rng.uniform01(), rng.next(), stratified);
        ASSERT_EQ(split.train.row_count() + split.test.row_count(), t.row_count());

        std::vector<std::pair<std::size_t, std::vector<Cell>>> merged;
        for (std::size_t i = 0; i < split.train_rows.size(); ++i) {
            auto row = split.train.row(i);
            merged.emplace_back(split.train_rows[i], std::vector<Cell>(row.begin(), row.end()));
        }
        for (std::size_t i = 0; i < split.test_rows.size(); ++i) {
            auto row = split.test.row(i);
            merged.emplace_back(split.test_rows[i], std::vector<Cell>(row.begin(), row.end()));
        }
        std::sort(merged.begin(), merged.end());
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            ASSERT_EQ(merged[r].first, r);
            EXPECT_TRUE(std::equal(merged[r].second.begin(), merged[r].second.end(), t.row(r).begin()));
        }
        EXPECT_EQ(split.train.vocabularies(), t.vocabularies());
        EXPECT_EQ(split.test.column_names(), t.column_names());
    }
}

TEST(TrainTestSplit, StratifiedClassCountsWithinOneOfTarget) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = test::random_instance(rng, 20 + rng.uniform_index(200), 1, 2, 7);
        const auto t = inst.table();
        const double fraction = 0.05 + 0.9 * rng.uniform01();
        const auto split = train_test_split(t, fraction, rng.next(), true);
        const double n_test = static_cast<double>(split.test.row_count());
        std::vector<double> in_class(7, 0), in_test(7, 0);
        for (int y : inst.labels) ++in_class[y];
        for (Cell y : split.test.labels().values) ++in_test[y];
        for (int c = 0; c < 7; ++c) {
            const double target = in_class[c] * n_test / static_cast<double>(t.row_count());
            EXPECT_LE(std::abs(in_test[c] - target), 1.0) << "class " << c;
        }
    }
}

}  // namespace
}  // namespace catml
