#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("catml_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string command = std::string(CATML_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                    " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(command.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static std::vector<std::string> lines(const fs::path& p) {
        std::vector<std::string> out;
        std::istringstream in(read(p));
        for (std::string line; std::getline(in, line);) out.push_back(line);
        return out;
    }

    fs::path dir_;
};

TEST_F(Cli, SynthWritesLabeledCsv) {
    ASSERT_EQ(run("synth --rows 50 --features 10 --informative 4 --out " + path("d.csv")), 0);
    const auto rows = lines(path("d.csv"));
    ASSERT_EQ(rows.size(), 51u);
    EXPECT_EQ(rows[0], "f000,f001,f002,f003,f004,f005,f006,f007,f008,f009,dosha");
}

TEST_F(Cli, SynthIsReproducible) {
    ASSERT_EQ(run("--seed 5 synth --rows 40 --features 6 --informative 3 --out " + path("a.csv")), 0);
    ASSERT_EQ(run("--seed 5 synth --rows 40 --features 6 --informative 3 --out " + path("b.csv")), 0);
    ASSERT_EQ(run("--seed 6 synth --rows 40 --features 6 --informative 3 --out " + path("c.csv")), 0);
    EXPECT_EQ(read(path("a.csv")), read(path("b.csv")));
    EXPECT_NE(read(path("a.csv")), read(path("c.csv")));
}

TEST_F(Cli, SelectTwentyOfManyFeatures) {
    ASSERT_EQ(run("synth --rows 200 --features 60 --out " + path("d.csv")), 0);
    ASSERT_EQ(run("select --k 20 --in " + path("d.csv") + " --out " + path("ranked.csv") + " --reduced " +
                  path("reduced.csv")),
              0);
    const auto ranked = lines(path("ranked.csv"));
    ASSERT_EQ(ranked.size(), 21u);
    EXPECT_EQ(ranked[0], "feature,statistic,dof,p_value");
    const auto reduced = lines(path("reduced.csv"));
    EXPECT_EQ(std::count(reduced[0].begin(), reduced[0].end(), ','), 20);
}

TEST_F(Cli, TrainPredictEvaluateRoundTrip) {
    ASSERT_EQ(run("synth --rows 300 --features 30 --informative 10 --out " + path("train.csv")), 0);
    ASSERT_EQ(run("--seed 77 synth --rows 60 --features 30 --informative 10 --out " + path("new.csv")), 0);
    for (const std::string model : {"mnb", "dtree"}) {
        const auto model_path = path(model + ".json");
        ASSERT_EQ(run("train --model " + model + " --in " + path("train.csv") + " --out " + model_path), 0);
        const auto doc = nlohmann::json::parse(read(model_path));
        EXPECT_EQ(doc.at("format_version"), 1);
        EXPECT_EQ(doc.at("model_type"), model);

        ASSERT_EQ(run("predict --model " + model_path + " --in " + path("new.csv") + " --out " + path("pred.csv")), 0);
        const auto predictions = lines(path("pred.csv"));
        ASSERT_EQ(predictions.size(), 61u);
        EXPECT_EQ(predictions[0], "row,prediction");
        const std::string first = predictions[1].substr(predictions[1].find(',') + 1);
        EXPECT_TRUE(first.find("Vata") != std::string::npos || first.find("Pita") != std::string::npos ||
                    first.find("Kapha") != std::string::npos)
            << first;

        ASSERT_EQ(run("evaluate --model " + model_path + " --in " + path("train.csv") + " --out " + path("r.csv")), 0);
        const auto report = lines(path("r.csv"));
        ASSERT_EQ(report.size(), 2u);
        EXPECT_EQ(report[0], "test_size,n_features,accuracy,precision,f_score,recall");
        EXPECT_EQ(report[1].rfind(",30,", 0), 0u);
    }
}

TEST_F(Cli, EvaluateJson) {
    ASSERT_EQ(run("synth --rows 100 --features 8 --informative 4 --out " + path("d.csv")), 0);
    ASSERT_EQ(run("train --in " + path("d.csv") + " --features 4 --out " + path("m.json")), 0);
    ASSERT_EQ(run("--format json --output-dir " + path("out") + " evaluate --model " + path("m.json") + " --in " +
                  path("d.csv")),
              0);
    const auto doc = nlohmann::json::parse(read(path("out/report.json")));
    EXPECT_EQ(doc.at("recall"), doc.at("accuracy"));
    EXPECT_EQ(doc.at("n_features"), 4);
}

TEST_F(Cli, ClusterWritesAssignmentsAndModel) {
    ASSERT_EQ(run("synth --rows 140 --features 12 --informative 8 --out " + path("d.csv")), 0);
    ASSERT_EQ(run("--output-dir " + path("out") + " cluster --in " + path("d.csv") + " --restarts 2"), 0);
    EXPECT_EQ(lines(path("out/assignments.csv")).size(), 141u);
    const auto model = nlohmann::json::parse(read(path("out/kmodes_model.json")));
    EXPECT_EQ(model.at("k"), 7);
    EXPECT_EQ(model.at("modes").size(), 7u);
    EXPECT_TRUE(model.at("modes").at(0).at(0).is_string());
}

TEST_F(Cli, SweepOutputsAndDeterminism) {
    std::ofstream(path("exp.toml")) << "schema_version = 1\n[synth]\nrows = 300\n";
    ASSERT_EQ(run("--config " + path("exp.toml") + " --output-dir " + path("a") + " sweep"), 0);
    ASSERT_EQ(run("--config " + path("exp.toml") + " --output-dir " + path("b") + " sweep --jobs 3"), 0);
    const auto sweep = lines(path("a/sweep.csv"));
    ASSERT_EQ(sweep.size(), 21u);
    EXPECT_EQ(sweep[0], "model,test_size,n_features,accuracy,precision,f_score,recall");
    EXPECT_EQ(read(path("a/sweep.csv")), read(path("b/sweep.csv")));
    for (const char* plot : {"mnb_ts0.1.csv", "mnb_ts0.2.csv", "dtree_ts0.1.csv", "dtree_ts0.2.csv"}) {
        const auto rows = lines(fs::path(path("a")) / "plots" / plot);
        EXPECT_EQ(rows.size(), 21u) << plot;
        EXPECT_EQ(read(fs::path(path("a")) / "plots" / plot), read(fs::path(path("b")) / "plots" / plot));
    }
    EXPECT_TRUE(fs::exists(path("a/cells/mnb_ts0.1_nf20.json")));
}

TEST_F(Cli, SweepPartialFailureExitsTwo) {
    std::ofstream(path("exp.toml")) << "schema_version = 1\n[synth]\nrows = 100\n[dtree]\nprune = true\n"
                                       "prune_fraction = 0.999\n";
    EXPECT_EQ(run("--config " + path("exp.toml") + " --output-dir " + path("out") + " sweep"), 2);
    EXPECT_EQ(lines(path("out/sweep.csv")).size(), 21u);
}

TEST_F(Cli, UsageErrorsExit64) {
    EXPECT_EQ(run(""), 64);
    EXPECT_EQ(run("frobnicate"), 64);
    EXPECT_EQ(run("synth --bogus 3"), 64);
    EXPECT_EQ(run("select --in /nonexistent.csv --k 3"), 64);
    EXPECT_EQ(run("--format xml synth"), 64);
}

TEST_F(Cli, DataErrorsExitOne) {
    std::ofstream(path("ragged.csv")) << "a,b,dosha\n1,2,Vata\n1,Pita\n";
    EXPECT_EQ(run("select --k 1 --in " + path("ragged.csv")), 1);
    EXPECT_NE(read(path("stderr.txt")).find("ragged"), std::string::npos);
    std::ofstream(path("bad.json")) << "{\"format_version\": 9, \"model_type\": \"mnb\"}";
    std::ofstream(path("ok.csv")) << "a,dosha\nx,Vata\n";
    EXPECT_EQ(run("predict --model " + path("bad.json") + " --in " + path("ok.csv")), 1);
}

}  // namespace
