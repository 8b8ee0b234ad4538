// catml: command-line front end for the categorical toolkit.
//
// Exit status: 0 success, 1 data/model error, 2 sweep finished with failed
// cells, 64 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "catml/config.hpp"
#include "catml/dataset.hpp"
#include "catml/errors.hpp"
#include "catml/experiment.hpp"
#include "catml/feature_selection.hpp"
#include "catml/kmodes.hpp"
#include "catml/metrics.hpp"
#include "catml/mnb.hpp"
#include "catml/model_io.hpp"
#include "catml/synth.hpp"

namespace fs = std::filesystem;
using namespace catml;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;

struct GlobalOptions {
    std::uint64_t seed = kDefaultSeed;
    bool seed_given = false;
    std::string config;
    std::string output_dir = ".";
    std::string format = "csv";
};

struct DataOptions {
    std::string in;
    std::string label = "dosha";
    std::vector<std::string> missing{"", "NA"};
};

void add_data_options(CLI::App* cmd, DataOptions& data, bool required = true) {
    cmd->add_option("--in", data.in, "Input CSV")->required(required)->check(CLI::ExistingFile);
    cmd->add_option("--label", data.label, "Label column name (\"\" for none)")->capture_default_str();
    cmd->add_option("--missing", data.missing, "Tokens read as missing")->capture_default_str();
}

// Label column is used only when the header actually has it.
IngestOptions ingest_options(const DataOptions& data, const RawCsv& csv) {
    IngestOptions options;
    options.missing_tokens = data.missing;
    if (!data.label.empty() && std::find(csv.header.begin(), csv.header.end(), data.label) != csv.header.end())
        options.label_column = data.label;
    return options;
}

fs::path output_path(const GlobalOptions& global, const std::string& explicit_path, const std::string& name) {
    if (!explicit_path.empty()) return explicit_path;
    fs::create_directories(global.output_dir);
    return fs::path(global.output_dir) / name;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

experiment::Config base_config(const GlobalOptions& global) {
    experiment::Config config;
    if (!global.config.empty()) config = experiment::load_config(global.config);
    if (global.seed_given || global.config.empty()) config.seed = global.seed;
    return config;
}

// ---------------------------------------------------------------------------

struct SynthOptions {
    std::optional<std::size_t> rows, features, categories, informative;
    std::optional<double> signal, missing_rate;
    std::string out;
};

int run_synth(const GlobalOptions& global, const SynthOptions& opt) {
    auto config = base_config(global);
    auto spec = config.synth;
    if (opt.rows) spec.rows = *opt.rows;
    if (opt.features) spec.features = *opt.features;
    if (opt.categories) spec.categories = *opt.categories;
    if (opt.informative) spec.informative_features = *opt.informative;
    if (opt.signal) spec.signal = *opt.signal;
    if (opt.missing_rate) spec.missing_rate = *opt.missing_rate;

    const auto table = synth::generate(spec, derive_seed(config.seed, "synth"));
    const auto path = output_path(global, opt.out, "synth.csv");
    auto out = open_output(path);
    write_table_csv(out, table);
    std::cout << "synth: wrote " << table.row_count() << " rows x " << table.column_count() << " features to "
              << path.string() << '\n';
    return kExitOk;
}

struct SelectOptions {
    DataOptions data;
    std::size_t k = 20;
    std::string out;
    std::string reduced;
};

int run_select(const GlobalOptions& global, const SelectOptions& opt) {
    const auto csv = read_csv_file(opt.data.in);
    const auto options = ingest_options(opt.data, csv);
    if (!options.label_column) throw StateError("select needs the label column '" + opt.data.label + "'");
    const auto table = forward_fill(table_from_csv(csv, options));
    const auto selection = features::select_k_best(table, opt.k);

    const bool json = global.format == "json";
    const auto path = output_path(global, opt.out, json ? "ranked.json" : "ranked.csv");
    auto out = open_output(path);
    if (json) {
        nlohmann::json ranked = nlohmann::json::array();
        for (std::size_t i = 0; i < opt.k; ++i) {
            const auto& s = selection.ranked[i];
            ranked.push_back({{"feature", s.feature_name}, {"statistic", s.statistic}, {"dof", s.dof}, {"p_value", s.p_value}});
        }
        out << ranked.dump(2) << '\n';
    } else {
        out << "feature,statistic,dof,p_value\n";
        for (std::size_t i = 0; i < opt.k; ++i) {
            const auto& s = selection.ranked[i];
            write_csv_record(out, std::vector<std::string>{s.feature_name, experiment::format_number(s.statistic),
                                                           std::to_string(s.dof), experiment::format_number(s.p_value)});
        }
    }
    if (!opt.reduced.empty()) {
        auto reduced = open_output(opt.reduced);
        write_table_csv(reduced, selection.reduced);
    }
    std::cout << "select: top " << opt.k << " of " << table.column_count() << " features written to " << path.string()
              << '\n';
    return kExitOk;
}

struct ClusterOptions {
    DataOptions data;
    std::size_t k = 7;
    std::size_t max_iter = 100;
    std::size_t restarts = 1;
    std::string init = "random";
    std::string out;
    std::string model_out;
};

int run_cluster(const GlobalOptions& global, const ClusterOptions& opt) {
    const auto csv = read_csv_file(opt.data.in);
    const auto table = forward_fill(table_from_csv(csv, ingest_options(opt.data, csv)));

    kmodes::Options options;
    options.k = opt.k;
    options.max_iter = opt.max_iter;
    options.seed = derive_seed(global.seed, "kmodes");
    options.init = opt.init == "huang" ? kmodes::Init::huang : kmodes::Init::random;
    const auto model = kmodes::fit_best(table.without_labels(), options, opt.restarts);

    std::optional<kmodes::ClusterNaming> naming;
    if (table.has_labels()) naming = kmodes::name_clusters(model, table.labels().values, table.labels().vocabulary);

    const auto path = output_path(global, opt.out, "assignments.csv");
    auto out = open_output(path);
    out << (naming ? "row,cluster,name\n" : "row,cluster\n");
    for (std::size_t r = 0; r < model.assignments.size(); ++r) {
        const auto cluster = model.assignments[r];
        out << r << ',' << cluster;
        if (naming) {
            out << ',';
            write_csv_record(out, std::vector<std::string>{naming->names[cluster]});
        } else {
            out << '\n';
        }
    }

    auto doc = to_json(model);
    if (naming) {
        doc["naming"] = {{"names", naming->names}, {"purity", naming->purity}, {"sizes", naming->sizes}};
        for (const auto& warning : naming->warnings) std::cerr << "cluster: warning: " << warning << '\n';
    }
    const auto model_path = output_path(global, opt.model_out, "kmodes_model.json");
    save_json(model_path, doc);
    std::cout << "cluster: k=" << model.k << " cost=" << model.cost() << " iterations=" << model.iterations_run
              << (model.converged ? " (converged)" : " (iteration cap)") << "; wrote " << path.string() << " and "
              << model_path.string() << '\n';
    return kExitOk;
}

struct TrainOptions {
    DataOptions data;
    std::string model = "mnb";
    std::string out;
    double alpha = 1.0;
    std::optional<std::size_t> features;
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_split = 2;
    double min_gain = 0.0;
    bool prune = false;
    double prune_fraction = 0.2;
};

int run_train(const GlobalOptions& global, const TrainOptions& opt) {
    const auto csv = read_csv_file(opt.data.in);
    const auto options = ingest_options(opt.data, csv);
    if (!options.label_column) throw StateError("train needs the label column '" + opt.data.label + "'");
    auto table = forward_fill(table_from_csv(csv, options));
    if (opt.features) table = features::select_k_best(table, *opt.features).reduced;

    nlohmann::json doc;
    if (opt.model == "mnb") {
        doc = to_json(mnb::fit(table, opt.alpha));
    } else {
        dtree::Params params;
        params.max_depth = opt.max_depth;
        params.min_samples_split = opt.min_samples_split;
        params.min_gain = opt.min_gain;
        params.prune = opt.prune;
        params.prune_fraction = opt.prune_fraction;
        params.seed = derive_seed(global.seed, "dtree");
        doc = to_json(dtree::fit(table, params));
    }
    const auto path = output_path(global, opt.out, "model.json");
    save_json(path, doc);
    std::cout << "train: " << opt.model << " on " << table.row_count() << " rows x " << table.column_count()
              << " features; wrote " << path.string() << '\n';
    return kExitOk;
}

// Predicted class name (or cluster id) for each encoded row.
std::vector<std::string> predict_names(const AnyModel& model, const RawCsv& csv) {
    std::vector<std::string> out;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            const auto rows = encode_rows(csv, m.feature_names, m.vocabularies);
            for (const auto& row : rows) {
                if constexpr (std::is_same_v<M, mnb::Model>) {
                    out.push_back(m.class_names[static_cast<std::size_t>(mnb::predict(m, row))]);
                } else if constexpr (std::is_same_v<M, dtree::Tree>) {
                    out.push_back(m.class_names[static_cast<std::size_t>(dtree::predict(m, row))]);
                } else {
                    out.push_back(std::to_string(kmodes::predict(m, row)));
                }
            }
        },
        model);
    return out;
}

std::vector<std::string> model_classes(const AnyModel& model) {
    if (const auto* m = std::get_if<mnb::Model>(&model)) return m->class_names;
    if (const auto* t = std::get_if<dtree::Tree>(&model)) return t->class_names;
    throw Error("a k-modes model cannot be evaluated against class labels");
}

std::size_t model_feature_count(const AnyModel& model) {
    return std::visit([](const auto& m) { return m.feature_names.size(); }, model);
}

struct PredictOptions {
    std::string model;
    std::string in;
    std::string out;
};

int run_predict(const GlobalOptions& global, const PredictOptions& opt) {
    const auto model = model_from_json(load_json(opt.model));
    const auto csv = read_csv_file(opt.in);
    const auto predictions = predict_names(model, csv);

    const bool json = global.format == "json";
    const auto path = output_path(global, opt.out, json ? "predictions.json" : "predictions.csv");
    auto out = open_output(path);
    if (json) {
        out << nlohmann::json(predictions).dump(2) << '\n';
    } else {
        out << "row,prediction\n";
        for (std::size_t r = 0; r < predictions.size(); ++r) {
            out << r << ',';
            write_csv_record(out, std::vector<std::string>{predictions[r]});
        }
    }
    std::cout << "predict: " << predictions.size() << " rows written to " << path.string() << '\n';
    return kExitOk;
}

struct EvaluateOptions {
    std::string model;
    DataOptions data;
    std::string out;
};

int run_evaluate(const GlobalOptions& global, const EvaluateOptions& opt) {
    const auto model = model_from_json(load_json(opt.model));
    const auto classes = model_classes(model);
    const auto csv = read_csv_file(opt.data.in);
    auto label_at = std::find(csv.header.begin(), csv.header.end(), opt.data.label);
    if (label_at == csv.header.end()) throw StateError("evaluate needs the label column '" + opt.data.label + "'");
    const auto label_pos = static_cast<std::size_t>(label_at - csv.header.begin());

    const Vocabulary class_vocab(classes);
    const auto predictions = predict_names(model, csv);
    metrics::ConfusionMatrix cm(classes.size(), classes);
    std::size_t skipped = 0;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto truth = class_vocab.find(csv.rows[r][label_pos]);
        if (!truth) {
            ++skipped;
            continue;
        }
        cm.add(*truth, *class_vocab.find(predictions[r]));
    }
    if (skipped > 0) std::cerr << "evaluate: skipped " << skipped << " rows whose label the model does not know\n";
    const auto report = metrics::report(cm);

    const bool json = global.format == "json";
    const auto path = output_path(global, opt.out, json ? "report.json" : "report.csv");
    auto out = open_output(path);
    if (json) {
        auto doc = to_json(report);
        doc["confusion"] = to_json(cm);
        doc["n_features"] = model_feature_count(model);
        out << doc.dump(2) << '\n';
    } else {
        using experiment::format_number;
        out << "test_size,n_features,accuracy,precision,f_score,recall\n";
        out << ',' << model_feature_count(model) << ',' << format_number(report.accuracy) << ','
            << format_number(report.precision_weighted) << ',' << format_number(report.f1_weighted) << ','
            << format_number(report.recall_weighted) << '\n';
    }
    std::cout << "evaluate: accuracy " << experiment::format_number(report.accuracy) << " on " << cm.total()
              << " rows; wrote " << path.string() << '\n';
    return kExitOk;
}

struct SweepOptions {
    std::optional<std::size_t> jobs;
};

std::string cell_stem(const experiment::SweepRow& row) {
    return std::string(experiment::to_string(row.model)) + "_ts" + experiment::format_number(row.test_size) + "_nf" +
           std::to_string(row.n_features);
}

int run_sweep(const GlobalOptions& global, const SweepOptions& opt) {
    auto config = base_config(global);
    if (opt.jobs) config.jobs = *opt.jobs;
    const auto result = experiment::run_sweep(config);

    const fs::path dir = global.output_dir;
    fs::create_directories(dir / "cells");
    fs::create_directories(dir / "plots");
    {
        auto out = open_output(dir / "sweep.csv");
        experiment::write_sweep_csv(out, result);
    }
    {
        auto out = open_output(dir / "sweep_timing.csv");
        experiment::write_timing_csv(out, result);
    }
    for (const auto& row : result.rows) {
        if (!row.report) {
            std::cerr << "sweep: cell " << cell_stem(row) << " failed: " << row.error << '\n';
            continue;
        }
        auto doc = to_json(*row.report);
        doc["model"] = experiment::to_string(row.model);
        doc["test_size"] = row.test_size;
        doc["n_features"] = row.n_features;
        doc["seed"] = row.seed;
        save_json(dir / "cells" / (cell_stem(row) + ".json"), doc);
    }
    std::size_t plots = 0;
    const bool json = global.format == "json";
    for (auto model : config.models) {
        for (double t : config.test_sizes) {
            try {
                const auto plot = experiment::emit_plot_data(result, model, t);
                const auto stem = std::string(experiment::to_string(model)) + "_ts" + experiment::format_number(t);
                auto out = open_output(dir / "plots" / (stem + (json ? ".json" : ".csv")));
                if (json) {
                    out << experiment::to_json(plot).dump(2) << '\n';
                } else {
                    experiment::write_plot_csv(out, plot);
                }
                ++plots;
            } catch (const SelectionError& e) {
                std::cerr << "sweep: " << e.what() << '\n';
            }
        }
    }
    std::cout << "sweep: " << result.rows.size() - result.failures() << "/" << result.rows.size() << " cells, "
              << plots << " plot files under " << dir.string() << '\n';
    return result.failures() == 0 ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"catml: categorical feature selection, clustering and classification"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Master seed")->capture_default_str();
    app.add_option("--config", global.config, "Experiment config file")->check(CLI::ExistingFile);
    app.add_option("--output-dir", global.output_dir, "Directory for outputs")->capture_default_str();
    app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SynthOptions synth_opt;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted seven-class categorical dataset");
    synth_cmd->add_option("--rows", synth_opt.rows);
    synth_cmd->add_option("--features", synth_opt.features);
    synth_cmd->add_option("--categories", synth_opt.categories);
    synth_cmd->add_option("--informative", synth_opt.informative);
    synth_cmd->add_option("--signal", synth_opt.signal)->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--missing-rate", synth_opt.missing_rate);
    synth_cmd->add_option("--out", synth_opt.out, "Output CSV (default <output-dir>/synth.csv)");

    SelectOptions select_opt;
    auto* select_cmd = app.add_subcommand("select", "Rank features by chi-square and keep the top k");
    add_data_options(select_cmd, select_opt.data);
    select_cmd->add_option("--k", select_opt.k, "Features to keep")->required()->check(CLI::PositiveNumber);
    select_cmd->add_option("--out", select_opt.out, "Ranked list (default <output-dir>/ranked.csv)");
    select_cmd->add_option("--reduced", select_opt.reduced, "Also write the reduced table here");

    ClusterOptions cluster_opt;
    auto* cluster_cmd = app.add_subcommand("cluster", "K-modes clustering");
    add_data_options(cluster_cmd, cluster_opt.data);
    cluster_cmd->add_option("--k", cluster_opt.k)->capture_default_str()->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--max-iter", cluster_opt.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--restarts", cluster_opt.restarts)->capture_default_str()->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--init", cluster_opt.init)->check(CLI::IsMember({"random", "huang"}))->capture_default_str();
    cluster_cmd->add_option("--out", cluster_opt.out, "Assignments CSV (default <output-dir>/assignments.csv)");
    cluster_cmd->add_option("--model-out", cluster_opt.model_out, "Model JSON (default <output-dir>/kmodes_model.json)");

    TrainOptions train_opt;
    auto* train_cmd = app.add_subcommand("train", "Fit a classifier and save it as JSON");
    add_data_options(train_cmd, train_opt.data);
    train_cmd->add_option("--model", train_opt.model)->check(CLI::IsMember({"mnb", "dtree"}))->capture_default_str();
    train_cmd->add_option("--out", train_opt.out, "Model JSON (default <output-dir>/model.json)");
    train_cmd->add_option("--features", train_opt.features, "Keep the top N chi-square features first");
    train_cmd->add_option("--alpha", train_opt.alpha, "Laplace smoothing (mnb)")->capture_default_str();
    train_cmd->add_option("--max-depth", train_opt.max_depth, "Depth cap (dtree)");
    train_cmd->add_option("--min-samples-split", train_opt.min_samples_split)->capture_default_str();
    train_cmd->add_option("--min-gain", train_opt.min_gain)->capture_default_str();
    train_cmd->add_flag("--prune", train_opt.prune, "Reduced-error pruning on a holdout (dtree)");
    train_cmd->add_option("--prune-fraction", train_opt.prune_fraction)->capture_default_str();

    PredictOptions predict_opt;
    auto* predict_cmd = app.add_subcommand("predict", "Predict with a saved model");
    predict_cmd->add_option("--model", predict_opt.model)->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--in", predict_opt.in)->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--out", predict_opt.out, "Predictions (default <output-dir>/predictions.csv)");

    EvaluateOptions evaluate_opt;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved classifier on labeled data");
    evaluate_cmd->add_option("--model", evaluate_opt.model)->required()->check(CLI::ExistingFile);
    add_data_options(evaluate_cmd, evaluate_opt.data);
    evaluate_cmd->add_option("--out", evaluate_opt.out, "Report (default <output-dir>/report.csv)");

    SweepOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run the test-size x feature-count sweep");
    sweep_cmd->add_option("--jobs", sweep_opt.jobs, "Cells run in parallel")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }
    global.seed_given = app.count("--seed") > 0;

    const char* stage = "catml";
    try {
        if (*synth_cmd) return stage = "synth", run_synth(global, synth_opt);
        if (*select_cmd) return stage = "select", run_select(global, select_opt);
        if (*cluster_cmd) return stage = "cluster", run_cluster(global, cluster_opt);
        if (*train_cmd) return stage = "train", run_train(global, train_opt);
        if (*predict_cmd) return stage = "predict", run_predict(global, predict_opt);
        if (*evaluate_cmd) return stage = "evaluate", run_evaluate(global, evaluate_opt);
        if (*sweep_cmd) return stage = "sweep", run_sweep(global, sweep_opt);
    } catch (const std::exception& e) {
        std::cerr << stage << ": error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
