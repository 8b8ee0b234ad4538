#include "catml/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ostream>
#include <thread>

#include "catml/errors.hpp"
#include "catml/feature_selection.hpp"
#include "catml/mnb.hpp"

namespace catml::experiment {
namespace {

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(stage, e.what());
    }
}

CategoricalTable kmodes_labels(const Config& config, const CategoricalTable& table, Prepared& out) {
    kmodes::Options options;
    options.k = config.kmodes.k;
    options.max_iter = config.kmodes.max_iter;
    options.init = config.kmodes.init;
    options.seed = derive_seed(config.seed, "kmodes");
    auto model = kmodes::fit_best(table.without_labels(), options, config.kmodes.restarts);

    LabelColumn labels;
    labels.name = table.has_labels() ? table.labels().name : "cluster";
    if (table.has_labels()) {
        auto naming = kmodes::name_clusters(model, table.labels().values, table.labels().vocabulary);
        labels.vocabulary = table.labels().vocabulary;
        for (std::size_t a : model.assignments) labels.values.push_back(*naming.mapping[a]);
        out.naming = std::move(naming);
    } else {
        for (std::size_t m = 0; m < model.k; ++m) labels.vocabulary.intern("cluster_" + std::to_string(m));
        for (std::size_t a : model.assignments) labels.values.push_back(static_cast<Cell>(a));
    }
    out.clusters = std::move(model);
    return table.with_labels(std::move(labels));
}

std::vector<Cell> fit_and_predict(const Config& config, const CategoricalTable& train, const CategoricalTable& test,
                                  ModelKind kind, std::uint64_t seed) {
    if (kind == ModelKind::mnb) {
        const auto model = in_stage("fit", [&] { return mnb::fit(train, config.alpha); });
        return in_stage("predict", [&] { return mnb::predict_all(model, test); });
    }
    dtree::Params params = config.tree;
    params.seed = derive_seed(seed, "dtree");
    const auto tree = in_stage("fit", [&] { return dtree::fit(train, params); });
    return in_stage("predict", [&] { return dtree::predict_all(tree, test); });
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::mnb ? "mnb" : "dtree"; }

ModelKind parse_model_kind(std::string_view text) {
    if (text == "mnb") return ModelKind::mnb;
    if (text == "dtree") return ModelKind::dtree;
    throw ArgumentError("unknown model '" + std::string(text) + "' (expected mnb or dtree)");
}

std::string_view to_string(LabelSource source) {
    switch (source) {
        case LabelSource::automatic: return "auto";
        case LabelSource::column: return "column";
        case LabelSource::kmodes: return "kmodes";
    }
    return "auto";
}

LabelSource parse_label_source(std::string_view text) {
    if (text == "auto") return LabelSource::automatic;
    if (text == "column") return LabelSource::column;
    if (text == "kmodes") return LabelSource::kmodes;
    throw ArgumentError("unknown label source '" + std::string(text) + "' (expected auto, column or kmodes)");
}

void Config::validate() const {
    if (test_sizes.empty()) throw ArgumentError("test_sizes is empty");
    for (double t : test_sizes) {
        if (!(t > 0.0 && t < 1.0)) throw ArgumentError("test size " + format_number(t) + " outside (0, 1)");
    }
    if (feature_counts.empty()) throw ArgumentError("feature_counts is empty");
    for (auto n : feature_counts) {
        if (n == 0) throw ArgumentError("feature counts must be positive");
    }
    if (models.empty()) throw ArgumentError("no models selected");
    if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
    tree.validate();
    if (kmodes.k < 1 || kmodes.max_iter < 1 || kmodes.restarts < 1)
        throw ArgumentError("k-modes k, max_iter and restarts must be positive");
    if (jobs < 1) throw ArgumentError("jobs must be at least 1");
    if (!csv_path) synth.validate();
    if (label_source == LabelSource::column && !ingest.label_column && csv_path)
        throw ArgumentError("label source 'column' needs a label column");
}

Prepared prepare(const Config& config) {
    config.validate();
    Prepared out;
    CategoricalTable raw = in_stage("load", [&] {
        if (config.csv_path) return load_csv(*config.csv_path, config.ingest);
        return synth::generate(config.synth, derive_seed(config.seed, "synth"));
    });
    CategoricalTable table = in_stage("impute", [&] { return forward_fill(raw); });

    out.table = in_stage("label", [&] {
        switch (config.label_source) {
            case LabelSource::column:
                if (!table.has_labels()) throw StateError("data has no label column");
                return table;
            case LabelSource::kmodes:
                return kmodes_labels(config, table, out);
            case LabelSource::automatic:
                break;
        }
        return table.has_labels() ? table : kmodes_labels(config, table, out);
    });

    for (auto n : config.feature_counts) {
        if (n > out.table.column_count())
            throw PipelineError("select", "feature count " + std::to_string(n) + " exceeds the " +
                                              std::to_string(out.table.column_count()) + " available features");
    }
    return out;
}

std::uint64_t cell_seed(std::uint64_t master, double test_size, std::size_t n_features) {
    return derive_seed(master, "cell/test_size=" + format_number(test_size) + "/n_features=" + std::to_string(n_features));
}

metrics::Report run_cell(const Config& config, const Prepared& data, double test_size, std::size_t n_features,
                         ModelKind model) {
    const std::uint64_t seed = cell_seed(config.seed, test_size, n_features);
    const CategoricalTable& table = data.table;

    CategoricalTable train;
    CategoricalTable test;
    if (!config.select_after_split) {
        auto selected = in_stage("select", [&] { return features::select_k_best(table, n_features).reduced; });
        auto split = in_stage("split", [&] { return train_test_split(selected, test_size, seed, config.stratified); });
        train = std::move(split.train);
        test = std::move(split.test);
    } else {
        auto split = in_stage("split", [&] { return train_test_split(table, test_size, seed, config.stratified); });
        in_stage("select", [&] {
            auto selection = features::select_k_best(split.train, n_features);
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < n_features; ++i) keep.push_back(selection.ranked[i].column);
            std::sort(keep.begin(), keep.end());
            train = std::move(selection.reduced);
            test = split.test.select_columns(keep);
            return 0;
        });
    }

    const auto predicted = fit_and_predict(config, train, test, model, seed);
    return in_stage("evaluate", [&] {
        const auto& labels = test.labels();
        auto cm = metrics::confusion(labels.values, predicted, labels.vocabulary.size(), labels.vocabulary.entries());
        return metrics::report(cm);
    });
}

metrics::Report run_pipeline(const Config& config, double test_size, std::size_t n_features, ModelKind model) {
    return run_cell(config, prepare(config), test_size, n_features, model);
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.report; }));
}

SweepResult run_sweep(const Config& config) { return run_sweep(config, prepare(config)); }

SweepResult run_sweep(const Config& config, const Prepared& data) {
    SweepResult result;
    for (auto model : config.models) {
        for (double t : config.test_sizes) {
            for (auto n : config.feature_counts) {
                SweepRow row;
                row.model = model;
                row.test_size = t;
                row.n_features = n;
                row.seed = cell_seed(config.seed, t, n);
                result.rows.push_back(std::move(row));
            }
        }
    }

    auto run_one = [&](SweepRow& row) {
        const auto start = std::chrono::steady_clock::now();
        try {
            row.report = run_cell(config, data, row.test_size, row.n_features, row.model);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const std::size_t workers = std::min(config.jobs, result.rows.size());
    if (workers <= 1) {
        for (auto& row : result.rows) run_one(row);
        return result;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < result.rows.size(); i = next++) run_one(result.rows[i]);
        });
    }
    pool.clear();
    return result;
}

std::string format_number(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << kSweepHeader << '\n';
    for (const auto& row : result.rows) {
        out << to_string(row.model) << ',' << format_number(row.test_size) << ',' << row.n_features;
        if (row.report) {
            out << ',' << format_number(row.report->accuracy) << ',' << format_number(row.report->precision_weighted)
                << ',' << format_number(row.report->f1_weighted) << ',' << format_number(row.report->recall_weighted);
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
}

void write_timing_csv(std::ostream& out, const SweepResult& result) {
    out << "model,test_size,n_features,seed,seconds,error\n";
    for (const auto& row : result.rows) {
        std::string error = row.error;
        std::replace(error.begin(), error.end(), '"', '\'');
        out << to_string(row.model) << ',' << format_number(row.test_size) << ',' << row.n_features << ','
            << row.seed << ',' << format_number(row.seconds) << ",\"" << error << "\"\n";
    }
}

PlotData emit_plot_data(const SweepResult& result, ModelKind model, double test_size) {
    PlotData plot;
    plot.model = model;
    plot.test_size = test_size;
    for (const auto& row : result.rows) {
        if (row.model != model || row.test_size != test_size || !row.report) continue;
        plot.groups.push_back({row.n_features, row.report->accuracy, row.report->precision_weighted,
                               row.report->f1_weighted, row.report->recall_weighted});
    }
    if (plot.groups.empty())
        throw SelectionError("no sweep rows for model " + std::string(to_string(model)) + " at test size " +
                             format_number(test_size));
    return plot;
}

void write_plot_csv(std::ostream& out, const PlotData& plot) {
    out << "n_features,metric,value\n";
    for (const auto& g : plot.groups) {
        out << g.n_features << ",accuracy," << format_number(g.accuracy) << '\n';
        out << g.n_features << ",precision," << format_number(g.precision) << '\n';
        out << g.n_features << ",f_score," << format_number(g.f_score) << '\n';
        out << g.n_features << ",recall," << format_number(g.recall) << '\n';
    }
}

nlohmann::json to_json(const PlotData& plot) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : plot.groups) {
        groups.push_back({{"n_features", g.n_features},
                          {"bars", {{{"metric", "accuracy"}, {"value", g.accuracy}},
                                    {{"metric", "precision"}, {"value", g.precision}},
                                    {{"metric", "f_score"}, {"value", g.f_score}},
                                    {{"metric", "recall"}, {"value", g.recall}}}}});
    }
    return {{"model", to_string(plot.model)}, {"test_size", plot.test_size}, {"groups", std::move(groups)}};
}

}  // namespace catml::experiment
