#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "catml/dataset.hpp"
#include "catml/dtree.hpp"
#include "catml/kmodes.hpp"
#include "catml/metrics.hpp"
#include "catml/rng.hpp"
#include "catml/synth.hpp"

namespace catml::experiment {

enum class ModelKind { mnb, dtree };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

enum class LabelSource {
    automatic,  // the label column when present, else k-modes
    column,
    kmodes,
};

std::string_view to_string(LabelSource source);
LabelSource parse_label_source(std::string_view text);

struct KModesSettings {
    std::size_t k = 7;
    std::size_t max_iter = 100;
    std::size_t restarts = 1;
    kmodes::Init init = kmodes::Init::random;
};

struct Config {
    // Read from CSV when set, otherwise generated from `synth`.
    std::optional<std::filesystem::path> csv_path;
    IngestOptions ingest{std::string("dosha"), {"", "NA"}};
    synth::GeneratorSpec synth;

    LabelSource label_source = LabelSource::automatic;
    std::vector<double> test_sizes{0.1, 0.2};
    std::vector<std::size_t> feature_counts{20, 40, 60, 80, 100};
    std::vector<ModelKind> models{ModelKind::mnb, ModelKind::dtree};
    std::uint64_t seed = kDefaultSeed;
    double alpha = 1.0;
    dtree::Params tree;
    KModesSettings kmodes;
    bool stratified = false;
    // Fit feature selection on the training split only.
    bool select_after_split = false;
    std::size_t jobs = 1;

    // Checks everything that does not need the data.
    void validate() const;
};

// Loaded, imputed and labeled data shared by every cell of a sweep.
struct Prepared {
    CategoricalTable table;
    std::optional<kmodes::ClusterModel> clusters;
    std::optional<kmodes::ClusterNaming> naming;
};

// load (or generate) -> forward_fill -> label. Errors are rethrown as
// PipelineError carrying the stage name.
Prepared prepare(const Config& config);

// Seed of one (test_size, n_features) cell. Both models of a cell see the
// same split; model-specific randomness is derived from this seed.
std::uint64_t cell_seed(std::uint64_t master, double test_size, std::size_t n_features);

// select -> split -> fit -> predict -> evaluate on prepared data.
metrics::Report run_cell(const Config& config, const Prepared& data, double test_size, std::size_t n_features,
                         ModelKind model);

// prepare followed by run_cell.
metrics::Report run_pipeline(const Config& config, double test_size, std::size_t n_features, ModelKind model);

struct SweepRow {
    ModelKind model = ModelKind::mnb;
    double test_size = 0.0;
    std::size_t n_features = 0;
    std::optional<metrics::Report> report;  // empty when the cell failed
    std::string error;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

struct SweepResult {
    // Ordered by model, then test size, then feature count.
    std::vector<SweepRow> rows;

    std::size_t failures() const;
};

SweepResult run_sweep(const Config& config);
SweepResult run_sweep(const Config& config, const Prepared& data);

inline constexpr std::string_view kSweepHeader = "model,test_size,n_features,accuracy,precision,f_score,recall";

// Shortest decimal that round-trips the double.
std::string format_number(double value);

// Header plus one row per cell; failed cells leave the metric fields empty.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
// model,test_size,n_features,seed,seconds,error
void write_timing_csv(std::ostream& out, const SweepResult& result);

struct PlotGroup {
    std::size_t n_features = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double f_score = 0.0;
    double recall = 0.0;
};

// Grouped-bar data: one group per feature count, four bars per group.
struct PlotData {
    ModelKind model = ModelKind::mnb;
    double test_size = 0.0;
    std::vector<PlotGroup> groups;
};

// Throws SelectionError when no successful row matches.
PlotData emit_plot_data(const SweepResult& result, ModelKind model, double test_size);

// Long format: n_features,metric,value (metric order accuracy, precision,
// f_score, recall).
void write_plot_csv(std::ostream& out, const PlotData& plot);
nlohmann::json to_json(const PlotData& plot);

}  // namespace catml::experiment
