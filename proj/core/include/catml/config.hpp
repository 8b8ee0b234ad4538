#pragma once

#include <filesystem>
#include <iosfwd>

#include "catml/experiment.hpp"

namespace catml::experiment {

inline constexpr int kConfigSchemaVersion = 1;

// Parses the experiment configuration file, a small TOML subset:
//
//   schema_version = 1          # required, must be 1
//   seed = 1729
//
//   [data]
//   source = "synthetic"        # or "csv"
//   path = "data.csv"           # relative to the config file
//   label_column = "dosha"      # "" for an unlabeled file
//   missing_tokens = ["", "NA"]
//   label_source = "auto"       # "column" | "kmodes"
//
//   [synth]      rows, features, categories, informative_features, signal,
//                missing_rate, class_names, class_balance
//   [sweep]      test_sizes, feature_counts, models, stratified,
//                select_after_split, jobs
//   [mnb]        alpha
//   [dtree]      max_depth (omit for unlimited), min_samples_split,
//                min_gain, prune, prune_fraction
//   [kmodes]     k, max_iter, restarts, init ("random" | "huang")
//
// Values are quoted strings, numbers, true/false, or one-line arrays of
// those. '#' starts a comment outside strings. Unknown sections or keys are
// rejected with FormatError.
Config parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

}  // namespace catml::experiment
