#pragma once

#include <filesystem>
#include <variant>

#include <nlohmann/json.hpp>

#include "catml/dtree.hpp"
#include "catml/kmodes.hpp"
#include "catml/metrics.hpp"
#include "catml/mnb.hpp"

namespace catml {

// Version written into every model file. Loaders reject any other value.
inline constexpr int kModelFormatVersion = 1;

// Models are serialized with category, feature and class names as strings,
// never as indices, so a file stays meaningful without the training data.
nlohmann::json to_json(const mnb::Model& model);
nlohmann::json to_json(const dtree::Tree& tree);
nlohmann::json to_json(const kmodes::ClusterModel& model);
nlohmann::json to_json(const metrics::Report& report);
nlohmann::json to_json(const metrics::ConfusionMatrix& cm);

mnb::Model mnb_from_json(const nlohmann::json& doc);
dtree::Tree dtree_from_json(const nlohmann::json& doc);
kmodes::ClusterModel kmodes_from_json(const nlohmann::json& doc);

using AnyModel = std::variant<mnb::Model, dtree::Tree, kmodes::ClusterModel>;

// Dispatches on "model_type" after checking "format_version".
AnyModel model_from_json(const nlohmann::json& doc);

void save_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace catml
