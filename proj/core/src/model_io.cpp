#include "catml/model_io.hpp"

#include <algorithm>
#include <fstream>

#include "catml/errors.hpp"

namespace catml {

using nlohmann::json;

namespace {

json schema_json(const std::vector<std::string>& names, const std::vector<Vocabulary>& vocabularies) {
    json features = json::array();
    for (std::size_t f = 0; f < names.size(); ++f) {
        features.push_back({{"name", names[f]}, {"categories", vocabularies[f].entries()}});
    }
    return features;
}

void read_schema(const json& doc, std::vector<std::string>& names, std::vector<Vocabulary>& vocabularies) {
    for (const auto& feature : doc.at("features")) {
        names.push_back(feature.at("name").get<std::string>());
        vocabularies.emplace_back(feature.at("categories").get<std::vector<std::string>>());
    }
}

void check_header(const json& doc, const std::string& type) {
    if (!doc.is_object() || !doc.contains("format_version")) throw FormatError("model file lacks format_version");
    const auto version = doc.at("format_version");
    if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion)
        throw FormatError("unsupported model format_version " + version.dump());
    if (doc.value("model_type", std::string{}) != type)
        throw FormatError("expected model_type '" + type + "', found '" + doc.value("model_type", std::string{}) + "'");
}

Cell find_or_throw(const Vocabulary& vocabulary, const std::string& text, const std::string& what) {
    auto index = vocabulary.find(text);
    if (!index) throw FormatError("unknown " + what + " '" + text + "'");
    return *index;
}

json node_json(const dtree::Tree& tree, dtree::NodeId id) {
    const auto& node = tree.nodes[id];
    json out{{"majority", tree.class_names[static_cast<std::size_t>(node.majority_class)]},
             {"samples", node.sample_count},
             {"class_counts", node.class_counts}};
    if (!node.is_leaf()) {
        const std::size_t f = *node.split_feature;
        out["feature"] = tree.feature_names[f];
        json children = json::object();
        for (const auto& [category, child] : node.children) {
            children[tree.vocabularies[f].decode(category)] = node_json(tree, child);
        }
        out["children"] = std::move(children);
    }
    return out;
}

dtree::NodeId read_node(const json& doc, dtree::Tree& tree, const Vocabulary& classes) {
    const auto id = static_cast<dtree::NodeId>(tree.nodes.size());
    tree.nodes.emplace_back();
    dtree::Node node;
    node.majority_class = find_or_throw(classes, doc.at("majority").get<std::string>(), "class");
    node.sample_count = doc.at("samples").get<std::size_t>();
    node.class_counts = doc.at("class_counts").get<std::vector<std::size_t>>();
    if (doc.contains("feature")) {
        const auto name = doc.at("feature").get<std::string>();
        auto it = std::find(tree.feature_names.begin(), tree.feature_names.end(), name);
        if (it == tree.feature_names.end()) throw FormatError("unknown feature '" + name + "'");
        const auto f = static_cast<std::size_t>(it - tree.feature_names.begin());
        node.split_feature = f;
        for (const auto& [category, child] : doc.at("children").items()) {
            const Cell c = find_or_throw(tree.vocabularies[f], category, "category");
            node.children.emplace_back(c, read_node(child, tree, classes));
        }
        std::sort(node.children.begin(), node.children.end());
    }
    tree.nodes[id] = std::move(node);
    return id;
}

}  // namespace

json to_json(const mnb::Model& model) {
    json likelihood = json::object();
    for (std::size_t f = 0; f < model.feature_count(); ++f) {
        json table = json::object();
        for (std::size_t v = 0; v < model.vocabularies[f].size(); ++v) {
            std::vector<double> per_class;
            for (std::size_t c = 0; c < model.class_count(); ++c) per_class.push_back(model.likelihood(f, static_cast<Cell>(v), c));
            table[model.vocabularies[f].decode(static_cast<Cell>(v))] = per_class;
        }
        likelihood[model.feature_names[f]] = std::move(table);
    }
    return {{"format_version", kModelFormatVersion},
            {"model_type", "mnb"},
            {"classes", model.class_names},
            {"alpha", model.alpha},
            {"row_count", model.row_count},
            {"class_counts", model.class_counts},
            {"log_prior", model.log_prior},
            {"features", schema_json(model.feature_names, model.vocabularies)},
            {"log_likelihood", std::move(likelihood)}};
}

mnb::Model mnb_from_json(const json& doc) {
    check_header(doc, "mnb");
    try {
        mnb::Model model;
        model.class_names = doc.at("classes").get<std::vector<std::string>>();
        model.alpha = doc.at("alpha").get<double>();
        model.row_count = doc.at("row_count").get<std::size_t>();
        model.class_counts = doc.at("class_counts").get<std::vector<std::uint64_t>>();
        model.log_prior = doc.at("log_prior").get<std::vector<double>>();
        read_schema(doc, model.feature_names, model.vocabularies);
        const std::size_t classes = model.class_names.size();
        if (model.class_counts.size() != classes || model.log_prior.size() != classes)
            throw FormatError("class arrays disagree in length");
        const auto& likelihood = doc.at("log_likelihood");
        for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
            const auto& table = likelihood.at(model.feature_names[f]);
            std::vector<double> flat(model.vocabularies[f].size() * classes);
            for (std::size_t v = 0; v < model.vocabularies[f].size(); ++v) {
                const auto per_class = table.at(model.vocabularies[f].decode(static_cast<Cell>(v))).get<std::vector<double>>();
                if (per_class.size() != classes) throw FormatError("likelihood row has the wrong class count");
                std::copy(per_class.begin(), per_class.end(), flat.begin() + static_cast<std::ptrdiff_t>(v * classes));
            }
            model.log_likelihood.push_back(std::move(flat));
        }
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed naive Bayes model: ") + e.what());
    }
}

json to_json(const dtree::Tree& tree) {
    return {{"format_version", kModelFormatVersion},
            {"model_type", "dtree"},
            {"classes", tree.class_names},
            {"features", schema_json(tree.feature_names, tree.vocabularies)},
            {"root", node_json(tree, 0)}};
}

dtree::Tree dtree_from_json(const json& doc) {
    check_header(doc, "dtree");
    try {
        dtree::Tree tree;
        tree.class_names = doc.at("classes").get<std::vector<std::string>>();
        read_schema(doc, tree.feature_names, tree.vocabularies);
        const Vocabulary classes(tree.class_names);
        read_node(doc.at("root"), tree, classes);
        return tree;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed decision tree model: ") + e.what());
    }
}

json to_json(const kmodes::ClusterModel& model) {
    json modes = json::array();
    for (const auto& mode : model.modes) {
        std::vector<std::string> values;
        for (std::size_t f = 0; f < mode.size(); ++f) values.push_back(model.vocabularies[f].decode(mode[f]));
        modes.push_back(values);
    }
    return {{"format_version", kModelFormatVersion},
            {"model_type", "kmodes"},
            {"k", model.k},
            {"seed", model.seed},
            {"iterations_run", model.iterations_run},
            {"converged", model.converged},
            {"cost_trace", model.cost_trace},
            {"moves_trace", model.moves_trace},
            {"features", schema_json(model.feature_names, model.vocabularies)},
            {"modes", std::move(modes)}};
}

kmodes::ClusterModel kmodes_from_json(const json& doc) {
    check_header(doc, "kmodes");
    try {
        kmodes::ClusterModel model;
        model.k = doc.at("k").get<std::size_t>();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.iterations_run = doc.at("iterations_run").get<std::size_t>();
        model.converged = doc.at("converged").get<bool>();
        model.cost_trace = doc.at("cost_trace").get<std::vector<std::uint64_t>>();
        model.moves_trace = doc.at("moves_trace").get<std::vector<std::size_t>>();
        read_schema(doc, model.feature_names, model.vocabularies);
        for (const auto& mode : doc.at("modes")) {
            const auto values = mode.get<std::vector<std::string>>();
            if (values.size() != model.feature_names.size()) throw FormatError("mode has the wrong length");
            std::vector<Cell> encoded;
            for (std::size_t f = 0; f < values.size(); ++f)
                encoded.push_back(find_or_throw(model.vocabularies[f], values[f], "category"));
            model.modes.push_back(std::move(encoded));
        }
        if (model.modes.size() != model.k) throw FormatError("mode count differs from k");
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed k-modes model: ") + e.what());
    }
}

json to_json(const metrics::ConfusionMatrix& cm) {
    json rows = json::array();
    for (std::size_t i = 0; i < cm.class_count(); ++i) {
        std::vector<std::uint64_t> row;
        for (std::size_t j = 0; j < cm.class_count(); ++j) row.push_back(cm.at(i, j));
        rows.push_back(row);
    }
    return {{"classes", cm.classes()}, {"counts", std::move(rows)}};
}

json to_json(const metrics::Report& report) {
    json per_class = json::array();
    for (const auto& m : report.per_class) {
        per_class.push_back({{"class", m.name}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}});
    }
    return {{"accuracy", report.accuracy},
            {"precision", report.precision_weighted},
            {"recall", report.recall_weighted},
            {"f_score", report.f1_weighted},
            {"zero_division_events", report.zero_division_events},
            {"per_class", std::move(per_class)}};
}

AnyModel model_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("model file is not a JSON object");
    const auto type = doc.value("model_type", std::string{});
    if (type == "mnb") return mnb_from_json(doc);
    if (type == "dtree") return dtree_from_json(doc);
    if (type == "kmodes") return kmodes_from_json(doc);
    throw FormatError("unknown model_type '" + type + "'");
}

void save_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace catml
