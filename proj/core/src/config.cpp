#include "catml/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <variant>

#include "catml/errors.hpp"

namespace catml::experiment {
namespace {

using Scalar = std::variant<std::string, double, bool>;

struct Value {
    std::vector<Scalar> items;
    bool is_array = false;
    int line = 0;
};

class Parser {
public:
    Parser(std::string_view text, int line) : text_(text), line_(line) {}

    Value parse_value() {
        Value value;
        value.line = line_;
        skip_space();
        if (peek() == '[') {
            ++pos_;
            value.is_array = true;
            skip_space();
            if (peek() == ']') {
                ++pos_;
            } else {
                for (;;) {
                    value.items.push_back(parse_scalar());
                    skip_space();
                    if (peek() == ',') {
                        ++pos_;
                        skip_space();
                        if (peek() == ']') {
                            ++pos_;
                            break;
                        }
                        continue;
                    }
                    if (peek() == ']') {
                        ++pos_;
                        break;
                    }
                    fail("expected ',' or ']'");
                }
            }
        } else {
            value.items.push_back(parse_scalar());
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] != '#') fail("unexpected trailing text");
        return value;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw FormatError("config line " + std::to_string(line_) + ": " + message);
    }

    Scalar parse_scalar() {
        skip_space();
        if (peek() == '"') {
            ++pos_;
            std::string out;
            for (;;) {
                if (pos_ >= text_.size()) fail("unterminated string");
                const char ch = text_[pos_++];
                if (ch == '"') break;
                if (ch == '\\') {
                    if (pos_ >= text_.size()) fail("dangling escape");
                    const char next = text_[pos_++];
                    switch (next) {
                        case 'n': out.push_back('\n'); break;
                        case 't': out.push_back('\t'); break;
                        case '"': out.push_back('"'); break;
                        case '\\': out.push_back('\\'); break;
                        default: fail(std::string("unknown escape \\") + next);
                    }
                } else {
                    out.push_back(ch);
                }
            }
            return out;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != ' ' &&
               text_[pos_] != '\t' && text_[pos_] != '#')
            ++pos_;
        const std::string_view token = text_.substr(start, pos_ - start);
        if (token == "true") return true;
        if (token == "false") return false;
        double number = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size())
            fail("cannot parse value '" + std::string(token) + "'");
        return number;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Entries {
public:
    void add(std::string key, Value value) {
        if (values_.count(key)) throw FormatError("config line " + std::to_string(value.line) + ": duplicate key '" + key + "'");
        values_.emplace(std::move(key), std::move(value));
    }

    const Value* get(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void reject_unused() const {
        for (const auto& [key, value] : values_) {
            if (!used_.count(key)) throw FormatError("config line " + std::to_string(value.line) + ": unknown key '" + key + "'");
        }
    }

private:
    std::map<std::string, Value> values_;
    std::set<std::string> used_;
};

[[noreturn]] void type_error(const std::string& key, const Value& value, const char* expected) {
    throw FormatError("config line " + std::to_string(value.line) + ": '" + key + "' must be " + expected);
}

const Scalar& single(const std::string& key, const Value& value, const char* expected) {
    if (value.is_array || value.items.size() != 1) type_error(key, value, expected);
    return value.items.front();
}

std::string as_string(const std::string& key, const Value& value) {
    const auto& s = single(key, value, "a string");
    if (!std::holds_alternative<std::string>(s)) type_error(key, value, "a string");
    return std::get<std::string>(s);
}

double as_number(const std::string& key, const Value& value) {
    const auto& s = single(key, value, "a number");
    if (!std::holds_alternative<double>(s)) type_error(key, value, "a number");
    return std::get<double>(s);
}

std::size_t as_count(const std::string& key, const Value& value) {
    const double d = as_number(key, value);
    if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) type_error(key, value, "a non-negative integer");
    return static_cast<std::size_t>(d);
}

bool as_bool(const std::string& key, const Value& value) {
    const auto& s = single(key, value, "true or false");
    if (!std::holds_alternative<bool>(s)) type_error(key, value, "true or false");
    return std::get<bool>(s);
}

template <typename T>
std::vector<T> as_array(const std::string& key, const Value& value, const char* expected) {
    if (!value.is_array) type_error(key, value, expected);
    std::vector<T> out;
    for (const auto& item : value.items) {
        if (!std::holds_alternative<T>(item)) type_error(key, value, expected);
        out.push_back(std::get<T>(item));
    }
    return out;
}

}  // namespace

Config parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    static const std::set<std::string> sections{"", "data", "synth", "sweep", "mnb", "dtree", "kmodes"};
    Entries entries;
    std::string section;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (text.front() == '[') {
            const auto close = text.find(']');
            if (close == std::string::npos) throw FormatError("config line " + std::to_string(number) + ": unterminated section");
            const std::string rest = trim(std::string_view(text).substr(close + 1));
            if (!rest.empty() && rest.front() != '#')
                throw FormatError("config line " + std::to_string(number) + ": text after section header");
            section = trim(std::string_view(text).substr(1, close - 1));
            if (!sections.count(section))
                throw FormatError("config line " + std::to_string(number) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw FormatError("config line " + std::to_string(number) + ": expected key = value");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        if (key.empty()) throw FormatError("config line " + std::to_string(number) + ": empty key");
        Parser parser(std::string_view(text).substr(eq + 1), number);
        entries.add(section.empty() ? key : section + "." + key, parser.parse_value());
    }

    const Value* version = entries.get("schema_version");
    if (!version) throw FormatError("config lacks schema_version");
    if (as_number("schema_version", *version) != kConfigSchemaVersion)
        throw FormatError("unsupported config schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");

    Config config;
    auto with = [&](const char* key, auto&& apply) {
        if (const Value* v = entries.get(key)) apply(std::string(key), *v);
    };

    with("seed", [&](const std::string& k, const Value& v) { config.seed = as_count(k, v); });

    std::string source = "synthetic";
    with("data.source", [&](const std::string& k, const Value& v) { source = as_string(k, v); });
    with("data.path", [&](const std::string& k, const Value& v) {
        std::filesystem::path p = as_string(k, v);
        config.csv_path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    });
    if (source == "synthetic") {
        config.csv_path.reset();
    } else if (source == "csv") {
        if (!config.csv_path) throw FormatError("data.source = \"csv\" needs data.path");
    } else {
        throw FormatError("data.source must be \"synthetic\" or \"csv\"");
    }
    with("data.label_column", [&](const std::string& k, const Value& v) {
        const auto name = as_string(k, v);
        config.ingest.label_column = name.empty() ? std::nullopt : std::optional<std::string>(name);
        if (!name.empty()) config.synth.label_column = name;
    });
    with("data.missing_tokens", [&](const std::string& k, const Value& v) {
        config.ingest.missing_tokens = as_array<std::string>(k, v, "an array of strings");
    });
    with("data.label_source", [&](const std::string& k, const Value& v) {
        try {
            config.label_source = parse_label_source(as_string(k, v));
        } catch (const ArgumentError& e) {
            throw FormatError(e.what());
        }
    });

    auto& s = config.synth;
    with("synth.rows", [&](const std::string& k, const Value& v) { s.rows = as_count(k, v); });
    with("synth.features", [&](const std::string& k, const Value& v) { s.features = as_count(k, v); });
    with("synth.categories", [&](const std::string& k, const Value& v) { s.categories = as_count(k, v); });
    with("synth.informative_features", [&](const std::string& k, const Value& v) { s.informative_features = as_count(k, v); });
    with("synth.signal", [&](const std::string& k, const Value& v) { s.signal = as_number(k, v); });
    with("synth.missing_rate", [&](const std::string& k, const Value& v) { s.missing_rate = as_number(k, v); });
    with("synth.class_names", [&](const std::string& k, const Value& v) {
        s.class_names = as_array<std::string>(k, v, "an array of strings");
    });
    with("synth.class_balance", [&](const std::string& k, const Value& v) {
        s.class_balance = as_array<double>(k, v, "an array of numbers");
    });

    with("sweep.test_sizes", [&](const std::string& k, const Value& v) {
        config.test_sizes = as_array<double>(k, v, "an array of numbers");
    });
    with("sweep.feature_counts", [&](const std::string& k, const Value& v) {
        config.feature_counts.clear();
        for (double d : as_array<double>(k, v, "an array of integers")) {
            if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d))) type_error(k, v, "an array of positive integers");
            config.feature_counts.push_back(static_cast<std::size_t>(d));
        }
    });
    with("sweep.models", [&](const std::string& k, const Value& v) {
        config.models.clear();
        for (const auto& name : as_array<std::string>(k, v, "an array of strings")) {
            try {
                config.models.push_back(parse_model_kind(name));
            } catch (const ArgumentError& e) {
                throw FormatError(e.what());
            }
        }
    });
    with("sweep.stratified", [&](const std::string& k, const Value& v) { config.stratified = as_bool(k, v); });
    with("sweep.select_after_split", [&](const std::string& k, const Value& v) { config.select_after_split = as_bool(k, v); });
    with("sweep.jobs", [&](const std::string& k, const Value& v) { config.jobs = as_count(k, v); });

    with("mnb.alpha", [&](const std::string& k, const Value& v) { config.alpha = as_number(k, v); });

    auto& t = config.tree;
    with("dtree.max_depth", [&](const std::string& k, const Value& v) { t.max_depth = as_count(k, v); });
    with("dtree.min_samples_split", [&](const std::string& k, const Value& v) { t.min_samples_split = as_count(k, v); });
    with("dtree.min_gain", [&](const std::string& k, const Value& v) { t.min_gain = as_number(k, v); });
    with("dtree.prune", [&](const std::string& k, const Value& v) { t.prune = as_bool(k, v); });
    with("dtree.prune_fraction", [&](const std::string& k, const Value& v) { t.prune_fraction = as_number(k, v); });

    auto& km = config.kmodes;
    with("kmodes.k", [&](const std::string& k, const Value& v) { km.k = as_count(k, v); });
    with("kmodes.max_iter", [&](const std::string& k, const Value& v) { km.max_iter = as_count(k, v); });
    with("kmodes.restarts", [&](const std::string& k, const Value& v) { km.restarts = as_count(k, v); });
    with("kmodes.init", [&](const std::string& k, const Value& v) {
        const auto name = as_string(k, v);
        if (name == "random") {
            km.init = kmodes::Init::random;
        } else if (name == "huang") {
            km.init = kmodes::Init::huang;
        } else {
            throw FormatError("kmodes.init must be \"random\" or \"huang\"");
        }
    });

    entries.reject_unused();
    try {
        config.validate();
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("invalid config: ") + e.what());
    }
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config '" + path.string() + "'");
    return parse_config(in, path.parent_path());
}

}  // namespace catml::experiment
