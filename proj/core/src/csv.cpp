#include "catml/csv.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <unordered_set>

#include "catml/errors.hpp"

namespace catml {
namespace {

class RecordReader {
public:
    explicit RecordReader(std::string text) : text_(std::move(text)) {
        if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    }

    // Returns false at end of input. Blank lines yield no record.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        while (pos_ < text_.size()) {
            if (at_line_end()) {
                skip_line_end();
                continue;
            }
            read_record(fields);
            return true;
        }
        return false;
    }

private:
    bool at_line_end() const { return text_[pos_] == '\n' || text_[pos_] == '\r'; }

    void skip_line_end() {
        if (text_[pos_] == '\r') ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    }

    void read_record(std::vector<std::string>& fields) {
        std::string field;
        for (;;) {
            field.clear();
            if (pos_ < text_.size() && text_[pos_] == '"') {
                ++pos_;
                for (;;) {
                    if (pos_ >= text_.size()) throw IngestError("unterminated quoted field");
                    const char ch = text_[pos_++];
                    if (ch == '"') {
                        if (pos_ < text_.size() && text_[pos_] == '"') {
                            field.push_back('"');
                            ++pos_;
                        } else {
                            break;
                        }
                    } else {
                        field.push_back(ch);
                    }
                }
                // Tolerate stray text after the closing quote by appending it.
                while (pos_ < text_.size() && text_[pos_] != ',' && !at_line_end()) field.push_back(text_[pos_++]);
            } else {
                while (pos_ < text_.size() && text_[pos_] != ',' && !at_line_end()) field.push_back(text_[pos_++]);
            }
            fields.push_back(field);
            if (pos_ >= text_.size()) return;
            if (text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            skip_line_end();
            return;
        }
    }

    std::string text_;
    std::size_t pos_ = 0;
};

bool needs_quotes(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

}  // namespace

RawCsv parse_csv(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    RecordReader reader(std::move(text));

    RawCsv csv;
    if (!reader.next(csv.header)) throw SchemaError("empty CSV input (no header)");

    std::unordered_set<std::string> names;
    for (const auto& name : csv.header) {
        if (!names.insert(name).second) throw SchemaError("duplicate header name '" + name + "'");
    }

    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() != csv.header.size()) {
            throw IngestError("ragged row " + std::to_string(csv.rows.size() + 1) + ": " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(csv.header.size()));
        }
        csv.rows.push_back(fields);
    }
    return csv;
}

RawCsv read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    return parse_csv(in);
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    bool first = true;
    for (const auto& field : fields) {
        if (!first) out << ',';
        first = false;
        if (needs_quotes(field)) {
            out << '"';
            for (char ch : field) {
                if (ch == '"') out << '"';
                out << ch;
            }
            out << '"';
        } else {
            out << field;
        }
    }
    out << '\n';
}

}  // namespace catml
