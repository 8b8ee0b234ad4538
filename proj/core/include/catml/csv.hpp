#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace catml {

// Header plus records of a comma-separated file, still as text.
struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC 4180 reader: comma separator, double-quoted fields with "" escapes,
// CRLF or LF line endings, embedded newlines inside quotes. A leading UTF-8
// BOM is dropped. Blank lines are skipped. Throws SchemaError for an empty
// input or duplicate header names, IngestError for ragged records.
RawCsv parse_csv(std::istream& in);
RawCsv read_csv_file(const std::filesystem::path& path);

// Writes one record, quoting fields that need it. Always ends with "\n".
void write_csv_record(std::ostream& out, std::span<const std::string> fields);

}  // namespace catml
