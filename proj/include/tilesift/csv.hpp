#pragma once

#include <string>
#include <vector>

namespace tilesift {

// Minimal RFC-4180-style CSV: fields containing commas, quotes, or
// newlines are quoted on write and unquoted on read. No embedded-newline
// support on read (all pipeline formats are one record per line).
std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);
std::vector<std::string> csv_split(const std::string& line);

struct CsvFile {
    std::vector<std::string> comments;  // leading "# ..." lines, sans newline
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads a headered CSV, collecting leading '#' comment lines separately.
CsvFile read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvFile& file);

}  // namespace tilesift
