#include "tilesift/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "tilesift/util.hpp"

namespace tilesift {

std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("fmt_double: conversion failed");
    }
    return std::string(buf, p);
}

std::string fmt_fixed(double v, int precision) {
    if (precision < 0) {
        throw std::invalid_argument("fmt_fixed: negative precision");
    }
    char buf[64];
    auto [p, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    if (ec != std::errc()) {
        throw std::runtime_error("fmt_fixed: conversion failed");
    }
    return std::string(buf, p);
}

std::string csv_escape(const std::string& field) {
    bool needs_quoting = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quoting) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (in_quotes) {
        throw std::runtime_error("csv: unterminated quoted field in line: " + line);
    }
    fields.push_back(cur);
    return fields;
}

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open csv file: " + path);
    }
    CsvFile file;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header_seen && !line.empty() && line.front() == '#') {
            file.comments.push_back(line);
            continue;
        }
        if (line.empty()) continue;
        auto fields = csv_split(line);
        if (!header_seen) {
            file.header = std::move(fields);
            header_seen = true;
        } else {
            if (fields.size() != file.header.size()) {
                throw std::runtime_error("csv: row with " + std::to_string(fields.size()) +
                                         " fields, expected " +
                                         std::to_string(file.header.size()) + " in " + path);
            }
            file.rows.push_back(std::move(fields));
        }
    }
    if (!header_seen) {
        throw std::runtime_error("csv: missing header in " + path);
    }
    return file;
}

void write_csv(const std::string& path, const CsvFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write csv file: " + path);
    }
    for (const std::string& c : file.comments) {
        out << c << '\n';
    }
    out << csv_join(file.header) << '\n';
    for (const auto& row : file.rows) {
        if (row.size() != file.header.size()) {
            throw std::runtime_error("csv: row width mismatch while writing " + path);
        }
        out << csv_join(row) << '\n';
    }
    if (!out) {
        throw std::runtime_error("csv: write failed for " + path);
    }
}

}  // namespace tilesift
