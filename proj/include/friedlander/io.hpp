#pragma once

#include <string>
#include <vector>

namespace friedlander::io {

/// 17-significant-digit decimal; round-trips binary64 exactly.
std::string format_double(double v);

/// Flat numeric table with a config comment, the common currency of the CLI.
struct Table {
    std::string config;  // rendered as "# <config>" above the header
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> extra_comments;  // further "# ..." lines
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Parses CSV produced by to_csv (comment lines preserved in order).
Table parse_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Column-and-cell comparison; rtol = 0 demands exact decimal round-trip equality.
bool tables_match(const Table& a, const Table& b, double rtol, std::string* why = nullptr);

}  // namespace friedlander::io
