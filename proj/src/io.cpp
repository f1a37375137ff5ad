#include "friedlander/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace friedlander::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    if (!table.config.empty()) out += "# " + table.config + "\n";
    for (const auto& c : table.extra_comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ",";
        out += table.columns[i];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json j;
    j["config"] = table.config;
    if (!table.extra_comments.empty()) j["comments"] = table.extra_comments;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j.dump(2) + "\n";
}

Table parse_csv(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        return parts;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string c = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            if (!have_header && table.config.empty())
                table.config = c;
            else
                table.extra_comments.push_back(c);
            continue;
        }
        if (!have_header) {
            table.columns = split(line);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("parse_csv: non-numeric cell '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != table.columns.size())
            throw std::runtime_error("parse_csv: row width mismatch");
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::runtime_error("parse_csv: no header row found");
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

bool tables_match(const Table& a, const Table& b, double rtol, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (a.columns != b.columns) return fail("column names differ");
    if (a.rows.size() != b.rows.size()) return fail("row counts differ");
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        for (std::size_t j = 0; j < a.rows[i].size(); ++j) {
            double x = a.rows[i][j], y = b.rows[i][j];
            double tol = rtol * std::max({std::abs(x), std::abs(y), 1.0});
            if (!(std::abs(x - y) <= tol))
                return fail("cell (" + std::to_string(i) + "," + std::to_string(j) +
                            ") differs: " + format_double(x) + " vs " + format_double(y));
        }
    }
    return true;
}

}  // namespace friedlander::io
