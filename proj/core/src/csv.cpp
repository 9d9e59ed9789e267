#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dbw/data.hpp"

namespace dbw {

const RawColumn* RawTable::find(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Split one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parses_as_number(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    double v;
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    return ec == std::errc() && ptr == end;
}

}  // namespace

RawTable parse_csv(const std::string& text, const std::set<std::string>& missing_markers,
                   const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(origin + ": empty file, expected a header row");

    RawTable table;
    {
        std::set<std::string> seen;
        for (auto& name : split_record(line)) {
            const std::string n = trim(name);
            if (n.empty())
                throw std::runtime_error(origin + ": empty header name at column " +
                                         std::to_string(table.columns.size()));
            if (!seen.insert(n).second)
                throw std::runtime_error(origin + ": duplicate header name '" + n + "'");
            RawColumn col;
            col.name = n;
            table.columns.push_back(std::move(col));
        }
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;  // trailing newline
        auto cells = split_record(line);
        if (cells.size() != table.columns.size())
            throw std::runtime_error(origin + ": ragged row " + std::to_string(row) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, expected " +
                                     std::to_string(table.columns.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            const bool miss = missing_markers.count(cell) > 0;
            table.columns[c].cells.push_back(cell);
            table.columns[c].missing.push_back(miss);
        }
        ++row;
    }
    table.n_rows = row;

    for (auto& col : table.columns) {
        col.numeric = true;
        bool any_value = false;
        for (std::size_t r = 0; r < col.cells.size(); ++r) {
            if (col.missing[r]) continue;
            any_value = true;
            if (!parses_as_number(col.cells[r])) {
                col.numeric = false;
                break;
            }
        }
        if (!any_value) col.numeric = false;
    }
    return table;
}

RawTable load_csv(const std::string& path, const std::set<std::string>& missing_markers) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open CSV file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str(), missing_markers, path);
}

}  // namespace dbw
