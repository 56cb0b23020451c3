#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace darboux::cli {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

ReferenceTable parse_reference_csv(std::string_view id, std::string_view text) {
    ReferenceTable t;
    t.id = std::string(id);
    std::stringstream ss{std::string(text)};
    std::string line;
    bool header = false;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = line.substr(line.find_first_not_of("# "));
            const std::string tag = "typical printed decimals:";
            if (body.rfind(tag, 0) == 0)
                t.typical_decimals = std::stoi(body.substr(tag.size()));
            else if (t.description.empty())
                t.description = body;
            continue;
        }
        auto cells = split_csv_line(line);
        if (!header) {
            t.key_name = cells.at(0);
            t.columns.assign(cells.begin() + 1, cells.end());
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size() + 1)
            throw std::runtime_error("reference table " + t.id + ": ragged row '" + line + "'");
        t.row_keys.push_back(cells[0]);
        t.cells.emplace_back(cells.begin() + 1, cells.end());
    }
    if (!header || t.row_keys.empty()) throw std::runtime_error("reference table " + t.id + " is empty");
    return t;
}

const std::vector<ReferenceTable>& reference_tables() {
    static const std::vector<ReferenceTable> tables = [] {
        std::vector<ReferenceTable> v;
        for (const auto& [id, text] : embedded_reference_csv()) v.push_back(parse_reference_csv(id, text));
        return v;
    }();
    return tables;
}

const ReferenceTable& reference_table(const std::string& id) {
    for (const auto& t : reference_tables())
        if (t.id == id) return t;
    throw std::invalid_argument("unknown table '" + id + "'");
}

int printed_decimals(const std::string& cell) {
    auto dot = cell.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(cell.size() - dot - 1);
}

int significant_decimals(const std::string& cell) {
    int d = printed_decimals(cell);
    for (auto i = cell.size(); d > 0 && cell[i - 1] == '0'; --i) --d;
    return d;
}

double default_tolerance(const ReferenceTable& t, std::size_t row) {
    int d = 0;
    for (const auto& c : t.cells[row]) d = std::max(d, significant_decimals(c));
    if (d == 0) d = t.typical_decimals;
    return 1.5 * std::pow(10.0, -d);
}

}  // namespace darboux::cli
