#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace darboux::cli {

// One appendix table as printed: row keys down the side, column labels across.
struct ReferenceTable {
    std::string id;
    std::string description;
    std::string key_name;  // "n" or "lambda"
    int typical_decimals = 0;
    std::vector<std::string> columns;
    std::vector<std::string> row_keys;
    std::vector<std::vector<std::string>> cells;  // [row][column], as printed

    std::size_t cell_count() const { return row_keys.size() * columns.size(); }
};

const std::vector<std::pair<std::string_view, std::string_view>>& embedded_reference_csv();

ReferenceTable parse_reference_csv(std::string_view id, std::string_view text);
const std::vector<ReferenceTable>& reference_tables();
const ReferenceTable& reference_table(const std::string& id);  // throws std::invalid_argument

int printed_decimals(const std::string& cell);
int significant_decimals(const std::string& cell);  // trailing zeros dropped
// 1.5 units in the last significant digit of the row. Trailing zeros are
// padding in these tables ("0.1350" next to "0.342"), so they do not count.
double default_tolerance(const ReferenceTable& t, std::size_t row);

}  // namespace darboux::cli
