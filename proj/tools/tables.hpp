#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "darboux/quadrature.hpp"
#include "reference.hpp"

namespace darboux::cli {

struct CellResult {
    std::size_t row = 0;
    std::size_t col = 0;
    double reference = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool gating = true;  // informational cells never fail the table
    bool pass = false;
    std::string error;   // "[module] message" when the computation threw
};

struct TableReport {
    const ReferenceTable* table = nullptr;
    std::vector<CellResult> cells;  // row-major

    std::size_t gating_total() const;
    std::size_t gating_failures() const;
    std::size_t info_total() const;
    std::size_t info_failures() const;
    double max_gating_diff() const;
    bool ok() const { return gating_failures() == 0; }
};

std::vector<std::string> table_ids();

// Entropy order behind a column of the position/momentum/xi tables.
double column_alpha(const ReferenceTable& t, std::size_t col);
bool column_gating(const ReferenceTable& t, std::size_t col);
double compute_cell(const ReferenceTable& t, std::size_t row, std::size_t col,
                    const QuadratureOptions& opts = {});

// Cells are computed on `threads` workers (0 = hardware concurrency); results
// land in fixed row-major order regardless.
TableReport run_table(const std::string& id, std::optional<double> tolerance = std::nullopt,
                      unsigned threads = 0, const QuadratureOptions& opts = {});

// Number of reference cells compared since the last reset.
std::size_t cells_touched();
void reset_cells_touched();

}  // namespace darboux::cli
