#include "tables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "darboux/entropy_position.hpp"
#include "darboux/errors.hpp"
#include "darboux/model.hpp"
#include "darboux/uncertainty.hpp"

namespace darboux::cli {

namespace {

std::atomic<std::size_t> touched{0};

enum class Kind { energy, omega, entropy_grid, mom_vs_lambda, xi_grid, xi_vs_lambda };

struct TableInfo {
    Kind kind;
    bool tsallis = false;
    Space space = Space::position;
    double lambda = 0.0;  // fixed lambda for the n-indexed tables
    double alpha = 0.0;   // fixed alpha for the lambda sweeps
    double tolerance_floor = 0.0;
};

const std::map<std::string, TableInfo>& table_info() {
    static const std::map<std::string, TableInfo> info{
        {"energy", {Kind::energy}},
        {"omega", {Kind::omega}},
        {"renyi_pos_h", {Kind::entropy_grid, false, Space::position, 0.0}},
        {"renyi_pos_d", {Kind::entropy_grid, false, Space::position, 0.4}},
        {"tsallis_pos_h", {Kind::entropy_grid, true, Space::position, 0.0}},
        {"tsallis_pos_d", {Kind::entropy_grid, true, Space::position, 0.4}},
        {"renyi_mom_h", {Kind::entropy_grid, false, Space::momentum, 0.0}},
        {"renyi_mom_d", {Kind::entropy_grid, false, Space::momentum, 0.4}},
        {"tsallis_mom_h", {Kind::entropy_grid, true, Space::momentum, 0.0}},
        {"tsallis_mom_d", {Kind::entropy_grid, true, Space::momentum, 0.4}},
        {"mom_vs_lambda", {Kind::mom_vs_lambda, false, Space::momentum, 0.0, 2.0}},
        {"xi_renyi_h", {Kind::xi_grid, false, Space::position, 0.0}},
        {"xi_renyi_d", {Kind::xi_grid, false, Space::position, 0.4}},
        {"xi_tsallis_h", {Kind::xi_grid, true, Space::position, 0.0}},
        {"xi_tsallis_d", {Kind::xi_grid, true, Space::position, 0.4}},
        // 8 printed decimals, but the momentum side is quadrature-limited
        {"xi_vs_lambda_a", {Kind::xi_vs_lambda, false, Space::position, 0.0, 2.0, 1e-5}},
        {"xi_vs_lambda_b", {Kind::xi_vs_lambda, true, Space::position, 0.0, 2.0 / 3.0, 1e-5}},
    };
    return info;
}

const TableInfo& info_for(const ReferenceTable& t) {
    auto it = table_info().find(t.id);
    if (it == table_info().end()) throw std::invalid_argument("no recipe for table '" + t.id + "'");
    return it->second;
}

// The printed headers of the entropy grids are out of order; these are the
// orders that reproduce each column (the fifth is the Shannon limit).
constexpr double entropy_grid_alpha[] = {0.5, 4.0 / 7.0, 2.0 / 3.0, 0.8, 1.0, 1.25, 1.5, 1.75, 2.0};

// xi headers round conjugate orders: 1.125 = 9/8, 1.333 = 4/3, 1.75 = 7/4.
double exact_order(const std::string& label) {
    static const std::map<std::string, double> exact{
        {"1.125", 9.0 / 8.0}, {"1.333", 4.0 / 3.0}, {"1.75", 7.0 / 4.0}};
    auto it = exact.find(label);
    return it != exact.end() ? it->second : std::stod(label);
}

bool is_integer_order(double a) { return a >= 2.0 && a == std::floor(a); }

double entropy_value(const ModelParams& p, int n, double alpha, bool tsallis, Space space,
                     const QuadratureOptions& opts) {
    if (alpha == 1.0) return quadrature::shannon_numeric(p, n, space, opts);
    if (space == Space::position && is_integer_order(alpha)) {
        const int a = static_cast<int>(alpha);
        return tsallis ? entropy_position::tsallis_position(p, n, a)
                       : entropy_position::renyi_position(p, n, a);
    }
    return tsallis ? quadrature::tsallis_numeric(p, n, alpha, space, opts)
                   : quadrature::renyi_numeric(p, n, alpha, space, opts);
}

}  // namespace

std::size_t TableReport::gating_total() const {
    return std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.gating; });
}
std::size_t TableReport::gating_failures() const {
    return std::count_if(cells.begin(), cells.end(),
                         [](const CellResult& c) { return c.gating && !c.pass; });
}
std::size_t TableReport::info_total() const { return cells.size() - gating_total(); }
std::size_t TableReport::info_failures() const {
    return std::count_if(cells.begin(), cells.end(),
                         [](const CellResult& c) { return !c.gating && !c.pass; });
}
double TableReport::max_gating_diff() const {
    double m = 0.0;
    for (const auto& c : cells)
        if (c.gating && c.error.empty()) m = std::max(m, std::fabs(c.computed - c.reference));
    return m;
}

std::vector<std::string> table_ids() {
    std::vector<std::string> ids;
    for (const auto& t : reference_tables()) ids.push_back(t.id);
    return ids;
}

double column_alpha(const ReferenceTable& t, std::size_t col) {
    const auto& info = info_for(t);
    switch (info.kind) {
        case Kind::entropy_grid: return entropy_grid_alpha[col];
        case Kind::xi_grid: return exact_order(t.columns[col]);
        case Kind::mom_vs_lambda:
        case Kind::xi_vs_lambda: return info.alpha;
        default: return 0.0;
    }
}

bool column_gating(const ReferenceTable& t, std::size_t col) {
    if (info_for(t).kind != Kind::entropy_grid) return true;
    return col == 0 || col + 1 == t.columns.size();
}

double compute_cell(const ReferenceTable& t, std::size_t row, std::size_t col,
                    const QuadratureOptions& opts) {
    const auto& info = info_for(t);
    const double key = std::stod(t.row_keys[row]);
    switch (info.kind) {
        case Kind::energy: return model::energy({1.0, key}, std::stoi(t.columns[col]));
        case Kind::omega: return model::effective_frequency({1.0, key}, std::stoi(t.columns[col]));
        case Kind::entropy_grid:
            return entropy_value({1.0, info.lambda}, static_cast<int>(key), column_alpha(t, col),
                                 info.tsallis, info.space, opts);
        case Kind::mom_vs_lambda: {
            const std::string& c = t.columns[col];  // R0..R2, T0..T2
            return entropy_value({1.0, key}, c[1] - '0', info.alpha, c[0] == 'T', Space::momentum, opts);
        }
        case Kind::xi_grid: {
            ModelParams p{1.0, info.lambda};
            const int n = static_cast<int>(key);
            const double a = column_alpha(t, col);
            return info.tsallis ? uncertainty::xi_tsallis(p, n, a, opts) : uncertainty::xi_renyi(p, n, a, opts);
        }
        case Kind::xi_vs_lambda: {
            ModelParams p{1.0, key};
            const int n = std::stoi(t.columns[col]);
            return info.tsallis ? uncertainty::xi_tsallis(p, n, info.alpha, opts)
                                : uncertainty::xi_renyi(p, n, info.alpha, opts);
        }
    }
    throw std::logic_error("unhandled table kind");
}

TableReport run_table(const std::string& id, std::optional<double> tolerance, unsigned threads,
                      const QuadratureOptions& opts) {
    const ReferenceTable& t = reference_table(id);
    TableReport rep;
    rep.table = &t;
    rep.cells.resize(t.cell_count());
    for (std::size_t r = 0; r < t.row_keys.size(); ++r)
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            auto& cell = rep.cells[r * t.columns.size() + c];
            cell.row = r;
            cell.col = c;
            cell.reference = std::stod(t.cells[r][c]);
            cell.tolerance = tolerance ? *tolerance
                                       : std::max(default_tolerance(t, r), info_for(t).tolerance_floor);
            cell.gating = column_gating(t, c);
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < rep.cells.size();) {
            auto& cell = rep.cells[i];
            try {
                cell.computed = compute_cell(t, cell.row, cell.col, opts);
                cell.pass = std::fabs(cell.computed - cell.reference) <= cell.tolerance;
            } catch (const NumericError& e) {
                cell.error = "[" + e.module() + "] " + e.what();
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, rep.cells.size()));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    touched += rep.cells.size();
    return rep;
}

std::size_t cells_touched() { return touched.load(); }
void reset_cells_touched() { touched = 0; }

}  // namespace darboux::cli
