#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "darboux/entropy_position.hpp"
#include "darboux/errors.hpp"
#include "darboux/model.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/strong_nonlinear.hpp"
#include "darboux/uncertainty.hpp"
#include "tables.hpp"

namespace darboux::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(trim(s), &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != trim(s).size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw UsageError("range must be start:stop:step, got '" + text + "'");
        const double a = parse_real(parts[0]), b = parse_real(parts[1]), h = parse_real(parts[2]);
        if (!(h > 0.0) || b < a) throw UsageError("range needs step > 0 and stop >= start: '" + text + "'");
        const long count = std::lround(std::floor((b - a) / h + 1e-9));
        if (count > 1000000) throw UsageError("range too long: '" + text + "'");
        // a + k h rather than accumulation, so 0:1:0.1 ends exactly at 1
        for (long k = 0; k <= count; ++k) out.push_back(a + k * h);
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_real(p));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_real_list(text)) {
        if (v != std::floor(v) || std::fabs(v) > 1e6) throw UsageError("not an integer: " + format_number(v));
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct Flags {
    double omega = 1.0;
    std::string lambda = "0";
    std::string n = "0";
    std::string alpha = "2";
    std::string space = "position";
    int grid_points = 0;
    double half_width = 0.0;
    std::string out_path;
    std::string format = "csv";
    // profile / table
    std::string kind;
    std::string table_id;
    double tolerance = -1.0;
    unsigned threads = 0;
};

struct Parsed {
    std::vector<double> lambdas;
    std::vector<int> ns;
    std::vector<double> alphas;
    Space space = Space::position;
    GridSpec grid;
};

Parsed validate(const Flags& f, bool need_alpha) {
    Parsed p;
    if (!(f.omega > 0.0) || !std::isfinite(f.omega)) throw UsageError("--omega must be > 0");
    p.lambdas = parse_real_list(f.lambda);
    for (double l : p.lambdas)
        if (!(l >= 0.0)) throw UsageError("--lambda must be >= 0");
    p.ns = parse_int_list(f.n);
    for (int n : p.ns)
        if (n < 0) throw UsageError("--n must be >= 0");
    if (need_alpha) {
        p.alphas = parse_real_list(f.alpha);
        for (double a : p.alphas)
            if (!(a > 0.0)) throw UsageError("--alpha must be > 0");
    }
    if (f.space == "position") p.space = Space::position;
    else if (f.space == "momentum") p.space = Space::momentum;
    else throw UsageError("--space must be position or momentum");
    if (f.format != "csv") throw UsageError("--format supports csv only");
    if (f.grid_points != 0 && f.grid_points < 32) throw UsageError("--grid-points must be >= 32");
    if (f.half_width < 0.0) throw UsageError("--half-width must be >= 0");
    p.grid.points = f.grid_points;
    p.grid.half_width = f.half_width;
    return p;
}

QuadratureOptions options_for(const Parsed& p, bool both) {
    QuadratureOptions o;
    if (both || p.space == Space::position) o.x = p.grid;
    if (both || p.space == Space::momentum) o.p = p.grid;
    return o;
}

bool integer_order(double a) { return a >= 1.0 && a == std::floor(a) && a <= 64.0; }

double moment_value(const ModelParams& mp, int n, double a, const Parsed& p) {
    if (p.space == Space::position && integer_order(a))
        return entropy_position::entropic_moment(mp, n, static_cast<int>(a));
    return quadrature::entropic_moment_numeric(mp, n, a, p.space, options_for(p, false));
}

double renyi_value(const ModelParams& mp, int n, double a, const Parsed& p) {
    if (a == 1.0) return quadrature::shannon_numeric(mp, n, p.space, options_for(p, false));
    if (p.space == Space::position && integer_order(a))
        return entropy_position::renyi_position(mp, n, static_cast<int>(a));
    return quadrature::renyi_numeric(mp, n, a, p.space, options_for(p, false));
}

double tsallis_value(const ModelParams& mp, int n, double a, const Parsed& p) {
    if (a == 1.0) return quadrature::shannon_numeric(mp, n, p.space, options_for(p, false));
    if (p.space == Space::position && integer_order(a))
        return entropy_position::tsallis_position(mp, n, static_cast<int>(a));
    return quadrature::tsallis_numeric(mp, n, a, p.space, options_for(p, false));
}

using Row = std::vector<double>;

// n outer, lambda middle, alpha inner
void sweep(std::ostream& out, const Flags& f, const Parsed& p, const std::string& header,
           const std::function<Row(const ModelParams&, int, double)>& eval, bool with_alpha) {
    std::vector<std::string> lines;
    lines.push_back(header);
    const std::vector<double> none{0.0};
    for (int n : p.ns)
        for (double l : p.lambdas)
            for (double a : with_alpha ? p.alphas : none) {
                ModelParams mp(f.omega, l);
                Row vals = eval(mp, n, a);
                std::string line = std::to_string(n) + "," + format_number(l);
                if (with_alpha) line += "," + format_number(a);
                for (double v : vals) line += "," + format_number(v);
                lines.push_back(line);
            }
    for (const auto& l : lines) out << l << '\n';
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty()) return fallback;
    file.open(path, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    return file;
}

void write_profile(const Flags& f, const Parsed& p, std::ostream& out) {
    if (p.lambdas.size() != 1 || p.ns.size() != 1)
        throw UsageError("profile takes a single --lambda and --n");
    const ModelParams mp(f.omega, p.lambdas[0]);
    const int n = p.ns[0];
    std::vector<std::pair<double, double>> rows;
    std::string coord;

    auto uniform = [&](double half, const std::function<double(double)>& g) {
        const int count = p.grid.points > 0 ? p.grid.points : 801;
        for (int i = 0; i < count; ++i) {
            double x = -half + 2.0 * half * i / (count - 1);
            rows.emplace_back(x, g(x));
        }
    };
    const double W = model::effective_frequency(mp, n);
    if (f.kind == "density-position") {
        coord = "x";
        double half = p.grid.half_width > 0.0 ? p.grid.half_width
                                              : (std::sqrt(2.0 * n + 1.0) + 6.0) / std::sqrt(W);
        uniform(half, [&](double x) { return model::density_position(mp, n, x); });
    } else if (f.kind == "density-momentum") {
        coord = "p";
        auto prof = quadrature::momentum_density(mp, n);
        for (const auto& [pp, g] : prof->values())
            if (p.grid.half_width <= 0.0 || std::fabs(pp) <= p.grid.half_width) rows.emplace_back(pp, g);
    } else if (f.kind == "approx-momentum") {
        coord = "p";
        double half = p.grid.half_width > 0.0 ? p.grid.half_width
                                              : (std::sqrt(2.0 * n + 1.0) + 6.0) * std::sqrt(W);
        if (n <= 3) {
            uniform(half, [&](double k) { return std::norm(strong_nonlinear::approx_momentum_closed(mp, n, k)); });
        } else {
            strong_nonlinear::GSeriesEngine eng(mp, n);
            uniform(half, [&](double k) { return std::norm(eng(k)); });
        }
    } else {
        throw UsageError("--kind must be density-position, density-momentum or approx-momentum");
    }

    // even-symmetry check on mirrored rows
    double peak = 0.0;
    for (const auto& r : rows) peak = std::max(peak, std::fabs(r.second));
    for (std::size_t i = 0, j = rows.size(); i < rows.size() / 2; ++i) {
        --j;
        if (std::fabs(rows[i].first + rows[j].first) > 1e-9 * std::max(1.0, std::fabs(rows[i].first)) ||
            std::fabs(rows[i].second - rows[j].second) > 1e-9 * peak)
            throw NumericError("cli", "profile is not even-symmetric at " + format_number(rows[i].first));
    }

    std::ofstream file;
    std::ostream& os = open_output(f.out_path, file, out);
    os << coord << ",density\n";
    for (const auto& [x, v] : rows) os << format_number(x) << ',' << format_number(v) << '\n';
    if (!os) throw std::ios_base::failure("write failed for '" + f.out_path + "'");
}

int run_tables(const Flags& f, std::ostream& out) {
    std::vector<std::string> ids;
    if (f.table_id == "all") ids = table_ids();
    else ids.push_back(f.table_id);
    for (const auto& id : ids) reference_table(id);  // validates before any work

    std::ofstream file;
    std::ostream& csv = open_output(f.out_path, file, out);
    bool all_ok = true;
    std::size_t total = 0;
    for (const auto& id : ids) {
        std::optional<double> tol;
        if (f.tolerance > 0.0) tol = f.tolerance;
        const auto rep = run_table(id, tol, f.threads);
        const auto& t = *rep.table;
        total += rep.cells.size();
        out << "# table " << id << ": " << t.description << "\n";
        out << "# " << rep.cells.size() << " cells, tolerance "
            << (tol ? format_number(*tol) : std::string("1.5 units in the last printed digit")) << "\n";
        out << "status," << t.key_name;
        for (const auto& c : t.columns) out << ',' << c;
        out << '\n';
        for (std::size_t r = 0; r < t.row_keys.size(); ++r) {
            out << "status," << t.row_keys[r];
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                const auto& cell = rep.cells[r * t.columns.size() + c];
                out << ',' << (cell.gating ? "" : "info-") << (cell.pass ? "ok" : "FAIL");
            }
            out << '\n';
        }
        for (const auto& cell : rep.cells) {
            if (cell.pass) continue;
            out << (cell.gating ? "mismatch " : "info mismatch ") << id << ' ' << t.key_name << '='
                << t.row_keys[cell.row] << " column=" << t.columns[cell.col] << ": reference "
                << t.cells[cell.row][cell.col];
            if (cell.error.empty())
                out << " computed " << format_number(cell.computed) << " |diff| "
                    << format_number(std::fabs(cell.computed - cell.reference)) << " tolerance "
                    << format_number(cell.tolerance) << '\n';
            else
                out << " error " << cell.error << '\n';
        }
        out << "summary " << id << ": gating " << rep.gating_total() - rep.gating_failures() << '/'
            << rep.gating_total() << " pass, informational " << rep.info_total() - rep.info_failures()
            << '/' << rep.info_total() << " pass\n";
        csv << "# recomputed " << id << "\n" << t.key_name;
        for (const auto& c : t.columns) csv << ',' << c;
        csv << '\n';
        for (std::size_t r = 0; r < t.row_keys.size(); ++r) {
            csv << t.row_keys[r];
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                const auto& cell = rep.cells[r * t.columns.size() + c];
                csv << ',' << (cell.error.empty() ? format_number(cell.computed) : std::string("nan"));
            }
            csv << '\n';
        }
        all_ok = all_ok && rep.ok();
    }
    out << "# cells compared: " << total << "\n";
    return all_ok ? ok : golden_mismatch;
}

void add_common(CLI::App* c, Flags& f, bool alpha, bool space) {
    c->add_option("--omega", f.omega, "oscillator frequency (default 1)");
    c->add_option("--lambda", f.lambda, "nonlinearity: value, list a,b,c or range start:stop:step");
    c->add_option("--n", f.n, "quantum number: value, list or range");
    if (alpha) c->add_option("--alpha", f.alpha, "entropy order: value or list");
    if (space) c->add_option("--space", f.space, "position or momentum");
    c->add_option("--grid-points", f.grid_points, "minimum quadrature nodes (0 = automatic)");
    c->add_option("--half-width", f.half_width, "grid half width (0 = automatic)");
    c->add_option("--out", f.out_path, "write output to a file instead of stdout");
    c->add_option("--format", f.format, "output format (csv)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Darboux III oscillator: spectrum, entropies, uncertainty and large-lambda tools"};
    app.require_subcommand(1);
    Flags f;

    struct Cmd {
        const char* name;
        const char* help;
        bool alpha;
        bool space;
    };
    const Cmd cmds[] = {
        {"energy", "energy levels E_n", false, false},
        {"omega", "effective frequency Omega_n", false, false},
        {"moment", "entropic moment W = int rho^alpha", true, true},
        {"renyi", "Renyi entropy (alpha = 1 gives Shannon)", true, true},
        {"tsallis", "Tsallis entropy (alpha = 1 gives Shannon)", true, true},
        {"disequilibrium", "disequilibrium, the alpha = 2 moment", false, true},
        {"shannon", "Shannon entropy", false, true},
        {"xi-renyi", "Renyi uncertainty slack", true, false},
        {"xi-tsallis", "Tsallis uncertainty slack", true, false},
        {"weight-f", "harmonic weight f and 1 - f", false, false},
        {"threshold", "lambda at which the central maximum splits (n = 0, 2)", false, false},
        {"critical-points", "stationary points of the position density", false, false},
        {"profile", "density curve as two-column CSV", false, false},
    };
    std::map<std::string, CLI::App*> sub;
    for (const auto& c : cmds) {
        auto* s = app.add_subcommand(c.name, c.help);
        add_common(s, f, c.alpha, c.space);
        sub[c.name] = s;
    }
    sub["profile"]->add_option("--kind", f.kind, "density-position, density-momentum or approx-momentum")
        ->required();
    auto* table = app.add_subcommand("table", "recompute a reference table and compare");
    table->add_option("id", f.table_id, "table id or 'all'")->required();
    table->add_option("--tolerance", f.tolerance, "absolute tolerance override");
    table->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    table->add_option("--out", f.out_path, "write the recomputed tables to a file");

    std::vector<std::string> argv_store{"darboux"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        err << "usage error: " << (msg.empty() ? "invalid arguments" : msg) << '\n';
        return usage;
    }

    try {
        if (table->parsed()) return run_tables(f, out);
        std::string name;
        for (const auto& [k, s] : sub)
            if (s->parsed()) name = k;

        const bool alpha = name == "moment" || name == "renyi" || name == "tsallis" || name == "xi-renyi" ||
                           name == "xi-tsallis";
        const Parsed p = validate(f, alpha);
        std::ostringstream os;  // nothing reaches the destination unless the command succeeds

        using R = Row;
        const std::string nla = "n,lambda,alpha,";
        if (name == "energy") {
            sweep(os, f, p, "n,lambda,energy", [](const ModelParams& m, int n, double) { return R{model::energy(m, n)}; }, false);
        } else if (name == "omega") {
            sweep(os, f, p, "n,lambda,omega",
                  [](const ModelParams& m, int n, double) { return R{model::effective_frequency(m, n)}; }, false);
        } else if (name == "moment") {
            sweep(os, f, p, nla + "moment", [&](const ModelParams& m, int n, double a) { return R{moment_value(m, n, a, p)}; }, true);
        } else if (name == "renyi") {
            sweep(os, f, p, nla + "renyi", [&](const ModelParams& m, int n, double a) { return R{renyi_value(m, n, a, p)}; }, true);
        } else if (name == "tsallis") {
            sweep(os, f, p, nla + "tsallis", [&](const ModelParams& m, int n, double a) { return R{tsallis_value(m, n, a, p)}; }, true);
        } else if (name == "disequilibrium") {
            sweep(os, f, p, "n,lambda,disequilibrium", [&](const ModelParams& m, int n, double) {
                if (p.space == Space::position) return R{entropy_position::disequilibrium(m, n)};
                return R{quadrature::entropic_moment_numeric(m, n, 2.0, p.space, options_for(p, false))};
            }, false);
        } else if (name == "shannon") {
            sweep(os, f, p, "n,lambda,shannon", [&](const ModelParams& m, int n, double) {
                return R{quadrature::shannon_numeric(m, n, p.space, options_for(p, false))};
            }, false);
        } else if (name == "xi-renyi" || name == "xi-tsallis") {
            const bool renyi = name == "xi-renyi";
            sweep(os, f, p, nla + "beta,xi", [&](const ModelParams& m, int n, double a) {
                auto r = renyi ? uncertainty::xi_renyi_detail(m, n, a, options_for(p, true))
                               : uncertainty::xi_tsallis_detail(m, n, a, options_for(p, true));
                return R{r.beta, r.xi};
            }, true);
        } else if (name == "weight-f") {
            sweep(os, f, p, "n,lambda,f,complement", [](const ModelParams& m, int n, double) {
                auto d = strong_nonlinear::harmonic_weight(m, n);
                return R{d.f, d.complement};
            }, false);
        } else if (name == "threshold") {
            os << "n,omega,closed_form,bisection\n";
            for (int n : p.ns) {
                auto t = strong_nonlinear::bifurcation_threshold_both({f.omega, 0.0}, n);
                os << n << ',' << format_number(f.omega) << ',' << format_number(t.closed_form) << ','
                   << format_number(t.bisection) << '\n';
            }
        } else if (name == "critical-points") {
            os << "n,lambda,x,kind\n";
            for (int n : p.ns)
                for (double l : p.lambdas) {
                    ModelParams m(f.omega, l);
                    auto pts = (n == 0 || n == 2) ? strong_nonlinear::density_critical_points(m, n)
                                                  : strong_nonlinear::density_critical_points_numeric(m, n);
                    for (const auto& c : pts)
                        os << n << ',' << format_number(l) << ',' << format_number(c.x) << ','
                           << strong_nonlinear::kind_name(c.kind) << '\n';
                }
        } else if (name == "profile") {
            write_profile(f, p, out);
            return ok;
        }
        std::ofstream file;
        std::ostream& dest = open_output(f.out_path, file, out);
        dest << os.str();
        if (!dest) throw std::ios_base::failure("write failed for '" + f.out_path + "'");
        return ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const NumericError& e) {
        std::string msg = e.what();
        const std::string prefix = e.module() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        err << "error [" << e.module() << "]: " << msg << '\n';
        return numeric_failure;
    } catch (const std::ios_base::failure& e) {
        err << "error [io]: " << e.what() << '\n';
        return numeric_failure;
    } catch (const std::exception& e) {
        err << "error [internal]: " << e.what() << '\n';
        return numeric_failure;
    }
}

}  // namespace darboux::cli
