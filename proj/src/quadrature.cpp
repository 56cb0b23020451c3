#include "darboux/quadrature.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "darboux/errors.hpp"
#include "darboux/simd/kernels.hpp"
#include "darboux/specfun.hpp"

namespace darboux {

void GridSpec::validate() const {
    if (!(half_width >= 0.0) || !std::isfinite(half_width))
        throw std::domain_error("grid half-width must be nonnegative and finite");
    if (points != 0 && points < 32) throw std::domain_error("grid needs at least 32 points");
}

std::vector<std::pair<double, double>> MomentumProfile::values() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(2 * p.size());
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] > 0.0) out.emplace_back(-p[i], gamma[i]);
    for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p[i], gamma[i]);
    return out;
}

double MomentumProfile::moment(double alpha) const {
    std::vector<double> f(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i)
        f[i] = gamma[i] > 0.0 ? std::exp(alpha * std::log(gamma[i])) : 0.0;
    return 2.0 * simd::active_kernels().dot(weight.data(), f.data(), f.size());
}

double MomentumProfile::shannon() const {
    std::vector<double> f(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i)
        f[i] = gamma[i] > 0.0 ? -gamma[i] * std::log(gamma[i]) : 0.0;
    return 2.0 * simd::active_kernels().dot(weight.data(), f.data(), f.size());
}

double MomentumProfile::variance() const {
    std::vector<double> f(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) f[i] = p[i] * p[i] * gamma[i];
    return 2.0 * simd::active_kernels().dot(weight.data(), f.data(), f.size());
}

namespace quadrature {

namespace {

constexpr double log_tail_drop = 43.0;  // about 1e-18 below the peak, plus margin

double tail_extent(const std::function<double(double)>& logf, double x0, double step,
                   double drop) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double x = 0.0; x < x0; x += step) peak = std::max(peak, logf(x));
    double x = x0, prev = logf(x0);
    peak = std::max(peak, prev);
    for (int it = 0; it < 200000; ++it) {
        x += step;
        double v = logf(x);
        peak = std::max(peak, v);
        if (v < peak - drop && v <= prev) return x;
        prev = v;
    }
    throw NumericError("quadrature", "integrand envelope does not decay");
}

// Breaks must be sorted; graded[i] marks a breakpoint where the integrand has
// an algebraic endpoint singularity.
std::vector<Panel> split_panels(const std::vector<double>& breaks, const std::vector<bool>& graded,
                                const std::function<double(double)>& allowed) {
    std::vector<Panel> out;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double a = breaks[k], b = breaks[k + 1];
        if (!(b > a)) continue;
        std::size_t first = out.size();
        while (a < b) {
            double h = allowed(a);
            if (a + 1.25 * h >= b) {
                if (b - a > h) {
                    double mid = 0.5 * (a + b);
                    out.push_back({a, mid});
                    out.push_back({mid, b});
                } else {
                    out.push_back({a, b});
                }
                break;
            }
            out.push_back({a, a + h});
            a += h;
        }
        out[first].grade_left = graded[k];
        out.back().grade_right = graded[k + 1];
    }
    return out;
}

// Bisect the widest panels until the node count reaches the floor.
void refine_to(std::vector<Panel>& panels, std::size_t min_nodes, int order) {
    while (panels.size() * order < min_nodes) {
        std::vector<Panel> next;
        next.reserve(2 * panels.size());
        for (const auto& pn : panels) {
            double mid = 0.5 * (pn.a + pn.b);
            next.push_back({pn.a, mid, pn.grade_left, false});
            next.push_back({mid, pn.b, false, pn.grade_right});
        }
        panels.swap(next);
    }
}

double log_abs_psi(const StateSpectrum& s, double lambda, double x) {
    auto a = model::log_wavefunction(s, lambda, x);
    return a.sign == 0 ? -std::numeric_limits<double>::infinity() : a.log_abs;
}

std::vector<double> positive_scaled_zeros(int n, double sqrt_w) {
    std::vector<double> z;
    for (double h : hermite_zeros(n))
        if (h > 1e-12) z.push_back(h / sqrt_w);
    return z;
}

// Largest p*h per 24-node panel; GL error for exp(i 36 t) on a panel is ~1e-15.
constexpr double max_panel_phase = 36.0;

// Half-line rule for x in [0, L] used by the Fourier sums.
Rule fourier_half_rule(const StateSpectrum& s, double lambda, double p_max, const GridSpec& grid,
                       double* x_extent) {
    const double sw = std::sqrt(s.effective_frequency);
    auto zeros = positive_scaled_zeros(s.n, sw);
    double L = grid.half_width;
    if (L <= 0.0) {
        auto logf = [&](double x) { return log_abs_psi(s, lambda, x); };
        L = tail_extent(logf, zeros.empty() ? 0.0 : zeros.back(), 0.25 / sw, log_tail_drop);
    }
    std::vector<double> breaks{0.0};
    for (double z : zeros)
        if (z < L) breaks.push_back(z);
    breaks.push_back(L);
    std::vector<bool> graded(breaks.size(), false);
    const double h_phase = p_max > 0.0 ? max_panel_phase / p_max : INFINITY;
    auto allowed = [&](double a) {
        double h = std::min(1.0 / sw, h_phase);
        if (lambda > 0.0) h = std::min(h, std::max(1.0 / std::sqrt(lambda), 0.5 * a));
        return h;
    };
    auto panels = split_panels(breaks, graded, allowed);
    if (grid.points > 0) refine_to(panels, (grid.points + 1) / 2, panel_order);
    if (x_extent) *x_extent = L;
    return panel_rule(panels);
}

}  // namespace

Rule gauss_legendre(int order) {
    if (order < 1) throw std::domain_error("gauss_legendre: order must be positive");
    Rule r;
    r.x.resize(order);
    r.w.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = order * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 3e-16) break;
        }
        r.x[i] = -z;
        r.x[order - 1 - i] = z;
        r.w[i] = r.w[order - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    if (order % 2 == 1) r.x[m - 1] = 0.0;
    return r;
}

Rule gauss_hermite(int n) {
    if (n < 0) throw std::domain_error("gauss_hermite: negative order");
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    if (n == 0) return r;
    constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    std::vector<double> desc(n);
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * desc[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * desc[1];
        else
            z = 2.0 * z - desc[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) {
                // one more step at the converged point for the weight
                p1 = pim4;
                p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
                         std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
                }
                pp = std::sqrt(2.0 * n) * p2;
                break;
            }
        }
        desc[i] = z;
        r.x[n - 1 - i] = z;
        r.x[i] = -z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) r.x[m - 1] = 0.0;
    return r;
}

std::vector<double> hermite_zeros(int n) { return gauss_hermite(n).x; }

Rule panel_rule(const std::vector<Panel>& panels, int order) {
    const Rule gl = gauss_legendre(order);
    Rule r;
    r.x.reserve(panels.size() * order);
    r.w.reserve(panels.size() * order);
    for (const auto& pn : panels) {
        const double len = pn.b - pn.a;
        for (int i = 0; i < order; ++i) {
            double t = 0.5 * (gl.x[i] + 1.0), phi = t, dphi = 1.0;
            if (pn.grade_left && pn.grade_right) {
                phi = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
                dphi = 30.0 * t * t * (1.0 - t) * (1.0 - t);
            } else if (pn.grade_left) {
                phi = t * t * t;
                dphi = 3.0 * t * t;
            } else if (pn.grade_right) {
                double u = 1.0 - t;
                phi = 1.0 - u * u * u;
                dphi = 3.0 * u * u;
            }
            r.x.push_back(pn.a + len * phi);
            r.w.push_back(0.5 * len * gl.w[i] * dphi);
        }
    }
    return r;
}

GridSpec default_grid() { return {12.0, 384, QuadratureRule::gauss_legendre_panels}; }

double integrate(const std::function<double(double)>& f, const GridSpec& grid_in) {
    grid_in.validate();
    GridSpec grid = grid_in;
    const GridSpec dflt = default_grid();
    if (grid.half_width == 0.0) grid.half_width = dflt.half_width;
    if (grid.points == 0) grid.points = dflt.points;

    Rule r;
    std::vector<double> extra;  // per-node weight factor (Gauss-Hermite)
    switch (grid.rule) {
        case QuadratureRule::gauss_legendre_panels: {
            constexpr int order = 16;
            const int npan = (grid.points + order - 1) / order;
            const double L = grid.half_width, h = 2.0 * L / npan;
            std::vector<Panel> panels;
            for (int k = 0; k < npan; ++k) panels.push_back({-L + k * h, -L + (k + 1) * h});
            r = panel_rule(panels, order);
            break;
        }
        case QuadratureRule::gauss_hermite: {
            r = gauss_hermite(grid.points);
            for (std::size_t i = 0; i < r.size(); ++i) r.w[i] *= std::exp(r.x[i] * r.x[i]);
            break;
        }
        case QuadratureRule::uniform_simpson: {
            int N = grid.points % 2 == 1 ? grid.points : grid.points + 1;
            const double L = grid.half_width, h = 2.0 * L / (N - 1);
            for (int i = 0; i < N; ++i) {
                r.x.push_back(-L + i * h);
                double c = (i == 0 || i == N - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                r.w.push_back(c * h / 3.0);
            }
            break;
        }
    }
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        v[i] = f(r.x[i]);
        if (!std::isfinite(v[i]))
            throw NumericError("quadrature", "non-finite integrand sample at x = " + std::to_string(r.x[i]));
    }
    return simd::active_kernels().dot(r.w.data(), v.data(), v.size());
}

namespace {

Rule position_rule_impl(const ModelParams& params, int n, double alpha, const GridSpec& grid,
                        bool grade) {
    params.validate();
    grid.validate();
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    const auto s = model::spectrum(params, n);
    const double sw = std::sqrt(s.effective_frequency);
    const double lambda = params.lambda;
    auto zeros = positive_scaled_zeros(n, sw);
    double L = grid.half_width;
    if (L <= 0.0) {
        auto logf = [&](double x) { return 2.0 * alpha * log_abs_psi(s, lambda, x); };
        L = tail_extent(logf, zeros.empty() ? 0.0 : zeros.back(), 0.25 / sw, log_tail_drop);
    }
    std::vector<double> breaks{0.0};
    std::vector<bool> graded{grade && n % 2 == 1};
    for (double z : zeros)
        if (z < L) {
            breaks.push_back(z);
            graded.push_back(grade);
        }
    breaks.push_back(L);
    graded.push_back(false);
    auto allowed = [&](double a) {
        double h = 1.0 / sw;
        if (lambda > 0.0) h = std::min(h, std::max(1.0 / std::sqrt(lambda), 0.5 * a));
        return h;
    };
    auto panels = split_panels(breaks, graded, allowed);
    if (grid.points > 0) refine_to(panels, (grid.points + 1) / 2, panel_order);
    return panel_rule(panels);
}

}  // namespace

Rule position_half_rule(const ModelParams& params, int n, double alpha, const GridSpec& grid) {
    // |psi|^(2 alpha) is smooth across a node only for even integer 2 alpha
    const double two_a = 2.0 * alpha;
    const bool grade = two_a != std::floor(two_a) || static_cast<long>(two_a) % 2 == 1;
    return position_rule_impl(params, n, alpha, grid, grade);
}

double entropic_moment_numeric(const ModelParams& params, int n, double alpha, Space space,
                               const QuadratureOptions& opts) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be positive");
    if (space == Space::momentum) return momentum_density(params, n, opts.x, opts.p)->moment(alpha);
    const auto s = model::spectrum(params, n);
    const Rule r = position_half_rule(params, n, alpha, opts.x);
    std::vector<double> f(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        double la = log_abs_psi(s, params.lambda, r.x[i]);
        f[i] = std::isfinite(la) ? std::exp(2.0 * alpha * la) : 0.0;
    }
    return 2.0 * simd::active_kernels().dot(r.w.data(), f.data(), f.size());
}

double renyi_numeric(const ModelParams& params, int n, double alpha, Space space,
                     const QuadratureOptions& opts) {
    if (alpha == 1.0) throw std::domain_error("Renyi entropy at alpha = 1 is the Shannon entropy");
    return std::log(entropic_moment_numeric(params, n, alpha, space, opts)) / (1.0 - alpha);
}

double tsallis_numeric(const ModelParams& params, int n, double alpha, Space space,
                       const QuadratureOptions& opts) {
    if (alpha == 1.0) throw std::domain_error("Tsallis entropy at alpha = 1 is the Shannon entropy");
    return (1.0 - entropic_moment_numeric(params, n, alpha, space, opts)) / (alpha - 1.0);
}

double shannon_numeric(const ModelParams& params, int n, Space space, const QuadratureOptions& opts) {
    if (space == Space::momentum) return momentum_density(params, n, opts.x, opts.p)->shannon();
    const auto s = model::spectrum(params, n);
    const Rule r = position_rule_impl(params, n, 1.0, opts.x, true);  // rho ln rho at nodes
    std::vector<double> f(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        double la = log_abs_psi(s, params.lambda, r.x[i]);
        // rho ln rho with 0 ln 0 = 0
        f[i] = std::isfinite(la) ? -std::exp(2.0 * la) * 2.0 * la : 0.0;
    }
    return 2.0 * simd::active_kernels().dot(r.w.data(), f.data(), f.size());
}

namespace {

const simd::KernelTable& kernels_for(double max_phase) {
    return max_phase < simd::max_vector_phase ? simd::active_kernels() : simd::scalar_kernels();
}

struct FourierHalf {
    Rule rule;
    std::vector<double> wf;  // w_i psi(x_i)
    bool odd = false;
    double x_max = 0.0;

    void amplitudes(const std::vector<double>& p, std::vector<double>& out) const {
        out.resize(p.size());
        if (p.empty()) return;
        double pm = 0.0;
        for (double v : p) pm = std::max(pm, std::fabs(v));
        const auto& k = kernels_for(pm * x_max);
        (odd ? k.sin_sums : k.cos_sums)(rule.x.data(), wf.data(), wf.size(), p.data(), p.size(),
                                         out.data());
        const double c = std::sqrt(2.0 / std::numbers::pi);
        for (double& v : out) v *= c;
    }

    double amplitude(double p) const {
        std::vector<double> in{p}, out;
        amplitudes(in, out);
        return out[0];
    }
};

FourierHalf make_fourier_half(const StateSpectrum& s, double lambda, double p_max, const GridSpec& grid) {
    FourierHalf fh;
    fh.rule = fourier_half_rule(s, lambda, p_max, grid, &fh.x_max);
    fh.odd = s.n % 2 == 1;
    fh.wf.resize(fh.rule.size());
    for (std::size_t i = 0; i < fh.rule.size(); ++i)
        fh.wf[i] = fh.rule.w[i] * model::wavefunction(s, lambda, fh.rule.x[i]);
    return fh;
}

std::vector<Panel> p_panels(const std::vector<double>& zeros, double p_max, bool odd, double h,
                            const GridSpec& grid) {
    std::vector<double> breaks{0.0};
    std::vector<bool> graded{odd};
    for (double z : zeros) {
        breaks.push_back(z);
        graded.push_back(true);
    }
    breaks.push_back(p_max);
    graded.push_back(false);
    auto panels = split_panels(breaks, graded, [h](double) { return h; });
    if (grid.points > 0) refine_to(panels, (grid.points + 1) / 2, panel_order);
    return panels;
}

}  // namespace

FourierValue fourier_transform(const ModelParams& params, int n, const GridSpec& grid_x, double p) {
    params.validate();
    grid_x.validate();
    const auto s = model::spectrum(params, n);
    FourierValue out;
    Rule half;
    double L = 0.0;
    if (grid_x.points == 0) {
        half = fourier_half_rule(s, params.lambda, std::fabs(p), grid_x, &L);
    } else {
        L = grid_x.half_width;
        if (L <= 0.0) fourier_half_rule(s, params.lambda, 0.0, {}, &L);
        const int npan = std::max(1, (grid_x.points / 2 + panel_order - 1) / panel_order);
        std::vector<Panel> panels;
        for (int k = 0; k < npan; ++k) panels.push_back({L * k / npan, L * (k + 1) / npan});
        half = panel_rule(panels);
    }
    out.under_resolved = std::fabs(p) * L / static_cast<double>(2 * half.size()) > 0.5;

    // mirror onto [-L, L]
    std::vector<double> x, wf;
    x.reserve(2 * half.size());
    wf.reserve(2 * half.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
            double xi = sgn * half.x[i];
            double v = half.w[i] * model::wavefunction(s, params.lambda, xi);
            x.push_back(xi);
            wf.push_back(v);
            mass += std::fabs(v);
        }
    }
    const auto& k = kernels_for(std::fabs(p) * L);
    double re = 0.0, im = 0.0;
    k.cos_sums(x.data(), wf.data(), x.size(), &p, 1, &re);
    k.sin_sums(x.data(), wf.data(), x.size(), &p, 1, &im);
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    re *= c;
    im *= -c;
    const double forbidden = (n % 2 == 0) ? std::fabs(im) : std::fabs(re);
    if (forbidden > 1e-10 * std::max(c * mass, 1e-300))
        throw NumericError("quadrature", "Fourier transform violates parity; grid too coarse");
    out.value = (n % 2 == 0) ? std::complex<double>(re, 0.0) : std::complex<double>(0.0, im);
    return out;
}

MomentumProfile build_momentum_profile(const ModelParams& params, int n, const GridSpec& grid_x,
                                       const GridSpec& grid_p) {
    params.validate();
    grid_x.validate();
    grid_p.validate();
    const auto s = model::spectrum(params, n);
    const double W = s.effective_frequency;
    const bool odd = n % 2 == 1;

    double p_max = grid_p.half_width;
    const bool auto_p = p_max <= 0.0;
    if (auto_p)
        p_max = std::max(std::sqrt(W) * (std::sqrt(2.0 * n + 1.0) + 6.5), 21.0 * std::sqrt(params.lambda));

    FourierHalf fh;
    std::vector<double> zeros, scan_a;
    std::vector<Panel> scan_panels;
    Rule scan_rule;
    for (int round = 0;; ++round) {
        fh = make_fourier_half(s, params.lambda, p_max, grid_x);
        const double h_p = max_panel_phase / fh.x_max;

        // scan for sign changes of a(p)
        scan_panels = p_panels({}, p_max, odd, h_p, {});
        scan_rule = panel_rule(scan_panels);
        fh.amplitudes(scan_rule.x, scan_a);
        const auto& a = scan_a;
        double peak = 0.0;
        for (double v : a) peak = std::max(peak, std::fabs(v));
        const double noise = 1e-12 * peak;

        double tail = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (scan_rule.x[i] > 0.9 * p_max) tail = std::max(tail, std::fabs(a[i]));
        if (auto_p && round < 8 && tail * tail > 1e-17 * peak * peak) {
            p_max *= 1.4;
            continue;
        }

        zeros.clear();
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            if (std::fabs(a[i]) < noise || std::fabs(a[i + 1]) < noise) continue;
            if ((a[i] > 0) == (a[i + 1] > 0)) continue;
            auto f = [&](double p) { return fh.amplitude(p); };
            boost::uintmax_t iters = 100;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            auto br = boost::math::tools::toms748_solve(f, scan_rule.x[i], scan_rule.x[i + 1], a[i],
                                                        a[i + 1], tol, iters);
            double z = 0.5 * (br.first + br.second);
            if (zeros.empty() || z > zeros.back() + 1e-12) zeros.push_back(z);
        }
        break;
    }

    // Final rule: scan panels, with those holding a zero split there and graded.
    // Untouched panels keep their scan amplitudes.
    std::vector<Panel> panels;
    std::vector<int> source;  // scan panel index, or -1 if new nodes
    for (std::size_t k = 0, zi = 0; k < scan_panels.size(); ++k) {
        const Panel& pn = scan_panels[k];
        std::vector<double> inner;
        for (; zi < zeros.size() && zeros[zi] < pn.b; ++zi)
            if (zeros[zi] > pn.a) inner.push_back(zeros[zi]);
        if (inner.empty()) {
            panels.push_back(pn);
            source.push_back(static_cast<int>(k));
            continue;
        }
        double left = pn.a;
        bool graded = pn.grade_left;
        for (double z : inner) {
            panels.push_back({left, z, graded, true});
            source.push_back(-1);
            left = z;
            graded = true;
        }
        panels.push_back({left, pn.b, true, pn.grade_right});
        source.push_back(-1);
    }
    // The phase bound alone leaves Gaussian tails under-resolved: split panels
    // across which ln gamma falls by more than max_log_drop.
    {
        constexpr double max_log_drop = 12.0;
        double peak = 0.0;
        for (double v : scan_a) peak = std::max(peak, std::fabs(v));
        std::vector<Panel> cut;
        std::vector<int> cut_src;
        for (std::size_t k = 0; k < panels.size(); ++k) {
            const Panel& pn = panels[k];
            int pieces = 1;
            if (source[k] >= 0) {
                // total variation of ln gamma, floored where gamma is negligible
                double drop = 0.0;
                const double floor = 1e-10 * peak;
                for (int i = 0; i + 1 < panel_order; ++i) {
                    const double u = std::max(std::fabs(scan_a[source[k] * panel_order + i]), floor);
                    const double v = std::max(std::fabs(scan_a[source[k] * panel_order + i + 1]), floor);
                    drop += 2.0 * std::fabs(std::log(v / u));
                }
                pieces = std::clamp(static_cast<int>(std::ceil(drop / max_log_drop)), 1, 16);
            }
            if (pieces == 1) {
                cut.push_back(pn);
                cut_src.push_back(source[k]);
                continue;
            }
            const double w = (pn.b - pn.a) / pieces;
            for (int j = 0; j < pieces; ++j) {
                cut.push_back({pn.a + j * w, j + 1 == pieces ? pn.b : pn.a + (j + 1) * w,
                               j == 0 && pn.grade_left, j + 1 == pieces && pn.grade_right});
                cut_src.push_back(-1);
            }
        }
        panels.swap(cut);
        source.swap(cut_src);
    }
    // Graded maps raise the polynomial degree of smooth integrands; keep graded
    // pieces short and cover the rest with plain panels.
    {
        const double g = 0.25 * max_panel_phase / fh.x_max;
        std::vector<Panel> cut;
        std::vector<int> cut_src;
        for (std::size_t k = 0; k < panels.size(); ++k) {
            Panel pn = panels[k];
            if (!(pn.grade_left || pn.grade_right)) {
                cut.push_back(pn);
                cut_src.push_back(source[k]);
                continue;
            }
            const double ge = std::min(g, 0.25 * (pn.b - pn.a));
            double a = pn.a, b = pn.b;
            if (pn.grade_left) {
                cut.push_back({a, a + ge, true, false});
                cut_src.push_back(-1);
                a += ge;
            }
            if (pn.grade_right) b -= ge;
            cut.push_back({a, b, false, false});
            cut_src.push_back(-1);
            if (pn.grade_right) {
                cut.push_back({b, pn.b, false, true});
                cut_src.push_back(-1);
            }
        }
        panels.swap(cut);
        source.swap(cut_src);
    }
    if (grid_p.points > 0) {
        refine_to(panels, (grid_p.points + 1) / 2, panel_order);
        source.assign(panels.size(), -1);
    }
    auto rule = panel_rule(panels);
    std::vector<double> amp(rule.size());
    {
        std::vector<double> fresh_p, fresh_a;
        for (std::size_t k = 0; k < panels.size(); ++k)
            if (source[k] < 0)
                fresh_p.insert(fresh_p.end(), rule.x.begin() + k * panel_order,
                               rule.x.begin() + (k + 1) * panel_order);
        fh.amplitudes(fresh_p, fresh_a);
        std::size_t f = 0;
        for (std::size_t k = 0; k < panels.size(); ++k) {
            for (int i = 0; i < panel_order; ++i)
                amp[k * panel_order + i] =
                    source[k] < 0 ? fresh_a[f++] : scan_a[source[k] * panel_order + i];
        }
    }

    MomentumProfile prof;
    prof.params = params;
    prof.n = n;
    prof.grid_x = grid_x;
    prof.grid_p = grid_p;
    prof.p = rule.x;
    prof.weight = rule.w;
    prof.amplitude = std::move(amp);
    prof.gamma.resize(prof.p.size());
    for (std::size_t i = 0; i < prof.p.size(); ++i) prof.gamma[i] = prof.amplitude[i] * prof.amplitude[i];
    prof.zeros = zeros;
    prof.p_max = p_max;
    prof.x_max = fh.x_max;
    prof.x_nodes = fh.rule.size();
    return prof;
}

namespace {

using ProfileKey = std::tuple<double, double, int, double, int, double, int>;
std::mutex profile_mutex;
bool profile_cache_on = true;
std::map<ProfileKey, std::shared_ptr<const MomentumProfile>> profile_cache;

}  // namespace

std::shared_ptr<const MomentumProfile> momentum_density(const ModelParams& params, int n,
                                                        const GridSpec& grid_x, const GridSpec& grid_p) {
    ProfileKey key{params.omega, params.lambda, n, grid_x.half_width, grid_x.points,
                   grid_p.half_width, grid_p.points};
    {
        std::lock_guard<std::mutex> lock(profile_mutex);
        if (profile_cache_on) {
            auto it = profile_cache.find(key);
            if (it != profile_cache.end()) return it->second;
        }
    }
    auto prof = std::make_shared<const MomentumProfile>(build_momentum_profile(params, n, grid_x, grid_p));
    std::lock_guard<std::mutex> lock(profile_mutex);
    if (profile_cache_on) profile_cache.emplace(key, prof);
    return prof;
}

void set_profile_cache_enabled(bool on) {
    std::lock_guard<std::mutex> lock(profile_mutex);
    profile_cache_on = on;
}

void clear_profile_cache() {
    std::lock_guard<std::mutex> lock(profile_mutex);
    profile_cache.clear();
}

}  // namespace quadrature
}  // namespace darboux
