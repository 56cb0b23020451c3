#include "darboux/uncertainty.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darboux/entropy_position.hpp"

namespace darboux::uncertainty {

ConjugatePair conjugate_order(double alpha) {
    if (!(alpha > 0.5) || !std::isfinite(alpha))
        throw std::domain_error("conjugate order needs alpha > 1/2");
    return {alpha, alpha / (2.0 * alpha - 1.0)};
}

const char* path_name(PositionPath path) {
    return path == PositionPath::analytic ? "analytic" : "quadrature";
}

namespace {

bool analytic_ok(double alpha) { return alpha >= 2.0 && alpha == std::floor(alpha) && alpha < 64.0; }

// position-space moment, preferring the closed form
double position_moment(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts,
                       PositionPath& path) {
    if (analytic_ok(alpha)) {
        path = PositionPath::analytic;
        return entropy_position::entropic_moment(p, n, static_cast<int>(alpha));
    }
    path = PositionPath::quadrature;
    return quadrature::entropic_moment_numeric(p, n, alpha, Space::position, opts);
}

}  // namespace

XiResult xi_renyi_detail(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts) {
    auto cp = conjugate_order(alpha);
    if (alpha == 1.0) throw std::domain_error("Renyi uncertainty function needs alpha != 1");
    XiResult r;
    r.alpha = cp.alpha;
    r.beta = cp.beta;
    const double Wx = position_moment(p, n, alpha, opts, r.position_path);
    const double Wp = quadrature::entropic_moment_numeric(p, n, cp.beta, Space::momentum, opts);
    r.position_entropy = std::log(Wx) / (1.0 - alpha);
    r.momentum_entropy = std::log(Wp) / (1.0 - cp.beta);
    // ln(pi alpha^(1/(2 alpha - 2)) beta^(1/(2 beta - 2)))
    const double bound = std::log(std::numbers::pi) + std::log(alpha) / (2.0 * alpha - 2.0) +
                         std::log(cp.beta) / (2.0 * cp.beta - 2.0);
    r.xi = r.position_entropy + r.momentum_entropy - bound;
    return r;
}

XiResult xi_tsallis_detail(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts) {
    if (!(alpha > 0.5 && alpha <= 1.0))
        throw std::domain_error("Tsallis uncertainty function needs 1/2 < alpha <= 1");
    auto cp = conjugate_order(alpha);
    XiResult r;
    r.alpha = cp.alpha;
    r.beta = cp.beta;
    if (alpha == 1.0) {
        r.xi = 0.0;  // both sides reduce to pi^(-1/4)
        return r;
    }
    const double Wx = position_moment(p, n, alpha, opts, r.position_path);
    const double Wp = quadrature::entropic_moment_numeric(p, n, cp.beta, Space::momentum, opts);
    r.position_entropy = (1.0 - Wx) / (alpha - 1.0);
    r.momentum_entropy = (1.0 - Wp) / (cp.beta - 1.0);
    const double a = alpha, b = cp.beta;
    const double lhs = std::pow(a / std::numbers::pi, 1.0 / (4.0 * a)) * std::pow(Wx, 1.0 / (2.0 * a));
    const double rhs = std::pow(b / std::numbers::pi, 1.0 / (4.0 * b)) * std::pow(Wp, 1.0 / (2.0 * b));
    r.xi = lhs - rhs;
    return r;
}

double xi_renyi(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts) {
    return xi_renyi_detail(p, n, alpha, opts).xi;
}

double xi_tsallis(const ModelParams& p, int n, double alpha, const QuadratureOptions& opts) {
    return xi_tsallis_detail(p, n, alpha, opts).xi;
}

}  // namespace darboux::uncertainty
