#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "darboux/model.hpp"

namespace darboux {

enum class QuadratureRule { gauss_legendre_panels, gauss_hermite, uniform_simpson };

// Zero fields mean "derive from the integrand". A nonzero point count is a
// floor: adapted grids keep splitting panels until they reach it.
struct GridSpec {
    double half_width = 0.0;
    int points = 0;
    QuadratureRule rule = QuadratureRule::gauss_legendre_panels;

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

enum class Space { position, momentum };

struct QuadratureOptions {
    GridSpec x;
    GridSpec p;
};

// gamma(p) = |FT psi|^2 tabulated on half-line nodes (the density is even).
// Nodes and weights come from the same panel rule, so integrals over R are
// 2 * sum_i weight_i f(gamma_i).
struct MomentumProfile {
    ModelParams params;
    int n = 0;
    GridSpec grid_x;
    GridSpec grid_p;
    std::vector<double> p;
    std::vector<double> weight;
    std::vector<double> amplitude;  // real a(p): FT = a for even n, -i a for odd n
    std::vector<double> gamma;
    std::vector<double> zeros;      // positive zeros of a(p) inside [0, p_max]
    double p_max = 0.0;
    double x_max = 0.0;
    std::size_t x_nodes = 0;

    std::vector<std::pair<double, double>> values() const;  // (p, gamma) over [-p_max, p_max]
    double moment(double alpha) const;
    double shannon() const;
    double variance() const;
};

struct FourierValue {
    std::complex<double> value;
    bool under_resolved = false;  // p L / points above the per-interval phase bound
};

namespace quadrature {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

inline constexpr int panel_order = 24;

Rule gauss_legendre(int order);  // on [-1, 1]
Rule gauss_hermite(int n);       // weight exp(-x^2)
std::vector<double> hermite_zeros(int n);

struct Panel {
    double a;
    double b;
    bool grade_left = false;   // cluster nodes toward an endpoint singularity
    bool grade_right = false;
};
Rule panel_rule(const std::vector<Panel>& panels, int order = panel_order);

GridSpec default_grid();
double integrate(const std::function<double(double)>& f, const GridSpec& grid = default_grid());

// Half-line rule on [0, L] adapted to psi_n: breakpoints at the Hermite
// zeros, panels narrowed near the origin for the sqrt(1 + lambda x^2) branch
// points. alpha sets the truncation (density^alpha envelope) and grading.
Rule position_half_rule(const ModelParams& params, int n, double alpha, const GridSpec& grid = {});

double entropic_moment_numeric(const ModelParams& params, int n, double alpha, Space space,
                               const QuadratureOptions& opts = {});
double renyi_numeric(const ModelParams& params, int n, double alpha, Space space,
                     const QuadratureOptions& opts = {});
double tsallis_numeric(const ModelParams& params, int n, double alpha, Space space,
                       const QuadratureOptions& opts = {});
double shannon_numeric(const ModelParams& params, int n, Space space,
                       const QuadratureOptions& opts = {});

FourierValue fourier_transform(const ModelParams& params, int n, const GridSpec& grid_x, double p);

// Cached; safe to call from several threads.
std::shared_ptr<const MomentumProfile> momentum_density(const ModelParams& params, int n,
                                                        const GridSpec& grid_x = {},
                                                        const GridSpec& grid_p = {});
MomentumProfile build_momentum_profile(const ModelParams& params, int n,
                                       const GridSpec& grid_x = {}, const GridSpec& grid_p = {});

void set_profile_cache_enabled(bool on);
void clear_profile_cache();

}  // namespace quadrature
}  // namespace darboux
