#pragma once

#include <complex>
#include <vector>

#include "darboux/model.hpp"

namespace darboux {

struct DensitySplit {
    double f = 1.0;           // harmonic-like part
    double complement = 0.0;  // lambda-induced part, 1 - f
};

enum class CriticalKind { maximum, minimum, undulation };

struct CriticalPoint {
    double x;
    CriticalKind kind;
};

namespace strong_nonlinear {

DensitySplit harmonic_weight(const ModelParams& p, int n);

// sqrt(lambda) N |x| exp(-Omega x^2 / 2) H_n(sqrt(Omega) x); its norm is 1 - f.
double approx_wavefunction(const ModelParams& p, int n, double x);

// Dawson-function closed forms of the transform of the approximant, n <= 3.
std::complex<double> approx_momentum_closed(const ModelParams& p, int n, double momentum);

// General-n series for the same transform. The engine checks itself against
// direct quadrature at eight probe momenta on construction.
class GSeriesEngine {
public:
    static constexpr int default_max_n = 8;
    GSeriesEngine(const ModelParams& p, int n, int max_n = default_max_n);
    std::complex<double> operator()(double momentum) const;
    double probe_scale() const { return scale_; }
    double worst_probe_error() const { return worst_; }

private:
    std::complex<long double> series(long double P, long double* magnitude) const;
    ModelParams params_;
    int n_;
    double sqrt_w_;
    double prefactor_;
    double scale_ = 0.0;
    double worst_ = 0.0;
};

std::complex<double> g_series_transform(const ModelParams& p, int n, double momentum);

// rho''(x) sign classification helpers, exposed for tests
double density_second_derivative(const ModelParams& p, int n, double x);

std::vector<CriticalPoint> density_critical_points(const ModelParams& p, int n);
std::vector<CriticalPoint> density_critical_points_numeric(const ModelParams& p, int n);

struct Threshold {
    double closed_form;
    double bisection;
};
double bifurcation_threshold(const ModelParams& p, int n);
Threshold bifurcation_threshold_both(const ModelParams& p, int n);

const char* kind_name(CriticalKind k);

}  // namespace strong_nonlinear
}  // namespace darboux
