#include "darboux/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darboux/specfun.hpp"

namespace darboux {

ModelParams::ModelParams(double omega_, double lambda_) : omega(omega_), lambda(lambda_) {
    validate();
}

void ModelParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::domain_error("omega must be a positive finite number");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("lambda must be a nonnegative finite number");
}

namespace model {

namespace {
void check_level(int n) {
    if (n < 0) throw std::domain_error("quantum number n must be nonnegative");
}
}  // namespace

double energy(const ModelParams& p, int n) {
    check_level(n);
    // E = m (sqrt(l^2 m^2 + w^2) - l m), rewritten without the cancellation
    double m = n + 0.5;
    double lm = p.lambda * m;
    double root = std::sqrt(lm * lm + p.omega * p.omega);
    return m * p.omega * p.omega / (root + lm);
}

double effective_frequency(const ModelParams& p, int n) {
    double e = energy(p, n);
    return std::sqrt(p.omega * p.omega - 2.0 * p.lambda * e);
}

namespace {
double log_norm_from(double lambda, int n, double big_omega) {
    double m = n + 0.5;
    return 0.25 * std::log(big_omega / std::numbers::pi) -
           0.5 * (n * std::numbers::ln2 + specfun::log_factorial(n)) -
           0.5 * std::log1p(m * lambda / big_omega);
}
}  // namespace

double log_norm_constant(const ModelParams& p, int n) {
    return log_norm_from(p.lambda, n, effective_frequency(p, n));
}

double norm_constant(const ModelParams& p, int n) { return std::exp(log_norm_constant(p, n)); }

StateSpectrum spectrum(const ModelParams& p, int n) {
    p.validate();
    StateSpectrum s;
    s.n = n;
    s.energy = energy(p, n);
    s.effective_frequency = std::sqrt(p.omega * p.omega - 2.0 * p.lambda * s.energy);
    s.log_norm_constant = log_norm_from(p.lambda, n, s.effective_frequency);
    s.norm_constant = std::exp(s.log_norm_constant);
    return s;
}

LogAmplitude log_wavefunction(const StateSpectrum& s, double lambda, double x) {
    const double w = s.effective_frequency;
    auto h = specfun::hermite_scaled(s.n, std::sqrt(w) * x);
    if (h.is_zero()) return {0, -INFINITY};
    double la = s.log_norm_constant + 0.5 * std::log1p(lambda * x * x) - 0.5 * w * x * x + h.log_mag;
    if (la < -745.0) return {0, -INFINITY};
    return {h.sign, la};
}

double wavefunction(const StateSpectrum& s, double lambda, double x) {
    auto a = log_wavefunction(s, lambda, x);
    return a.sign == 0 ? 0.0 : a.sign * std::exp(a.log_abs);
}

double wavefunction(const ModelParams& p, int n, double x) {
    return wavefunction(spectrum(p, n), p.lambda, x);
}

double density_position(const ModelParams& p, int n, double x) {
    double psi = wavefunction(p, n, x);
    return psi * psi;
}

}  // namespace model
}  // namespace darboux
