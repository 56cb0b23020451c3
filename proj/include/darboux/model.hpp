#pragma once

namespace darboux {

struct ModelParams {
    double omega = 1.0;
    double lambda = 0.0;

    ModelParams() = default;
    ModelParams(double omega_, double lambda_);  // throws std::domain_error
    void validate() const;
};

struct StateSpectrum {
    int n = 0;
    double energy = 0.0;
    double effective_frequency = 0.0;
    double norm_constant = 0.0;
    double log_norm_constant = 0.0;
};

namespace model {

double energy(const ModelParams& p, int n);
double effective_frequency(const ModelParams& p, int n);
double log_norm_constant(const ModelParams& p, int n);
double norm_constant(const ModelParams& p, int n);
StateSpectrum spectrum(const ModelParams& p, int n);

// Log of |psi| and its sign; sign 0 at nodes or on underflow.
struct LogAmplitude {
    int sign;
    double log_abs;
};
LogAmplitude log_wavefunction(const StateSpectrum& s, double lambda, double x);

double wavefunction(const ModelParams& p, int n, double x);
double wavefunction(const StateSpectrum& s, double lambda, double x);
double density_position(const ModelParams& p, int n, double x);

}  // namespace model
}  // namespace darboux
