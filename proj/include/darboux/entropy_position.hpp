#pragma once

#include <cstdint>
#include <vector>

#include "darboux/model.hpp"
#include "darboux/specfun.hpp"

namespace darboux {

struct EntropyOrder {
    double alpha = 2.0;
    bool analytic_eligible = true;

    explicit EntropyOrder(double a);  // throws std::domain_error for a <= 0
};

// Expansion of H_n(y)^(2 alpha) in even Hermite polynomials of sqrt(alpha) y:
//   H_n(y)^(2a) = A a^(-a nu) sum_j c_j / ((-1)^j 4^j j!) H_2j(sqrt(a) y)
struct ExpansionCoefficients {
    int n = 0;
    int alpha = 1;
    int nu = 0;
    specfun::ScaledValue log_A;
    std::vector<double> c;
    double condition = 1.0;  // worst sum|terms| / |c_j| seen
};

namespace entropy_position {

inline constexpr std::uint64_t default_term_budget = 100'000'000;

int parity_nu(int n);

ExpansionCoefficients expansion_coefficients(int n, int alpha, int j_max,
                                             std::uint64_t term_budget = default_term_budget);

double entropic_moment(const ModelParams& p, int n, int alpha);

enum class SpecialCase { harmonic, ground, both };
double entropic_moment_special(const ModelParams& p, int n, int alpha, SpecialCase which);

double renyi_position(const ModelParams& p, int n, int alpha);
double tsallis_position(const ModelParams& p, int n, int alpha);
double disequilibrium(const ModelParams& p, int n);

// Memo of c_0..c_alpha keyed by (n, alpha). Results are identical either way.
void set_coefficient_cache_enabled(bool on);
void clear_coefficient_cache();

}  // namespace entropy_position
}  // namespace darboux
