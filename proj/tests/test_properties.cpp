// Property suites, runnable on their own: ctest -L properties
#include <doctest.h>

#include <cmath>
#include <random>

#include "darboux/entropy_position.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/specfun.hpp"
#include "oracles.hpp"

using namespace darboux;

TEST_CASE("normalization and Parseval") {
    for (int n = 0; n <= 20; n += 2)
        for (double l : {0.0, 0.3, 1.0, 2.0}) {
            ModelParams p{1, l};
            CHECK(std::fabs(quadrature::entropic_moment_numeric(p, n, 1.0, Space::position) - 1) < 1e-8);
            CHECK(std::fabs(quadrature::entropic_moment_numeric(p, n, 1.0, Space::momentum) - 1) < 1e-8);
        }
}

TEST_CASE("entropies decrease with the order") {
    const double alphas[] = {0.5, 4.0 / 7.0, 2.0 / 3.0, 0.8, 1.25, 1.5, 1.75, 2.0, 3.0};
    for (Space sp : {Space::position, Space::momentum})
        for (int n : {0, 1, 4, 9, 15})
            for (double l : {0.0, 0.4, 1.5}) {
                ModelParams p{1, l};
                double pr = INFINITY, pt = INFINITY;
                for (double a : alphas) {
                    double r = quadrature::renyi_numeric(p, n, a, sp);
                    double t = quadrature::tsallis_numeric(p, n, a, sp);
                    CHECK(r <= pr + 1e-12);
                    CHECK(t < pt);
                    pr = r;
                    pt = t;
                }
            }
    for (int n = 0; n <= 20; ++n)
        for (double l : {0.0, 0.5, 1.0, 2.0}) {
            CHECK(entropy_position::renyi_position({1, l}, n, 2) >= entropy_position::renyi_position({1, l}, n, 3));
            CHECK(entropy_position::tsallis_position({1, l}, n, 2) >= entropy_position::tsallis_position({1, l}, n, 3));
        }
}

TEST_CASE("Renyi brackets Shannon near alpha = 1") {
    for (Space sp : {Space::position, Space::momentum})
        for (int n : {0, 3, 10})
            for (double l : {0.0, 0.4, 2.0}) {
                ModelParams p{1, l};
                double s = quadrature::shannon_numeric(p, n, sp);
                double above = quadrature::renyi_numeric(p, n, 1 + 1e-4, sp);
                double below = quadrature::renyi_numeric(p, n, 1 - 1e-4, sp);
                CHECK(above <= s);
                CHECK(s <= below);
                CHECK(std::fabs(above - s) < 1e-3);
                CHECK(std::fabs(below - s) < 1e-3);
            }
}

TEST_CASE("Hermite power expansion reconstructs H_n^(2 alpha)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    for (int n = 0; n <= 6; ++n)
        for (int a = 1; a <= 3; ++a)
            for (double W : {1.0, 0.62}) {
                auto ec = entropy_position::expansion_coefficients(n, a, a * n + 5);
                const double pref = std::exp(ec.log_A.log_mag) * std::pow(a, -a * ec.nu);
                for (int t = 0; t < 50; ++t) {
                    double x = ux(rng), y = std::sqrt(W) * x, ya = std::sqrt(a * W) * x;
                    double sum = 0.0, mag = 0.0;
                    for (std::size_t j = 0; j < ec.c.size(); ++j) {
                        double term = ec.c[j] / (std::pow(-4.0, static_cast<double>(j)) * std::tgamma(j + 1.0)) *
                                      oracle::hermite_rec(2 * static_cast<int>(j), ya);
                        sum += term;
                        mag += std::fabs(term);
                    }
                    double want = std::pow(oracle::hermite_series(n, y), 2 * a);
                    CHECK(std::fabs(pref * sum - want) <= 1e-8 * std::fabs(want) + 1e-14 * pref * mag);
                }
            }
}

TEST_CASE("Dawson function satisfies F' = 1 - 2 x F") {
    const double h = 1e-5;
    for (int k = -200; k <= 200; ++k) {
        double x = 0.05 * k;
        double d = (specfun::dawson(x + h) - specfun::dawson(x - h)) / (2 * h);
        CHECK(std::fabs(d - (1 - 2 * x * specfun::dawson(x))) < 1e-8);
    }
    for (double x : {15.0, 40.0, 300.0}) {
        double d = (specfun::dawson(x + h * x) - specfun::dawson(x - h * x)) / (2 * h * x);
        CHECK(std::fabs(d - (1 - 2 * x * specfun::dawson(x))) < 1e-8);
    }
}
