#include <doctest.h>

#include <cmath>
#include <numbers>

#include "darboux/errors.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/strong_nonlinear.hpp"
#include "oracles.hpp"

using namespace darboux;
using namespace darboux::strong_nonlinear;

namespace {

// approximant rebuilt from the oracle spectrum
double phi(double lambda, int n, double x) {
    auto s = oracle::spectrum(1, lambda, n);
    return std::sqrt(lambda) * s.N * std::fabs(x) * std::exp(-0.5 * s.W * x * x) *
           oracle::hermite_series(n, std::sqrt(s.W) * x);
}

// transform of phi as a real amplitude: value for even n, minus the imaginary part for odd n
double phi_transform(double lambda, int n, double p) {
    return oracle::half_line_transform([=](double x) { return phi(lambda, n, x); }, p, n % 2);
}

double amplitude_of(std::complex<double> v, int n) { return n % 2 ? -v.imag() : v.real(); }

}  // namespace

TEST_CASE("harmonic weight") {
    for (int n : {0, 3, 9}) {
        auto d = harmonic_weight({1, 0}, n);
        CHECK(d.f == 1.0);
        CHECK(d.complement == 0.0);
    }
    CHECK(harmonic_weight({1, 0.4}, 0).f == doctest::Approx(1 / (1 + 0.2 / 0.81980)).epsilon(2e-5));
    double prev_l = 2;
    for (int k = 0; k <= 20; ++k) {
        double prev_n = 2;
        for (int n = 0; n <= 20; ++n) {
            double f = harmonic_weight({1, 0.25 * k}, n).f;
            if (k > 0) CHECK(f < prev_n);
            prev_n = f;
        }
        double f0 = harmonic_weight({1, 0.25 * k}, 3).f;
        CHECK(f0 <= prev_l);
        prev_l = f0;
    }
}

TEST_CASE("exact split of the density") {
    for (int n = 0; n <= 10; ++n)
        for (double l : {0.1, 1.0, 10.0}) {
            auto s = oracle::spectrum(1, l, n);
            double L = oracle::extent(s.W, n);
            auto harm = [&](double x) {
                double h = s.N * std::exp(-0.5 * s.W * x * x) * oracle::hermite_series(n, std::sqrt(s.W) * x);
                return h * h;
            };
            double f = 2 * oracle::integrate(harm, 0.0, L, 128);
            double g = 2 * oracle::integrate([&](double x) { return x * x * harm(x); }, 0.0, L, 128);
            auto d = harmonic_weight({1, l}, n);
            CHECK(f == doctest::Approx(d.f).epsilon(1e-9));
            CHECK(l * g == doctest::Approx(d.complement).epsilon(1e-9));
            CHECK(d.f + d.complement == 1.0);
        }
}

TEST_CASE("approximate wavefunction") {
    CHECK(approx_wavefunction({1, 3}, 2, 0.0) == 0.0);
    for (int n : {0, 1, 4})
        for (double x : {-1.2, 0.3, 2.0}) CHECK(approx_wavefunction({1, 10}, n, x) == doctest::Approx(phi(10, n, x)).epsilon(1e-12));
    for (int n = 0; n <= 6; ++n)
        for (double l : {1.0, 10.0, 100.0}) {
            auto s = oracle::spectrum(1, l, n);
            double I = 2 * oracle::integrate([&](double x) { return std::pow(approx_wavefunction({1, l}, n, x), 2); }, 0.0,
                                             oracle::extent(s.W, n), 128);
            CHECK(std::fabs(I - harmonic_weight({1, l}, n).complement) < 1e-10);
        }
    // the approximant improves as lambda grows
    auto l2 = [](double l) {
        return 2 * oracle::integrate(
                       [l](double x) {
                           double d = model::density_position({1, l}, 0, x) - std::pow(approx_wavefunction({1, l}, 0, x), 2);
                           return d * d;
                       },
                       0.0, 30.0, 256);
    };
    CHECK(l2(100) < l2(10));
}

TEST_CASE("closed-form transforms") {
    CHECK(approx_momentum_closed({1, 10}, 1, 0.0) == std::complex<double>(0, 0));
    CHECK_THROWS_AS(approx_momentum_closed({1, 10}, 4, 0.0), std::domain_error);
    for (int n = 0; n <= 3; ++n) {
        auto v = approx_momentum_closed({1, 10}, n, 0.9);
        if (n % 2) CHECK(v.real() == 0.0);
        else CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("closed forms match the numeric transform of phi (sup-norm rel 1e-6)") {
    for (int n = 0; n <= 3; ++n)
        for (double l : {10.0, 100.0}) {
            double sup = 0.0, err = 0.0;
            for (int k = 0; k <= 40; ++k) {
                double p = 0.25 * k;
                double o = phi_transform(l, n, p);
                double c = amplitude_of(approx_momentum_closed({1, l}, n, p), n);
                sup = std::max(sup, std::fabs(o));
                err = std::max(err, std::fabs(o - c));
            }
            CHECK(err <= 1e-6 * sup);
        }
}

TEST_CASE("g-series agrees with the closed forms") {
    CHECK(g_series_transform({1, 10}, 0, 0.0).real() == doctest::Approx(approx_momentum_closed({1, 10}, 0, 0.0).real()).epsilon(1e-12));
    for (int n = 0; n <= 3; ++n)
        for (double l : {2.0, 10.0, 100.0}) {
            GSeriesEngine eng({1, l}, n);
            CHECK(eng.worst_probe_error() < 1e-10);
            for (double p : {0.0, 0.4, 1.1, 2.7, 6.0}) {
                auto a = eng(p), b = approx_momentum_closed({1, l}, n, p);
                CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(b), eng.probe_scale()));
            }
        }
    auto a = g_series_transform({1, 10}, 2, 1.1), b = approx_momentum_closed({1, 10}, 2, 1.1);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    CHECK_THROWS_AS(GSeriesEngine({1, 10}, 9), std::domain_error);
}

TEST_CASE("g-series for n = 5 matches the numeric transform") {
    GSeriesEngine eng({1, 10}, 5);
    double sup = 0.0, err = 0.0;
    for (int k = 0; k <= 40; ++k) {
        double p = 0.25 * k;
        double o = phi_transform(10, 5, p);
        sup = std::max(sup, std::fabs(o));
        err = std::max(err, std::fabs(o - amplitude_of(eng(p), 5)));
    }
    CHECK(err <= 1e-6 * sup);
}

TEST_CASE("approximation error decreases along lambda") {
    for (int n = 0; n <= 3; ++n) {
        double prev = INFINITY;
        for (double l : {5.0, 10.0, 50.0, 100.0}) {
            auto prof = quadrature::momentum_density({1, l}, n);
            double num = 0.0;
            for (std::size_t i = 0; i < prof->p.size(); ++i)
                num += prof->weight[i] * std::fabs(prof->gamma[i] - std::norm(approx_momentum_closed({1, l}, n, prof->p[i])));
            double rel = 2.0 * num;  // gamma integrates to 1
            CHECK(rel < prev);
            if (l == 10.0 && n == 2) CHECK(rel < 0.05);
            prev = rel;
        }
    }
}

TEST_CASE("critical points and thresholds") {
    auto one = density_critical_points({1, 0.5}, 0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == CriticalKind::maximum);
    auto three = density_critical_points({1, 1}, 0);
    REQUIRE(three.size() == 3);
    CHECK(three[1].kind == CriticalKind::minimum);
    CHECK(three[0].kind == CriticalKind::maximum);
    CHECK(three[2].kind == CriticalKind::maximum);
    double W = model::effective_frequency({1, 1}, 0);
    CHECK(three[2].x == doctest::Approx(std::sqrt((1 - W) / W)).epsilon(1e-14));
    auto und = density_critical_points({1, 5 / std::sqrt(26.0)}, 2);
    for (auto& c : und)
        if (c.x == 0.0) CHECK(c.kind == CriticalKind::undulation);
    CHECK_THROWS(density_critical_points({1, 1}, 1));
    CHECK(std::string(kind_name(CriticalKind::undulation)) == "undulation");

    CHECK(bifurcation_threshold({1, 0}, 0) == doctest::Approx(0.7071067812).epsilon(1e-10));
    CHECK(bifurcation_threshold({1, 0}, 2) == doctest::Approx(0.9805806757).epsilon(1e-10));
    CHECK(bifurcation_threshold({2, 0}, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (int n : {0, 2})
        for (double w : {1.0, 2.0, 0.3}) {
            auto t = bifurcation_threshold_both({w, 0}, n);
            CHECK(std::fabs(t.closed_form - t.bisection) < 1e-10);
        }
    CHECK(std::fabs(bifurcation_threshold_both({1, 0}, 0).bisection - 1 / std::sqrt(2.0)) < 1e-10);
    CHECK(std::fabs(bifurcation_threshold_both({1, 0}, 2).bisection - 5 / std::sqrt(26.0)) < 1e-10);
}

TEST_CASE("closed-form critical points agree with numeric root finding") {
    for (int n : {0, 2})
        for (double l : {0.0, 0.3, 0.9, 1.5, 4.0}) {
            auto a = density_critical_points({1, l}, n), b = density_critical_points_numeric({1, l}, n);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(oracle::near(a[i].x, b[i].x, 1e-9, 1e-12));
                CHECK(a[i].kind == b[i].kind);
                if (a[i].x != 0.0) {
                    double h = 1e-5;
                    double d1 = (model::density_position({1, l}, n, a[i].x + h) - model::density_position({1, l}, n, a[i].x - h)) / (2 * h);
                    CHECK(std::fabs(d1) < 1e-6);
                }
            }
        }
}

TEST_CASE("maxima count jumps from 1 to 2 at the threshold") {
    auto count = [](double l) {
        int m = 0;
        for (auto& c : density_critical_points({1, l}, 0)) m += c.kind == CriticalKind::maximum;
        return m;
    };
    const double lc = bifurcation_threshold_both({1, 0}, 0).bisection;
    CHECK(count(lc * (1 - 1e-8)) == 1);
    CHECK(count(lc * (1 + 1e-8)) == 2);
    CHECK(density_second_derivative({1, lc * (1 - 1e-8)}, 0, 0.0) < 0);
    CHECK(density_second_derivative({1, lc * (1 + 1e-8)}, 0, 0.0) > 0);
}
