#include "darboux/strong_nonlinear.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darboux/errors.hpp"
#include "darboux/quadrature.hpp"
#include "darboux/specfun.hpp"

namespace darboux::strong_nonlinear {

using cplx = std::complex<double>;
using cplx_ld = std::complex<long double>;

DensitySplit harmonic_weight(const ModelParams& p, int n) {
    const auto s = model::spectrum(p, n);
    DensitySplit d;
    d.f = 1.0 / (1.0 + (n + 0.5) * p.lambda / s.effective_frequency);
    d.complement = 1.0 - d.f;
    return d;
}

double approx_wavefunction(const ModelParams& p, int n, double x) {
    const auto s = model::spectrum(p, n);
    if (x == 0.0 || p.lambda == 0.0) return 0.0;
    auto h = specfun::hermite_scaled(n, std::sqrt(s.effective_frequency) * x);
    if (h.is_zero()) return 0.0;
    double la = 0.5 * std::log(p.lambda) + s.log_norm_constant + std::log(std::fabs(x)) -
                0.5 * s.effective_frequency * x * x + h.log_mag;
    return la < -745.0 ? 0.0 : h.sign * std::exp(la);
}

cplx approx_momentum_closed(const ModelParams& p, int n, double k_in) {
    if (n < 0 || n > 3) throw std::domain_error("closed-form transform exists for n = 0..3 only");
    // Leading asymptotic orders cancel for k >> sqrt(Omega); long double keeps
    // about three more digits in that tail.
    using ld = long double;
    const ld W = model::effective_frequency(p, n);
    const ld l = p.lambda, k = k_in;
    const ld sW = std::sqrt(W), r2 = std::sqrt(2.0L);
    const ld pi34 = std::pow(std::numbers::pi_v<ld>, 0.75L);
    const ld F = specfun::dawson(k / (r2 * sW));
    const ld W32 = W * sW;
    switch (n) {
        case 0: {
            ld a = 2.0L * std::sqrt(l * W32 / (l + 2.0L * W));
            return {static_cast<double>(a * (sW - r2 * k * F) / (pi34 * W32)), 0.0};
        }
        case 1: {
            ld a = 2.0L * std::sqrt(l * W32 / (3.0L * l + 2.0L * W)) / (pi34 * W * W);
            return {0.0, static_cast<double>(-a * (2.0L * (W - k * k) * F + r2 * k * sW))};
        }
        case 2: {
            ld a = std::sqrt(l * W32 / (10.0L * l + 4.0L * W)) / pi34;
            ld t = 2.0L * r2 * (2.0L * k * k * k - 5.0L * k * W) * F / (W * W * sW) +
                   (6.0L * W - 4.0L * k * k) / (W * W);
            return {static_cast<double>(a * t), 0.0};
        }
        default: {
            ld a = 2.0L * std::sqrt(l * W32 / (21.0L * l + 6.0L * W)) / (pi34 * W * W * W);
            ld t = r2 * (2.0L * k * k * k * k - 9.0L * k * k * W + 3.0L * W * W) * F +
                   k * sW * (7.0L * W - 2.0L * k * k);
            return {0.0, static_cast<double>(-a * t)};
        }
    }
}

namespace {

// int_0^inf t H_n(t) exp(-t^2/2) exp(-i t P) dt by panel quadrature
cplx direct_half_line(int n, double P) {
    const double T = std::sqrt(2.0 * n + 2.0) + 12.0;
    double h = 0.5;
    if (P > 0.0) h = std::min(h, quadrature::panel_order / P);
    const int npan = static_cast<int>(std::ceil(T / h));
    std::vector<quadrature::Panel> panels;
    for (int k = 0; k < npan; ++k) panels.push_back({T * k / npan, T * (k + 1) / npan});
    auto r = quadrature::panel_rule(panels);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double t = r.x[i];
        double v = r.w[i] * t * specfun::hermite(n, t) * std::exp(-0.5 * t * t);
        re += v * std::cos(t * P);
        im -= v * std::sin(t * P);
    }
    return {re, im};
}

constexpr long double ld_eps = 1.0842021724855044340e-19L;

}  // namespace

GSeriesEngine::GSeriesEngine(const ModelParams& p, int n, int max_n) : params_(p), n_(n) {
    p.validate();
    if (n < 0 || n > max_n)
        throw std::domain_error("g-series engine supports 0 <= n <= " + std::to_string(max_n));
    const auto s = model::spectrum(p, n);
    sqrt_w_ = std::sqrt(s.effective_frequency);
    prefactor_ = std::sqrt(p.lambda / (2.0 * std::numbers::pi)) * s.norm_constant / s.effective_frequency;

    std::vector<cplx> direct(8);
    std::vector<cplx_ld> ser(8);
    for (int j = 0; j < 8; ++j) {
        double P = 8.0 * j / 7.0;
        direct[j] = direct_half_line(n, P);
        long double mag = 0;
        ser[j] = series(P, &mag);
        scale_ = std::max(scale_, std::abs(direct[j]));
    }
    for (int j = 0; j < 8; ++j) {
        cplx d(static_cast<double>(ser[j].real()), static_cast<double>(ser[j].imag()));
        worst_ = std::max(worst_, std::abs(d - direct[j]) / scale_);
    }
    if (worst_ > 1e-10)
        throw InstabilityError("strong-nonlinear", "g-series residual " + std::to_string(worst_) +
                                                       " against direct quadrature");
}

// sum_k C(n,k) 2^(n-k) H_k(-iP) (S_{n-k+1} - iP S_{n-k}), which equals
// int_0^inf t H_n(t) exp(-t^2/2 - i t P) dt. S_m are the contour moments
// int_{iP}^{iP+inf} u^m exp(-u^2/2) du scaled by exp(-P^2/2).
cplx_ld GSeriesEngine::series(long double P, long double* magnitude) const {
    const int n = n_;
    const cplx_ld c(0.0L, P);
    std::vector<cplx_ld> S(n + 2);
    const long double rt2 = std::sqrt(2.0L);
    S[0] = cplx_ld(std::sqrt(std::numbers::pi_v<long double> / 2.0L) * std::exp(-P * P / 2.0L),
                   -rt2 * specfun::dawson(P / rt2));
    if (n + 1 >= 1) S[1] = 1.0L;
    cplx_ld cpow = c;  // c^(m-1) for m = 2
    for (int m = 2; m <= n + 1; ++m) {
        S[m] = cpow + static_cast<long double>(m - 1) * S[m - 2];
        cpow *= c;
    }
    const cplx_ld z(0.0L, -P);
    cplx_ld hm(0.0L), h(1.0L);
    cplx_ld sum(0.0L);
    long double mag = 0.0L;
    for (int k = 0; k <= n; ++k) {
        if (k == 1) {
            hm = h;
            h = 2.0L * z;
        } else if (k > 1) {
            cplx_ld hp = 2.0L * z * h - static_cast<long double>(2 * (k - 1)) * hm;
            hm = h;
            h = hp;
        }
        long double coef = static_cast<long double>(specfun::binomial(n, k)) * std::ldexp(1.0L, n - k);
        cplx_ld t = coef * h * (S[n - k + 1] - cplx_ld(0.0L, P) * S[n - k]);
        sum += t;
        mag += std::abs(t);
    }
    if (magnitude) *magnitude = mag;
    return sum;
}

cplx GSeriesEngine::operator()(double momentum) const {
    const long double P = momentum / sqrt_w_;
    long double mag = 0.0L;
    cplx_ld s = series(P, &mag);
    if (mag * ld_eps * 64.0L > 1e-10L * scale_)
        throw InstabilityError("strong-nonlinear", "g-series cancellation too large at p = " +
                                                       std::to_string(momentum));
    if (n_ % 2 == 0) return {prefactor_ * 2.0 * static_cast<double>(s.real()), 0.0};
    // odd n: J - conj(J) = 2i Im J
    return {0.0, prefactor_ * 2.0 * static_cast<double>(s.imag())};
}

cplx g_series_transform(const ModelParams& p, int n, double momentum) {
    return GSeriesEngine(p, n)(momentum);
}

namespace {

// rho = N^2 A(x) B(x), A = (1 + l x^2) h^2, B = exp(-W x^2)
struct DensityParts {
    double A, A1, A2, B, W, N2;
};

DensityParts density_parts(const ModelParams& p, int n, double x) {
    const auto s = model::spectrum(p, n);
    const double W = s.effective_frequency, sw = std::sqrt(W), y = sw * x;
    const double h = specfun::hermite(n, y);
    const double h1 = n >= 1 ? 2.0 * n * sw * specfun::hermite(n - 1, y) : 0.0;
    const double h2 = n >= 2 ? 4.0 * n * (n - 1) * W * specfun::hermite(n - 2, y) : 0.0;
    const double u = 1.0 + p.lambda * x * x;
    DensityParts d;
    d.A = u * h * h;
    d.A1 = 2.0 * p.lambda * x * h * h + 2.0 * u * h * h1;
    d.A2 = 2.0 * p.lambda * h * h + 8.0 * p.lambda * x * h * h1 + 2.0 * u * (h1 * h1 + h * h2);
    d.B = std::exp(-W * x * x);
    d.W = W;
    d.N2 = s.norm_constant * s.norm_constant;
    return d;
}

CriticalKind classify(const ModelParams& p, int n, double x) {
    auto d = density_parts(p, n, x);
    const double W = d.W;
    const double t0 = d.A2, t1 = -4.0 * W * x * d.A1, t2 = (4.0 * W * W * x * x - 2.0 * W) * d.A;
    const double v = t0 + t1 + t2;
    const double scale = std::fabs(t0) + std::fabs(t1) + std::fabs(t2);
    if (std::fabs(v) <= 1e-10 * scale) return CriticalKind::undulation;
    return v < 0.0 ? CriticalKind::maximum : CriticalKind::minimum;
}

void add_symmetric(std::vector<CriticalPoint>& out, const ModelParams& p, int n, double x) {
    out.push_back({x, classify(p, n, x)});
    out.push_back({-x, classify(p, n, -x)});
}

void sort_points(std::vector<CriticalPoint>& v) {
    std::sort(v.begin(), v.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return a.x < b.x; });
}

}  // namespace

double density_second_derivative(const ModelParams& p, int n, double x) {
    auto d = density_parts(p, n, x);
    const double W = d.W;
    return d.N2 * d.B * (d.A2 - 4.0 * W * x * d.A1 + (4.0 * W * W * x * x - 2.0 * W) * d.A);
}

std::vector<CriticalPoint> density_critical_points(const ModelParams& p, int n) {
    p.validate();
    if (n != 0 && n != 2)
        throw std::domain_error("closed-form critical points exist for n = 0 and n = 2; use the numeric variant");
    const double l = p.lambda, W = model::effective_frequency(p, n);
    std::vector<CriticalPoint> out;
    out.push_back({0.0, classify(p, n, 0.0)});
    if (n == 0) {
        if (l > 0.0 && (l - W) > 1e-12 * l) add_symmetric(out, p, n, std::sqrt((l - W) / (l * W)));
    } else {
        add_symmetric(out, p, n, 1.0 / std::sqrt(2.0 * W));  // Hermite zeros
        if (l == 0.0) {
            add_symmetric(out, p, n, std::sqrt(2.5 / W));
        } else {
            const double root = std::sqrt(41.0 * l * l + 12.0 * l * W + 4.0 * W * W) / (l * W);
            const double base = 7.0 / W - 2.0 / l;
            const double outer = base + root, inner = base - root;
            add_symmetric(out, p, n, 0.5 * std::sqrt(outer));
            if (inner > 1e-12 * outer) add_symmetric(out, p, n, 0.5 * std::sqrt(inner));
        }
    }
    sort_points(out);
    return out;
}

std::vector<CriticalPoint> density_critical_points_numeric(const ModelParams& p, int n) {
    p.validate();
    if (n < 0) throw std::domain_error("negative n");
    const auto s = model::spectrum(p, n);
    const double W = s.effective_frequency, sw = std::sqrt(W), l = p.lambda;
    // extremum condition with the Hermite zeros divided out
    auto g = [&](double x) {
        const double y = sw * x;
        const double h = specfun::hermite(n, y);
        const double h1 = n >= 1 ? 2.0 * n * sw * specfun::hermite(n - 1, y) : 0.0;
        const double u = 1.0 + l * x * x;
        return l * x * h + u * h1 - W * x * u * h;
    };
    std::vector<CriticalPoint> out;
    out.push_back({0.0, classify(p, n, 0.0)});
    for (double z : quadrature::hermite_zeros(n))
        if (z > 1e-12) add_symmetric(out, p, n, z / sw);

    const double L = (std::sqrt(2.0 * n + 1.0) + 4.0) / sw + (l > 0.0 ? 1.0 / std::sqrt(l) : 0.0);
    const int samples = 4000 + 200 * n;
    const double x0 = 1e-9 * L;
    double xa = x0, ga = g(xa);
    for (int i = 1; i <= samples; ++i) {
        double xb = x0 + (L - x0) * i / samples, gb = g(xb);
        if (ga != 0.0 && gb != 0.0 && (ga > 0) != (gb > 0)) {
            boost::uintmax_t iters = 200;
            auto br = boost::math::tools::toms748_solve(g, xa, xb, ga, gb,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
            add_symmetric(out, p, n, 0.5 * (br.first + br.second));
        }
        xa = xb;
        ga = gb;
    }
    sort_points(out);
    return out;
}

double bifurcation_threshold(const ModelParams& p, int n) {
    p.validate();
    if (n == 0) return p.omega / std::sqrt(2.0);
    if (n == 2) return 5.0 * p.omega / std::sqrt(26.0);
    throw std::domain_error("bifurcation threshold is defined for n = 0 and n = 2");
}

Threshold bifurcation_threshold_both(const ModelParams& p, int n) {
    Threshold t;
    t.closed_form = bifurcation_threshold(p, n);
    // bisection on the sign of rho''(0) as a function of lambda
    auto curv = [&](double l) {
        ModelParams q(p.omega, l);
        auto d = density_parts(q, n, 0.0);
        return d.A2 - 2.0 * d.W * d.A;
    };
    double lo = 1e-6 * p.omega, hi = 10.0 * p.omega;
    if (!(curv(lo) < 0.0 && curv(hi) > 0.0))
        throw NumericError("strong-nonlinear", "threshold bracket does not change sign");
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (curv(mid) < 0.0 ? lo : hi) = mid;
    }
    t.bisection = 0.5 * (lo + hi);
    return t;
}

const char* kind_name(CriticalKind k) {
    switch (k) {
        case CriticalKind::maximum: return "maximum";
        case CriticalKind::minimum: return "minimum";
        default: return "undulation";
    }
}

}  // namespace darboux::strong_nonlinear
