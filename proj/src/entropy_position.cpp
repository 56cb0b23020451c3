#include "darboux/entropy_position.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "darboux/errors.hpp"

namespace darboux {

EntropyOrder::EntropyOrder(double a) : alpha(a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("alpha must be positive");
    analytic_eligible = (a >= 1.0 && a == std::floor(a));
}

namespace entropy_position {

namespace {

using wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>,
                                           boost::multiprecision::et_off>;

// cancellation beyond this leaves fewer than ~25 good digits
constexpr double max_condition = 1e55;

std::mutex cache_mutex;
bool cache_enabled = true;
std::map<std::pair<int, int>, ExpansionCoefficients> cache;

void require_integer_alpha(int alpha) {
    if (alpha < 1) throw std::domain_error("analytic path needs integer alpha >= 1");
}

}  // namespace

int parity_nu(int n) {
    if (n < 0) throw std::domain_error("parity_nu: negative n");
    return n % 2;
}

ExpansionCoefficients expansion_coefficients(int n, int alpha, int j_max, std::uint64_t term_budget) {
    require_integer_alpha(alpha);
    if (n < 0) throw std::domain_error("expansion_coefficients: negative n");
    if (j_max < 0) throw std::domain_error("expansion_coefficients: negative j_max");

    ExpansionCoefficients out;
    out.n = n;
    out.alpha = alpha;
    out.nu = parity_nu(n);
    const int nu = out.nu;
    const int m = (n - nu) / 2;
    const int powers = 2 * alpha;

    // A = 2^(2 a n) Gamma(m+1)^(2a)
    out.log_A = specfun::ScaledValue::from_log(2.0 * alpha * n * std::numbers::ln2 +
                                               powers * specfun::log_factorial(m));

    const int len_B = powers * m + 1;
    const int j_top = std::min(j_max, alpha * n);
    std::uint64_t work = static_cast<std::uint64_t>(powers) * len_B * (m + 1) +
                         static_cast<std::uint64_t>(len_B) * (j_top + 1);
    if (work > term_budget)
        throw ResourceError("entropy-position",
                            "coefficient sum needs " + std::to_string(work) + " terms, budget " +
                                std::to_string(term_budget));

    // single-factor polynomial in t: sum_i (-m)_i / ((nu+1/2)_i i!) (t/alpha)^i
    std::vector<wide> P(m + 1);
    P[0] = 1;
    const wide half = wide(1) / 2;
    for (int i = 0; i < m; ++i)
        P[i + 1] = P[i] * wide(i - m) / ((wide(nu) + half + i) * wide(i + 1) * wide(alpha));

    // B = P^(2 alpha), i.e. the multi-index sum grouped by J = j_1 + ... + j_2a
    std::vector<wide> B(1, wide(1));
    for (int f = 0; f < powers; ++f) {
        std::vector<wide> next(B.size() + m, wide(0));
        for (std::size_t a = 0; a < B.size(); ++a)
            for (int i = 0; i <= m; ++i) next[a + i] += B[a] * P[i];
        B.swap(next);
    }

    // C((n+nu-1)/2, m)^(2 alpha)
    wide binom = 1;
    const wide top = (wide(n + nu) - 1) / 2;
    for (int i = 1; i <= m; ++i) binom *= (top - m + i) / wide(i);
    wide pref = 1;
    for (int f = 0; f < powers; ++f) pref *= binom;

    std::vector<wide> sum(j_top + 1, wide(0)), mag(j_top + 1, wide(0));
    for (int J = 0; J < len_B; ++J) {
        if (B[J] == 0) continue;
        const int s = alpha * nu + J;
        // g_j = (1/2)_s (-s)_j / (1/2)_j
        wide g = 1;
        for (int k = 0; k < s; ++k) g *= half + k;
        for (int j = 0; j <= std::min(j_top, s); ++j) {
            wide t = B[J] * g;
            sum[j] += t;
            mag[j] += abs(t);
            g *= wide(j - s) / (half + j);
        }
    }

    out.c.assign(j_max + 1, 0.0);
    double worst = 1.0;
    for (int j = 0; j <= j_top; ++j) {
        wide cj = pref * sum[j];
        out.c[j] = static_cast<double>(cj);
        if (sum[j] != 0) {
            double cond = static_cast<double>(mag[j] / abs(sum[j]));
            worst = std::max(worst, cond);
        }
    }
    out.condition = worst;
    if (worst > max_condition)
        throw NumericError("entropy-position", "coefficient sum lost too many digits (n=" +
                                                   std::to_string(n) + ")");
    return out;
}

namespace {

ExpansionCoefficients moment_coefficients(int n, int alpha) {
    if (!cache_enabled) return expansion_coefficients(n, alpha, alpha);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, alpha});
        if (it != cache.end()) return it->second;
    }
    auto c = expansion_coefficients(n, alpha, alpha);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(std::make_pair(n, alpha), c);
    return c;
}

}  // namespace

void set_coefficient_cache_enabled(bool on) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache_enabled = on;
}

void clear_coefficient_cache() {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.clear();
}

double entropic_moment(const ModelParams& p, int n, int alpha) {
    require_integer_alpha(alpha);
    p.validate();
    if (alpha == 1) return 1.0;
    const auto s = model::spectrum(p, n);
    const auto ec = moment_coefficients(n, alpha);
    const double W = s.effective_frequency;
    const double r = p.lambda / (alpha * W);

    // sum_k C(a,k) r^k Gamma(k+1/2) eta_k,  eta_k = sum_{j<=k} c_j (-k)_j / j!
    double total = 0.0, rk = 1.0;
    for (int k = 0; k <= alpha; ++k) {
        double eta = 0.0, coef = 1.0;
        for (int j = 0; j <= k; ++j) {
            eta += ec.c[j] * coef;
            coef *= -static_cast<double>(k - j) / (j + 1);
        }
        total += specfun::binomial(alpha, k) * rk * std::exp(specfun::log_gamma(k + 0.5)) * eta;
        rk *= r;
    }
    if (!(total > 0.0))
        throw NumericError("entropy-position", "nonpositive moment sum");
    double log_pref = 2.0 * alpha * s.log_norm_constant + ec.log_A.log_mag -
                      alpha * ec.nu * std::log(static_cast<double>(alpha)) -
                      0.5 * std::log(alpha * W);
    return std::exp(log_pref + std::log(total));
}

double entropic_moment_special(const ModelParams& p, int n, int alpha, SpecialCase which) {
    require_integer_alpha(alpha);
    p.validate();
    const bool harmonic = (which == SpecialCase::harmonic || which == SpecialCase::both);
    const bool ground = (which == SpecialCase::ground || which == SpecialCase::both);
    if (harmonic && p.lambda != 0.0)
        throw std::invalid_argument("harmonic special case needs lambda = 0");
    if (ground && n != 0) throw std::invalid_argument("ground-state special case needs n = 0");
    const double a = alpha, w = p.omega;

    if (which == SpecialCase::both) return std::pow(w / std::numbers::pi, (a - 1.0) / 2.0) / std::sqrt(a);

    if (which == SpecialCase::ground) {
        const double W = model::effective_frequency(p, 0);
        const double N2 = std::sqrt(W / std::numbers::pi) / (1.0 + 0.5 * p.lambda / W);
        double sum = 0.0;
        for (int k = 0; k <= alpha; ++k)
            sum += specfun::binomial(alpha, k) * std::pow(p.lambda / (a * W), k) *
                   std::exp(specfun::log_gamma(k + 0.5));
        return std::pow(N2, a) * sum / std::sqrt(a * W);
    }

    // harmonic: N^(2a) sqrt(pi) A a^(-a nu) c_0 / sqrt(a w)
    const auto ec = expansion_coefficients(n, alpha, 0);
    const double log_N2 = 0.5 * std::log(w / std::numbers::pi) - n * std::numbers::ln2 -
                          specfun::log_factorial(n);
    double lg = a * log_N2 + ec.log_A.log_mag - a * ec.nu * std::log(a) +
                0.5 * std::log(std::numbers::pi) - 0.5 * std::log(a * w);
    return std::exp(lg) * ec.c[0];
}

double renyi_position(const ModelParams& p, int n, int alpha) {
    if (alpha < 2) throw std::domain_error("renyi_position needs integer alpha >= 2");
    return std::log(entropic_moment(p, n, alpha)) / (1.0 - alpha);
}

double tsallis_position(const ModelParams& p, int n, int alpha) {
    if (alpha < 2) throw std::domain_error("tsallis_position needs integer alpha >= 2");
    return (1.0 - entropic_moment(p, n, alpha)) / (alpha - 1.0);
}

double disequilibrium(const ModelParams& p, int n) { return entropic_moment(p, n, 2); }

}  // namespace entropy_position
}  // namespace darboux
