#include <cmath>

#include "darboux/simd/kernels.hpp"

namespace darboux::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void cos_sums_scalar(const double* x, const double* wf, std::size_t nx, const double* p,
                     std::size_t np, double* out) {
    for (std::size_t j = 0; j < np; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < nx; ++i) s += wf[i] * std::cos(p[j] * x[i]);
        out[j] = s;
    }
}

void sin_sums_scalar(const double* x, const double* wf, std::size_t nx, const double* p,
                     std::size_t np, double* out) {
    for (std::size_t j = 0; j < np; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < nx; ++i) s += wf[i] * std::sin(p[j] * x[i]);
        out[j] = s;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable t{Isa::scalar, "scalar", dot_scalar, cos_sums_scalar, sin_sums_scalar};
    return t;
}

}  // namespace darboux::simd
