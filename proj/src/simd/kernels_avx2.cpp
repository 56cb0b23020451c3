// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <cmath>

#include "darboux/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace darboux::simd::avx2 {

namespace {

// pi/2 split into 33-bit pieces (fdlibm) so k * piece is exact for |k| < 2^20
constexpr double pio2_1 = 1.57079632673412561417e+00;
constexpr double pio2_2 = 6.07710050630396597660e-11;
constexpr double pio2_3 = 2.02226624871116645580e-21;
constexpr double two_over_pi = 6.36619772367581382433e-01;

constexpr double S1 = -1.66666666666666324348e-01, S2 = 8.33333333332248946124e-03,
                 S3 = -1.98412698298579493134e-04, S4 = 2.75573137070700676789e-06,
                 S5 = -2.50507602534068634195e-08, S6 = 1.58969099521155010221e-10;
constexpr double C1 = 4.16666666666666019037e-02, C2 = -1.38888888888741095749e-03,
                 C3 = 2.48015872894767294178e-05, C4 = -2.75573143513906633035e-07,
                 C5 = 2.08757232129817482790e-09, C6 = -1.13596475577881948265e-11;

inline __m256d bcast(double v) { return _mm256_set1_pd(v); }

// sin or cos of t, |t| below max_vector_phase
template <bool Sine>
inline __m256d sincos_pd(__m256d t) {
    __m256d k = _mm256_round_pd(_mm256_mul_pd(t, bcast(two_over_pi)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, bcast(pio2_1), t);
    r = _mm256_fnmadd_pd(k, bcast(pio2_2), r);
    r = _mm256_fnmadd_pd(k, bcast(pio2_3), r);

    __m256d z = _mm256_mul_pd(r, r);
    __m256d ps = _mm256_fmadd_pd(z, bcast(S6), bcast(S5));
    ps = _mm256_fmadd_pd(z, ps, bcast(S4));
    ps = _mm256_fmadd_pd(z, ps, bcast(S3));
    ps = _mm256_fmadd_pd(z, ps, bcast(S2));
    ps = _mm256_fmadd_pd(z, ps, bcast(S1));
    __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(z, r), ps, r);

    __m256d pc = _mm256_fmadd_pd(z, bcast(C6), bcast(C5));
    pc = _mm256_fmadd_pd(z, pc, bcast(C4));
    pc = _mm256_fmadd_pd(z, pc, bcast(C3));
    pc = _mm256_fmadd_pd(z, pc, bcast(C2));
    pc = _mm256_fmadd_pd(z, pc, bcast(C1));
    __m256d hz = _mm256_mul_pd(bcast(0.5), z);
    __m256d w = _mm256_sub_pd(bcast(1.0), hz);
    // 1 - z/2 + z^2 pc, with the fdlibm correction for the rounding of w
    __m256d c = _mm256_add_pd(
        w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                           _mm256_sub_pd(_mm256_sub_pd(bcast(1.0), w), hz)));

    // quadrant q = k mod 4
    __m256d q = _mm256_sub_pd(k, _mm256_mul_pd(bcast(4.0),
                                               _mm256_floor_pd(_mm256_mul_pd(k, bcast(0.25)))));
    __m256d odd = _mm256_or_pd(_mm256_cmp_pd(q, bcast(1.0), _CMP_EQ_OQ),
                               _mm256_cmp_pd(q, bcast(3.0), _CMP_EQ_OQ));
    __m256d neg;
    __m256d v;
    if constexpr (Sine) {
        v = _mm256_blendv_pd(s, c, odd);
        neg = _mm256_cmp_pd(q, bcast(2.0), _CMP_GE_OQ);
    } else {
        v = _mm256_blendv_pd(c, s, odd);
        neg = _mm256_or_pd(_mm256_cmp_pd(q, bcast(1.0), _CMP_EQ_OQ),
                           _mm256_cmp_pd(q, bcast(2.0), _CMP_EQ_OQ));
    }
    __m256d sign = _mm256_and_pd(neg, bcast(-0.0));
    return _mm256_xor_pd(v, sign);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

// One lane per output frequency, so each lane sums in the same order as the
// scalar reference.
template <bool Sine>
void trig_sums(const double* x, const double* wf, std::size_t nx, const double* p,
               std::size_t np, double* out) {
    std::size_t j = 0;
    for (; j + 4 <= np; j += 4) {
        __m256d pv = _mm256_loadu_pd(p + j);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < nx; ++i) {
            __m256d t = _mm256_mul_pd(pv, bcast(x[i]));
            acc = _mm256_fmadd_pd(bcast(wf[i]), sincos_pd<Sine>(t), acc);
        }
        _mm256_storeu_pd(out + j, acc);
    }
    for (; j < np; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < nx; ++i)
            s += wf[i] * (Sine ? std::sin(p[j] * x[i]) : std::cos(p[j] * x[i]));
        out[j] = s;
    }
}

void cos_sums(const double* x, const double* wf, std::size_t nx, const double* p, std::size_t np,
              double* out) {
    trig_sums<false>(x, wf, nx, p, np, out);
}

void sin_sums(const double* x, const double* wf, std::size_t nx, const double* p, std::size_t np,
              double* out) {
    trig_sums<true>(x, wf, nx, p, np, out);
}

}  // namespace

const KernelTable table{Isa::avx2, "avx2", dot, cos_sums, sin_sums};

}  // namespace darboux::simd::avx2

namespace darboux::simd {
const KernelTable* avx2_table_impl() { return &avx2::table; }
}  // namespace darboux::simd

#else

namespace darboux::simd {
const KernelTable* avx2_table_impl() { return nullptr; }
}  // namespace darboux::simd

#endif
