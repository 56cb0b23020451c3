#pragma once

#include <cstddef>

namespace darboux::simd {

enum class Isa { scalar, avx2 };

// Inner loops of the quadrature module.
//   dot:      sum_i a_i b_i
//   cos_sums: out_j = sum_i wf_i cos(p_j x_i)
//   sin_sums: out_j = sum_i wf_i sin(p_j x_i)
struct KernelTable {
    Isa isa;
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    void (*cos_sums)(const double* x, const double* wf, std::size_t nx, const double* p,
                     std::size_t np, double* out);
    void (*sin_sums)(const double* x, const double* wf, std::size_t nx, const double* p,
                     std::size_t np, double* out);
};

const KernelTable& scalar_kernels();
// nullptr when the binary or the CPU lacks AVX2+FMA
const KernelTable* avx2_kernels();

// Best table for this CPU; DARBOUX_SIMD=scalar in the environment forces the
// reference kernels.
const KernelTable& active_kernels();

// Largest |p x| the vector kernels reduce accurately; callers fall back to
// the scalar table beyond it.
inline constexpr double max_vector_phase = 1.0e6;

}  // namespace darboux::simd
