#include <cstdlib>
#include <cstring>

#include "darboux/simd/kernels.hpp"

namespace darboux::simd {

const KernelTable* avx2_table_impl();

namespace {
bool cpu_has_avx2_fma() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable* t = cpu_has_avx2_fma() ? avx2_table_impl() : nullptr;
    return t;
}

const KernelTable& active_kernels() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("DARBOUX_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        if (const KernelTable* v = avx2_kernels()) return v;
        return &scalar_kernels();
    }();
    return *chosen;
}

}  // namespace darboux::simd
