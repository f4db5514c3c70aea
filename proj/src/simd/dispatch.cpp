#include <atomic>
#include <string>

#include "mmrx/simd/kernels.hpp"

namespace mmrx::simd {

#if defined(MMRX_HAVE_AVX2)
const KernelTable* avx2_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(MMRX_HAVE_AVX2)
    return avx2_kernels_impl();
#else
    return nullptr;
#endif
}

bool cpu_has_avx2() {
#if defined(MMRX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* best_table() {
    if (cpu_has_avx2()) return avx2_kernels();
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{best_table()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
    switch (isa) {
    case Isa::kScalar:
        current().store(&scalar_kernels(), std::memory_order_release);
        return;
    case Isa::kAvx2:
        if (!cpu_has_avx2()) throw std::invalid_argument("AVX2 kernels not available on this build/CPU");
        current().store(avx2_kernels(), std::memory_order_release);
        return;
    }
}

void select_best() { current().store(best_table(), std::memory_order_release); }

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::kScalar;
    if (name == "avx2") return Isa::kAvx2;
    throw std::invalid_argument("unknown ISA '" + std::string(name) + "' (expected scalar or avx2)");
}

}  // namespace mmrx::simd
