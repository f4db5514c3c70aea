#pragma once

// Data-parallel inner loops used across the receive chain. Each kernel has a
// portable scalar reference and, on x86-64, an AVX2+FMA variant compiled in a
// separate translation unit. The active table is chosen once at startup from
// CPUID and can be overridden (tests run both tables side by side).

#include <cstddef>
#include <string_view>

#include "mmrx/types.hpp"

namespace mmrx::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
    Isa isa;
    const char* name;

    // sum_i conj(a[i]) * b[i]
    cplx (*cdot_conj)(const cplx* a, const cplx* b, std::size_t n);
    // sum_i |a[i]|^2
    double (*norm_sq)(const cplx* a, std::size_t n);
    // y[i] += a[i] * x[i]
    void (*cmac)(const cplx* a, const cplx* x, cplx* y, std::size_t n);
    // r[i] -= step * a[i]; step is a signed power of two so the product is exact
    void (*shift_sub)(double step, const double* a, double* r, std::size_t n);
    // uniform midrise quantizer applied independently to each double
    void (*quantize_midrise)(const double* in, double* out, std::size_t n, double delta,
                             double max_index);
};

const KernelTable& scalar_kernels();
// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

// Table used by the library. Defaults to the best supported ISA.
const KernelTable& active();
// Throws std::invalid_argument if the requested ISA is unavailable.
void select(Isa isa);
void select_best();
Isa parse_isa(std::string_view name);

}  // namespace mmrx::simd
