#include <algorithm>
#include <cmath>

#include "mmrx/simd/kernels.hpp"

namespace mmrx::simd {
namespace {

cplx cdot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double norm_sq_scalar(const cplx* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

void cmac_scalar(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
    }
}

void shift_sub_scalar(double step, const double* a, double* r, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) r[i] -= step * a[i];
}

void quantize_midrise_scalar(const double* in, double* out, std::size_t n, double delta,
                             double max_index) {
    for (std::size_t i = 0; i < n; ++i) {
        const double idx = std::min(std::floor(std::fabs(in[i]) / delta), max_index);
        out[i] = std::copysign((idx + 0.5) * delta, in[i]);
    }
}

constexpr KernelTable kScalar{
    Isa::kScalar,           "scalar",
    &cdot_conj_scalar,      &norm_sq_scalar, &cmac_scalar, &shift_sub_scalar,
    &quantize_midrise_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace mmrx::simd
