// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check.

#include <immintrin.h>

#include "mmrx/simd/kernels.hpp"

namespace mmrx::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Complex doubles are stored interleaved: one __m256d holds two samples.
cplx cdot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);      // ar*br, ai*bi
        acc_im = _mm256_fmadd_pd(va, vb_sw, acc_im);   // ar*bi, ai*br
    }
    double re = hsum(acc_re);
    alignas(32) double t[4];
    _mm256_store_pd(t, acc_im);
    double im = (t[0] + t[2]) - (t[1] + t[3]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm_sq_avx2(const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

void cmac_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d ar = _mm256_movedup_pd(va);          // ar, ar
        const __m256d ai = _mm256_permute_pd(va, 0b1111);  // ai, ai
        const __m256d vx_sw = _mm256_permute_pd(vx, 0b0101);
        // (ar*xr - ai*xi, ar*xi + ai*xr)
        const __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, vx_sw));
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
    }
    if (i < n) scalar_kernels().cmac(a + i, x + i, y + i, n - i);
}

void shift_sub_avx2(double step, const double* a, double* r, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(step);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(a + i));
        _mm256_storeu_pd(r + i, _mm256_sub_pd(_mm256_loadu_pd(r + i), prod));
    }
    for (; i < n; ++i) r[i] -= step * a[i];
}

void quantize_midrise_avx2(const double* in, double* out, std::size_t n, double delta,
                           double max_index) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d vdelta = _mm256_set1_pd(delta);
    const __m256d vmax = _mm256_set1_pd(max_index);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(in + i);
        const __m256d mag = _mm256_andnot_pd(sign_mask, x);
        __m256d idx = _mm256_floor_pd(_mm256_div_pd(mag, vdelta));
        idx = _mm256_min_pd(idx, vmax);
        const __m256d level = _mm256_mul_pd(_mm256_add_pd(idx, half), vdelta);
        _mm256_storeu_pd(out + i, _mm256_or_pd(level, _mm256_and_pd(sign_mask, x)));
    }
    if (i < n) scalar_kernels().quantize_midrise(in + i, out + i, n - i, delta, max_index);
}

constexpr KernelTable kAvx2{
    Isa::kAvx2,           "avx2",
    &cdot_conj_avx2,      &norm_sq_avx2, &cmac_avx2, &shift_sub_avx2,
    &quantize_midrise_avx2,
};

}  // namespace

const KernelTable* avx2_kernels_impl() { return &kAvx2; }

}  // namespace mmrx::simd
