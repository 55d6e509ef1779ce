// AVX2/FMA variants of the complex micro-kernels. Compiled with
// -mavx2 -mfma in a dedicated TU; callers reach them only through the
// runtime dispatch in kernels.cpp.

#define RINGLAB_WITH_AVX2
#include "ringlab/kernels.hpp"

#include <immintrin.h>

namespace ringlab::kernels::avx2 {

namespace {

// (re0, im0, re1, im1) -> (im0, re0, im1, re1)
inline __m256d swap_halves(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// complex multiply of two packed pairs: a*b
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);                    // (ar0, ar0, ar1, ar1)
    __m256d ai = _mm256_permute_pd(a, 0xF);               // (ai0, ai0, ai1, ai1)
    __m256d t = _mm256_mul_pd(ai, swap_halves(b));        // (ai*bi, ai*br, ...)
    return _mm256_fmaddsub_pd(ar, b, t);                  // (ar*br - ai*bi, ar*bi + ai*br)
}

}  // namespace

void caxpy(std::size_t n, cd a, const cd* x, cd* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d t = _mm256_mul_pd(ai, swap_halves(xv));
        __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    if (i < n) scalar::caxpy(n - i, a, x + i, y + i);
}

cd cdotu(std::size_t n, const cd* x, const cd* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc = _mm256_add_pd(acc, cmul(xv, yv));
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    cd r(buf[0] + buf[2], buf[1] + buf[3]);
    if (i < n) r += scalar::cdotu(n - i, x + i, y + i);
    return r;
}

cd cdotc(std::size_t n, const cd* x, const cd* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        xv = _mm256_xor_pd(xv, conj_mask);  // conj(x)
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc = _mm256_add_pd(acc, cmul(xv, yv));
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    cd r(buf[0] + buf[2], buf[1] + buf[3]);
    if (i < n) r += scalar::cdotc(n - i, x + i, y + i);
    return r;
}

void cscal(std::size_t n, cd a, cd* x) {
    double* xd = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d t = _mm256_mul_pd(ai, swap_halves(xv));
        _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, xv, t));
    }
    if (i < n) scalar::cscal(n - i, a, x + i);
}

}  // namespace ringlab::kernels::avx2
