#include "ringlab/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace ringlab::kernels {

namespace scalar {

void caxpy(std::size_t n, cd a, const cd* x, cd* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cd(y[i].real() + ar * xr - ai * xi,
                  y[i].imag() + ar * xi + ai * xr);
    }
}

cd cdotu(std::size_t n, const cd* x, const cd* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    return cd(re, im);
}

cd cdotc(std::size_t n, const cd* x, const cd* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return cd(re, im);
}

void cscal(std::size_t n, cd a, cd* x) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cd(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

}  // namespace scalar

bool avx2_available() {
#if defined(RINGLAB_WITH_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
std::atomic<int> g_forced{-1};  // -1 = auto
}

Isa active_isa() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced == 0) return Isa::Scalar;
    if (forced == 1) return Isa::Avx2;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_available())
        throw std::runtime_error("AVX2 not available on this CPU");
    g_forced.store(isa == Isa::Avx2 ? 1 : 0, std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

void caxpy(std::size_t n, cd a, const cd* x, cd* y) {
#ifdef RINGLAB_WITH_AVX2
    if (active_isa() == Isa::Avx2) return avx2::caxpy(n, a, x, y);
#endif
    scalar::caxpy(n, a, x, y);
}

cd cdotu(std::size_t n, const cd* x, const cd* y) {
#ifdef RINGLAB_WITH_AVX2
    if (active_isa() == Isa::Avx2) return avx2::cdotu(n, x, y);
#endif
    return scalar::cdotu(n, x, y);
}

cd cdotc(std::size_t n, const cd* x, const cd* y) {
#ifdef RINGLAB_WITH_AVX2
    if (active_isa() == Isa::Avx2) return avx2::cdotc(n, x, y);
#endif
    return scalar::cdotc(n, x, y);
}

void cscal(std::size_t n, cd a, cd* x) {
#ifdef RINGLAB_WITH_AVX2
    if (active_isa() == Isa::Avx2) return avx2::cscal(n, a, x);
#endif
    scalar::cscal(n, a, x);
}

}  // namespace ringlab::kernels
