#pragma once

// Complex BLAS-1 style micro-kernels backing the dense linear algebra.
// A scalar reference path always exists; an AVX2/FMA variant is picked at
// runtime when the CPU supports it. Both paths are equivalence-tested.

#include <complex>
#include <cstddef>

namespace ringlab::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

Isa active_isa();
bool avx2_available();
// Test hook. Forcing Avx2 on a CPU without it throws.
void force_isa(Isa isa);
void reset_isa();

// y += a * x
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
// sum_i x_i * y_i
cd cdotu(std::size_t n, const cd* x, const cd* y);
// sum_i conj(x_i) * y_i
cd cdotc(std::size_t n, const cd* x, const cd* y);
// x *= a
void cscal(std::size_t n, cd a, cd* x);

namespace scalar {
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
cd cdotu(std::size_t n, const cd* x, const cd* y);
cd cdotc(std::size_t n, const cd* x, const cd* y);
void cscal(std::size_t n, cd a, cd* x);
}  // namespace scalar

#ifdef RINGLAB_WITH_AVX2
namespace avx2 {
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
cd cdotu(std::size_t n, const cd* x, const cd* y);
cd cdotc(std::size_t n, const cd* x, const cd* y);
void cscal(std::size_t n, cd a, cd* x);
}  // namespace avx2
#endif

}  // namespace ringlab::kernels
