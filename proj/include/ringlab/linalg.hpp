#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ringlab/complex_matrix.hpp"

namespace ringlab {

// Partial-pivoting LU. Combined L\U storage; perm maps output row -> input row.
struct LUFactors {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;           // signature of the permutation
    double source_norm = 0; // Frobenius norm of the factored matrix
};

LUFactors lu_factor(const ComplexMatrix& a);
cd lu_det(const LUFactors& f);
ComplexMatrix lu_invert(const LUFactors& f);
// Solve A X = B for matrix RHS (B is n x m).
ComplexMatrix lu_solve(const LUFactors& f, const ComplexMatrix& b);
std::vector<cd> lu_solve(const LUFactors& f, const std::vector<cd>& b);

// Unitary in Householder-factored form, Q = H_0 ... H_{n-1} diag(phase):
// applies to vectors in O(n^2) without ever forming the dense matrix.
struct FactoredUnitary {
    std::vector<std::vector<cd>> v;  // v[k] acts on rows k..n-1
    std::vector<double> tau;
    std::vector<cd> phase;

    std::size_t dim() const { return tau.size(); }
    void apply(std::vector<cd>& x) const;          // x := Q x
    void apply_adjoint(std::vector<cd>& x) const;  // x := Q^* x
    ComplexMatrix dense() const;
};

// In-place Householder QR: a becomes R; the returned Q (unit phases) gives
// the original matrix back as Q R.
FactoredUnitary householder_qr(ComplexMatrix& a);

// Householder QR of a square matrix: A = Q R, Q unitary, R upper triangular.
std::pair<ComplexMatrix, ComplexMatrix> qr_factor(const ComplexMatrix& a);

// Unitary similarity reduction to upper Hessenberg form (no transform
// accumulation; eigenvalues only).
ComplexMatrix hessenberg(const ComplexMatrix& a);

// Shifted-QR eigenvalues. Throws NoConvergence after 30*N sweeps.
std::vector<cd> eigenvalues(const ComplexMatrix& a);

// Eigenvalue of A closest to the shift, by inverse iteration with Rayleigh
// refinement. Cheaper than the full spectrum when only one eigenvalue near a
// known location is wanted.
cd nearest_eigenvalue(const ComplexMatrix& a, cd shift);

// Tr A^n for -n_minus <= n <= n_plus, n != 0. Negative powers reuse one LU.
std::map<int, cd> power_traces(const ComplexMatrix& a, int n_plus, int n_minus);

}  // namespace ringlab
