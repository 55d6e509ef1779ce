#include "ringlab/complex_matrix.hpp"

#include <cmath>

#include "ringlab/kernels.hpp"

namespace ringlab {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cd>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const cd& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix addition shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix subtraction shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cd s) {
    kernels::cscal(data_.size(), s, data_.data());
    return *this;
}

void ComplexMatrix::scale_cols(const std::vector<double>& d) {
    if (d.size() != cols_) throw DimensionMismatch("scale_cols size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        cd* r = row(i);
        for (std::size_t j = 0; j < cols_; ++j) r[j] *= d[j];
    }
}

void ComplexMatrix::scale_rows(const std::vector<double>& d) {
    if (d.size() != rows_) throw DimensionMismatch("scale_rows size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) kernels::cscal(cols_, d[i], row(i));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cd* ci = c.row(i);
        const cd* ai = a.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cd aik = ai[k];
            if (aik != cd(0.0)) kernels::caxpy(m, aik, b.row(k), ci);
        }
    }
    return c;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cd s, ComplexMatrix a) { return a *= s; }

cd trace(const ComplexMatrix& a) {
    if (!a.square()) throw DimensionMismatch("trace of non-square matrix");
    cd t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    const cd* p = a.data();
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) s += std::norm(p[i]);
    return std::sqrt(s);
}

cd trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw DimensionMismatch("trace_of_product shape mismatch");
    // Tr(AB) = sum_i a_i . (B^T)_i; walk B column-wise instead of transposing.
    cd t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    return t;
}

}  // namespace ringlab
