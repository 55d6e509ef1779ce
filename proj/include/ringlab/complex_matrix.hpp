#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ringlab/errors.hpp"

namespace ringlab {

using cd = std::complex<double>;

// Dense N x M complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<cd>& d);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cd* row(std::size_t i) { return data_.data() + i * cols_; }
    const cd* row(std::size_t i) const { return data_.data() + i * cols_; }

    cd* data() { return data_.data(); }
    const cd* data() const { return data_.data(); }

    bool square() const { return rows_ == cols_ && rows_ > 0; }
    bool all_finite() const;

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cd s);

    // this * diag(d) (column scaling) and diag(d) * this (row scaling)
    void scale_cols(const std::vector<double>& d);
    void scale_rows(const std::vector<double>& d);

    bool operator==(const ComplexMatrix& other) const = default;

private:
    std::size_t rows_, cols_;
    std::vector<cd> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cd s, ComplexMatrix a);

cd trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

// Tr(A*B) without forming the product.
cd trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ringlab
