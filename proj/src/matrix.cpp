#include "tricons/matrix.hpp"

#include <cmath>

#include "tricons/error.hpp"

namespace tricons {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius() const {
    return std::sqrt(kernels::dot(data_.data(), data_.data(), data_.size()));
}

Vec Matrix::operator*(const Vec& x) const {
    if (x.size() != cols_) throw Error("domain", "matvec dimension mismatch");
    Vec y(rows_);
    kernels::matvec(data_.data(), rows_, cols_, x.data(), y.data());
    return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error("domain", "matmul dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    // accumulate row_i(out) += a_ik * row_k(rhs); contiguous axpy per term
    for (std::size_t i = 0; i < rows_; ++i) {
        double* dst = out.row(i);
        const double* src = row(i);
        for (std::size_t k = 0; k < cols_; ++k)
            if (src[k] != 0.0)
                kernels::axpy(src[k], rhs.row(k), dst, rhs.cols_);
    }
    return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("domain", "matrix add dimension mismatch");
    kernels::axpy(1.0, rhs.data_.data(), data_.data(), data_.size());
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw Error("domain", "matrix sub dimension mismatch");
    kernels::axpy(-1.0, rhs.data_.data(), data_.data(), data_.size());
    return *this;
}

double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw Error("domain", "dot dimension mismatch");
    return kernels::dot(x.data(), y.data(), x.size());
}

double norm2(const Vec& x) { return std::sqrt(kernels::dot(x.data(), x.data(), x.size())); }

double norm_inf(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

Vec operator-(const Vec& x, const Vec& y) {
    Vec out = x;
    kernels::axpy(-1.0, y.data(), out.data(), out.size());
    return out;
}

Vec operator+(const Vec& x, const Vec& y) {
    Vec out = x;
    kernels::axpy(1.0, y.data(), out.data(), out.size());
    return out;
}

Vec scaled(const Vec& x, double a) {
    Vec out(x.size());
    kernels::axpy(a, x.data(), out.data(), out.size());
    return out;
}

} // namespace tricons
