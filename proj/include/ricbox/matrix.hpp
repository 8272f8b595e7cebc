#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"

namespace ricbox {

// Row-major dense matrix of 64-bit floats. Just enough linear algebra for
// the MLP; deliberately single-threaded so reduction order is deterministic.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

inline bool all_finite(const Matrix& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// C = A * B, (m,k) x (k,n) -> (m,n). ikj order for cache locality.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw contract_error("matmul: shape mismatch (" + std::to_string(a.rows) + "x" +
                             std::to_string(a.cols) + ") * (" + std::to_string(b.rows) + "x" +
                             std::to_string(b.cols) + ")");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* crow = &c.data[i * c.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

// C = A^T * B, with A (k,m) and B (k,n) -> (m,n).
inline Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows)
        throw contract_error("matmul_transpose_a: shape mismatch");
    Matrix c(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = &c.data[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

// C = A * B^T, with A (m,k) and B (n,k) -> (m,n).
inline Matrix matmul_transpose_b(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols)
        throw contract_error("matmul_transpose_b: shape mismatch");
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* crow = &c.data[i * c.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) s += arow[k] * brow[k];
            crow[j] = s;
        }
    }
    return c;
}

// m[i, :] += v  for every row i.
inline void add_row_vector_inplace(Matrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols)
        throw contract_error("add_row_vector_inplace: vector length != cols");
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m.data[i * m.cols + j] += v[j];
}

inline std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) s[j] += m.data[i * m.cols + j];
    return s;
}

inline void tanh_inplace(Matrix& m) {
    for (double& v : m.data) v = std::tanh(v);
}

} // namespace ricbox
