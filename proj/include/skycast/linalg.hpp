#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "skycast/rng.hpp"

namespace skycast {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Values are mutable through operator();
// the shape is fixed at construction.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    Vector row(std::size_t r) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// Standard matrix product. Throws std::invalid_argument naming both shapes on
// a dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// y = A x
Vector matvec(const Matrix& a, const Vector& x);
// y = A^T x (no transpose is materialized)
Vector matvec_transposed(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);

// acc += col * row^T
void add_outer(Matrix& acc, const Vector& col, const Vector& row);
// y += a * x
void axpy(double a, const Vector& x, Vector& y);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

// Solves A x = b for symmetric positive-definite A via Cholesky factorization.
// Throws std::runtime_error if A is not positive definite.
Vector cholesky_solve(Matrix a, Vector b);

// Entries i.i.d. uniform on [lo, hi), drawn row-major; advances rng.
Matrix uniform_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double lo, double hi);
Vector uniform_vector(SeededRng& rng, std::size_t n, double lo, double hi);

} // namespace skycast
