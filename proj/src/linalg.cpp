#include "skycast/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace skycast {

namespace {

[[noreturn]] void throw_shape_error(const char* op, std::size_t ar, std::size_t ac,
                                    std::size_t br, std::size_t bc) {
    std::ostringstream msg;
    msg << op << ": incompatible shapes (" << ar << "x" << ac << ") and (" << br << "x" << bc
        << ")";
    throw std::invalid_argument(msg.str());
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Matrix: rows and cols must be positive");
    }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        std::size_t c = 0;
        for (double v : row) {
            m(r, c++) = v;
        }
        ++r;
    }
    return m;
}

Vector Matrix::row(std::size_t r) const {
    return Vector(values_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw_shape_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) {
        throw_shape_error("matvec", a.rows(), a.cols(), x.size(), 1);
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a(i, j) * x[j];
        }
        y[i] = acc;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
    if (a.rows() != x.size()) {
        throw_shape_error("matvec_transposed", a.cols(), a.rows(), x.size(), 1);
    }
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            y[j] += a(i, j) * x[i];
        }
    }
    return y;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw_shape_error("dot", a.size(), 1, b.size(), 1);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void add_outer(Matrix& acc, const Vector& col, const Vector& row) {
    if (acc.rows() != col.size() || acc.cols() != row.size()) {
        throw_shape_error("add_outer", acc.rows(), acc.cols(), col.size(), row.size());
    }
    for (std::size_t i = 0; i < col.size(); ++i) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            acc(i, j) += col[i] * row[j];
        }
    }
}

void axpy(double a, const Vector& x, Vector& y) {
    if (x.size() != y.size()) {
        throw_shape_error("axpy", x.size(), 1, y.size(), 1);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

bool all_finite(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!std::isfinite(m.data()[i])) {
            return false;
        }
    }
    return true;
}

Vector cholesky_solve(Matrix a, Vector b) {
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw_shape_error("cholesky_solve", a.rows(), a.cols(), b.size(), 1);
    }
    const std::size_t n = a.rows();
    // in-place lower-triangular factor
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            diag -= a(j, k) * a(j, k);
        }
        if (diag <= 0.0 || !std::isfinite(diag)) {
            throw std::runtime_error("cholesky_solve: matrix is not positive definite (pivot " +
                                     std::to_string(j) + ")");
        }
        a(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= a(i, k) * a(j, k);
            }
            a(i, j) = s / a(j, j);
        }
    }
    // L y = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= a(i, k) * b[k];
        }
        b[i] = s / a(i, i);
    }
    // L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= a(k, ii) * b[k];
        }
        b[ii] = s / a(ii, ii);
    }
    return b;
}

Matrix uniform_matrix(SeededRng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m.data()[i] = rng.uniform(lo, hi);
    }
    return m;
}

Vector uniform_vector(SeededRng& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) {
        x = rng.uniform(lo, hi);
    }
    return v;
}

} // namespace skycast
