#include "matrix.hpp"

#include <cmath>
#include <string>

namespace sgev {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) fail(ErrorCode::invalid_argument, "Matrix: negative dimension");
}

Matrix::Matrix(int rows, int cols, std::vector<double> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        fail(ErrorCode::dimension_mismatch, "Matrix: buffer size does not match dimensions");
}

Vector Matrix::apply(const Vector& v) const {
    if (static_cast<int>(v.size()) != cols_) fail(ErrorCode::dimension_mismatch, "Matrix::apply: size mismatch");
    Vector r(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = data_.data() + static_cast<std::size_t>(i) * cols_;
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += row[j] * v[j];
        r[i] = s;
    }
    return r;
}

Vector Matrix::apply_transposed(const Vector& v) const {
    if (static_cast<int>(v.size()) != rows_)
        fail(ErrorCode::dimension_mismatch, "Matrix::apply_transposed: size mismatch");
    Vector r(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = data_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j) r[j] += row[j] * v[i];
    }
    return r;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) fail(ErrorCode::dimension_mismatch, "matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

SymMatrix::SymMatrix(int n, double fill) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {
    if (n <= 0) fail(ErrorCode::invalid_argument, "SymMatrix: dimension must be positive");
}

SymMatrix::SymMatrix(int n, const std::vector<double>& full, OnAsymmetric mode, double tol) : SymMatrix(n) {
    if (full.size() != static_cast<std::size_t>(n) * n)
        fail(ErrorCode::dimension_mismatch, "SymMatrix: buffer size does not match dimension");
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = full[static_cast<std::size_t>(i) * n + j];
            if (!std::isfinite(v)) fail(ErrorCode::invalid_argument, "SymMatrix: non-finite entry");
            if (j > i) dev = std::max(dev, std::abs(v - full[static_cast<std::size_t>(j) * n + i]));
        }
    if (dev > tol && mode == OnAsymmetric::reject)
        fail(ErrorCode::invalid_argument,
             "SymMatrix: input asymmetric, max deviation " + std::to_string(dev));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = 0.5 * (full[static_cast<std::size_t>(i) * n + j] + full[static_cast<std::size_t>(j) * n + i]);
            at(i, j) = v;
            at(j, i) = v;
        }
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i) s.at(i, i) = 1.0;
    return s;
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
    SymMatrix s(static_cast<int>(d.size()));
    for (int i = 0; i < s.dim(); ++i) s.at(i, i) = d[i];
    return s;
}

void SymMatrix::set(int i, int j, double v) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_argument, "SymMatrix::set: non-finite entry");
    at(i, j) = v;
    at(j, i) = v;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool SymMatrix::is_diagonal(double tol) const {
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (std::abs((*this)(i, j)) > tol) return false;
    return true;
}

double SymMatrix::gershgorin_bound() const {
    double b = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
        b = std::max(b, s);
    }
    return b;
}

Vector SymMatrix::apply(const Vector& v) const {
    if (static_cast<int>(v.size()) != n_) fail(ErrorCode::dimension_mismatch, "SymMatrix::apply: size mismatch");
    Vector r(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* row = data_.data() + static_cast<std::size_t>(i) * n_;
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += row[j] * v[j];
        r[i] = s;
    }
    return r;
}

SymMatrix SymMatrix::submatrix(const std::vector<int>& idx) const {
    SymMatrix s(static_cast<int>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) s.at(static_cast<int>(a), static_cast<int>(b)) = (*this)(idx[a], idx[b]);
    return s;
}

double quad_form(const SymMatrix& s, const Vector& x) { return dot(x, s.apply(x)); }

}  // namespace sgev
