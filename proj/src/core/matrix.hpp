#pragma once

#include <cstddef>
#include <vector>

#include "vec.hpp"

namespace sgev {

/// Dense rectangular matrix, row-major.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0);
    Matrix(int rows, int cols, std::vector<double> data);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }

    Vector apply(const Vector& v) const;             // M v
    Vector apply_transposed(const Vector& v) const;  // M^T v
    Matrix transposed() const;

private:
    int rows_, cols_;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);

/// Dense symmetric matrix with the symmetry enforced at construction.
class SymMatrix {
public:
    enum class OnAsymmetric { reject, symmetrize };

    SymMatrix() : n_(0) {}
    explicit SymMatrix(int n, double fill = 0.0);

    /// Builds from a full row-major n*n buffer. Entries must be finite;
    /// asymmetry beyond `tol` is rejected or averaged away per `mode`.
    SymMatrix(int n, const std::vector<double>& full, OnAsymmetric mode = OnAsymmetric::reject,
              double tol = 1e-8);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const Vector& d);

    int dim() const { return n_; }
    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

    /// Writes v into (i,j) and (j,i).
    void set(int i, int j, double v);

    double trace() const;
    double max_abs() const;
    bool is_diagonal(double tol = 0.0) const;
    /// Gershgorin upper bound on max |eigenvalue|: max_i sum_j |a_ij|.
    double gershgorin_bound() const;

    Vector apply(const Vector& v) const;  // S v, O(n^2)

    SymMatrix submatrix(const std::vector<int>& idx) const;

private:
    int n_;
    std::vector<double> data_;
};

/// Quadratic form x^T S x.
double quad_form(const SymMatrix& s, const Vector& x);

}  // namespace sgev
