#pragma once

#include "matrix.hpp"

namespace sgev {

/// Lower-triangular Cholesky factor of an SPD matrix, B = L L^T.
class CholeskyFactor {
public:
    CholeskyFactor() : n_(0) {}

    int dim() const { return n_; }
    double l(int i, int j) const { return l_[static_cast<std::size_t>(i) * n_ + j]; }

    Vector solve_lower(const Vector& b) const;        // L y = b
    Vector solve_upper(const Vector& b) const;        // L^T y = b
    Vector solve(const Vector& b) const;              // B y = b
    Vector apply_lt(const Vector& x) const;           // L^T x
    double log_det() const;                           // log det(B)

    friend CholeskyFactor cholesky(const SymMatrix& b, double pivot_tol);

private:
    int n_;
    std::vector<double> l_;
};

/// Factors SPD B. A pivot at or below `pivot_tol` (default 1e-12 * trace/n)
/// raises not_positive_definite. The factor reconstructs B to
/// 1e-10 * max(1, ||B||_max) in the max norm.
CholeskyFactor cholesky(const SymMatrix& b, double pivot_tol = -1.0);

}  // namespace sgev
