#pragma once

#include "factor.hpp"
#include "matrix.hpp"

namespace sgev {

/// Full symmetric eigendecomposition. Values sorted descending; vectors()
/// column k is the eigenvector of values()[k], orthonormal to 1e-8 and
/// with residual ||S v - lambda v|| <= 1e-8 (1 + |lambda|).
class EigenDecomposition {
public:
    const Vector& values() const { return values_; }
    Vector vector(int k) const;
    double vector_entry(int k, int i) const { return vecs_[static_cast<std::size_t>(i) * n_ + k]; }
    int dim() const { return n_; }

    /// Q^T x where Q's columns are the eigenvectors.
    Vector to_basis(const Vector& x) const;
    /// Q x.
    Vector from_basis(const Vector& x) const;

    friend EigenDecomposition full_eigen(const SymMatrix& s, int max_sweeps);

private:
    int n_ = 0;
    Vector values_;
    std::vector<double> vecs_;  // row-major, column k = eigenvector k
};

/// Cyclic Jacobi with threshold skipping. Intended for desk scale (n up to
/// ~2000); raises not_converged after max_sweeps.
EigenDecomposition full_eigen(const SymMatrix& s, int max_sweeps = 100);

/// Smallest eigenvalue. Uses full_eigen for n <= jacobi_limit, otherwise a
/// Gershgorin-shifted power iteration at 1e-9 relative tolerance.
double lambda_min(const SymMatrix& s, int jacobi_limit = 2000);

/// Largest eigenvalue and eigenvector of (shift*I + S) power iteration,
/// shifted so the target is the algebraically largest eigenvalue of S.
/// Returns (lambda_max(S), unit vector). Used internally for lambda_min on
/// large matrices and for stage initialization in the PCA pipeline.
std::pair<double, Vector> lambda_max_shifted_power(const SymMatrix& s, double rel_tol = 1e-9,
                                                   int max_iter = 100000);

/// Whitened generalized eigenproblem: largest eigenvalue/vector of (A, B)
/// via L^-1 A L^-T with B = L L^T. Returns (lambda, x) with x^T B x = 1.
std::pair<double, Vector> generalized_eigen_max(const SymMatrix& a, const CholeskyFactor& bf);

}  // namespace sgev
