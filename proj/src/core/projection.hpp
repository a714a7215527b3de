#pragma once

#include "eigen.hpp"
#include "factor.hpp"

namespace sgev {

/// Euclidean projection onto the ellipsoid {x : x^T B x <= 1}.
///
/// The eigenbasis of B is computed once at construction (O(n^3)); each
/// projection then costs two basis transforms plus an O(n)-per-step
/// safeguarded Newton solve of the scalar secular equation
/// g(mu) = x(mu)^T B x(mu) - 1 with x(mu) = (I + mu B)^-1 s.
class EllipsoidProjector {
public:
    explicit EllipsoidProjector(const SymMatrix& b);

    /// Returns s unchanged when s^T B s <= 1, otherwise the boundary point
    /// with |x^T B x - 1| <= 1e-10. Raises not_converged if the root find
    /// exceeds 200 iterations (g is strictly decreasing; this should not
    /// happen).
    Vector project(const Vector& s) const;

    int dim() const { return eig_.dim(); }

private:
    EigenDecomposition eig_;  // B = Q diag(lam) Q^T, lam > 0
};

/// One-shot form of the above; builds the projector internally.
Vector project_ellipsoid(const Vector& s, const SymMatrix& b);

}  // namespace sgev
