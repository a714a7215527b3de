#pragma once

#include <optional>
#include <utility>

#include "projection.hpp"

namespace sgev {

/// Problem pair (A, B): maximize x^T A x - penalty subject to x^T B x <= 1.
/// B is checked SPD at construction; the Cholesky factor is kept for reuse.
struct Problem {
    SymMatrix a;
    SymMatrix b;
    CholeskyFactor b_factor;

    Problem(SymMatrix a_in, SymMatrix b_in);
};

struct SolverConfig {
    double rho_tilde = 0.0;            // sparsity regularizer (rho tilde)
    double epsilon = 2.220446049250313e-16;  // approximation parameter, machine precision
    std::optional<double> tau;         // override; default max(0, -lambda_min(A))
    int max_iter = 1000;
    double tol_step = 1e-6;            // on ||x_{l+1} - x_l||_2
    double sub_tol = 1e-8;             // subproblem stationarity
    int max_sub_iter = 5000;
    std::optional<Vector> init;        // must satisfy init^T B init <= 1
    double zero_tol = 1e-9;            // cardinality counting
    std::optional<double> lambda_min_hint;  // callers that already know lambda_min(A)

    double rho_eps() const;            // rho_tilde / log(1 + 1/epsilon)
    void validate() const;
};

struct TraceEntry {
    double penalized_objective;
    double step_norm;
    int cardinality;
    double constraint_value;  // x^T B x
};

struct Trace {
    std::vector<TraceEntry> entries;
};

struct Solution {
    Vector x;
    double objective = 0.0;            // x^T A x
    double penalized_objective = 0.0;  // rho_eps sum log(eps + |x_i|) - x^T A x
    int cardinality = 0;
    int iterations = 0;
    bool converged = false;
};

double rho_eps(double rho_tilde, double epsilon);

/// Smooth surrogate for the cardinality: sum log(1+|x_i|/eps) / log(1+1/eps).
double approx_norm(const Vector& x, double epsilon);

/// w_i = 1 / (|x_i| + eps).
Vector weights(const Vector& x, double epsilon);

double penalized_objective(const Vector& x, const SymMatrix& a, double rho_eps_value, double epsilon);

int cardinality(const Vector& x, double zero_tol);

/// Warm-start state threaded through repeated ADMM subproblem calls.
struct AdmmState {
    Vector z, u;
    double rho = 1.0;
};

/// tau = 0 subproblem: argmax c^T x - (rho_eps/2) ||W x||_1 over x^T B x <= 1.
/// Closed form when B is diagonal (and when rho_eps = 0); two-block ADMM with
/// ellipsoid projection otherwise.
Vector subproblem_tau_zero(const Vector& c, const Vector& w, double rho_eps_value, const SymMatrix& b,
                           const CholeskyFactor& bf, const EllipsoidProjector* proj, double sub_tol,
                           int max_sub_iter = 5000, AdmmState* warm = nullptr);

/// tau > 0 subproblem: argmin ||x - s||^2 + lambda ||W x||_1 over x^T B x <= 1.
/// lambda = 0 reduces to ellipsoid projection; the unconstrained
/// soft-threshold solution is returned directly when it is feasible.
Vector subproblem_tau_pos(const Vector& s, const Vector& w, double lambda, const SymMatrix& b,
                          const EllipsoidProjector& proj, double sub_tol, int max_sub_iter = 5000,
                          AdmmState* warm = nullptr);

/// The sparse GEV engine: majorization-minimization outer loop with the
/// branch chosen by tau. Trace records every iteration.
std::pair<Solution, Trace> solve(const Problem& problem, const SolverConfig& config);

/// Keeps only the sparsity pattern of x and re-solves the reduced dense GEV
/// on that support; support values are replaced by the reduced eigenvector
/// (sign-aligned to x). Returns the new vector and the achieved objective.
std::pair<Vector, double> variational_renormalization(const Vector& x, const SymMatrix& a,
                                                      const SymMatrix& b, double zero_tol);

/// Flips the sign so the largest-magnitude entry is positive.
void canonical_sign(Vector& x);

}  // namespace sgev
