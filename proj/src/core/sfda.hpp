#pragma once

#include "solver.hpp"

namespace sgev::fda {

/// Two-class discriminant inputs. a = mu1 - mu2 must be nonzero;
/// B = s1 + s2 gets the same ridge-on-failure treatment as the CCA blocks.
struct FdaInput {
    Vector a;      // mean difference
    SymMatrix b;   // within-class scatter, SPD
    CholeskyFactor b_factor;

    FdaInput(const Vector& mu1, const Vector& mu2, const SymMatrix& s1, const SymMatrix& s2,
             double ridge_gamma = 1e-6);
    /// Direct form when (a, B) are already available.
    FdaInput(Vector a_in, SymMatrix b_in, double ridge_gamma = 1e-6);
};

struct FdaSolution {
    Vector x;                   // a^T x = 1
    double fisher = 0.0;        // 1 / (x^T B x) on the feasible set
    double quad = 0.0;          // x^T B x
    int cardinality = 0;
    int iterations = 0;
    bool converged = false;
};

struct FdaTraceEntry {
    double surrogate;  // x^T B x + nu_eps sum log(eps + |x_i|)
    double step_norm;
    double feasibility;  // |a^T x - 1|
    int cardinality;
};

/// Closed form minimizer of x^T B x over a^T x = 1: B^-1 a / (a^T B^-1 a).
Vector fda_direction(const Vector& a, const CholeskyFactor& bf);

/// One MM step: minimize x^T B x + nu_eps sum |x_i| / (|x_l_i| + eps)
/// subject to a^T x = 1 via two-block ADMM whose smooth block solves the
/// equality-constrained KKT system against a factorization built once.
Vector sfda_step(const SymMatrix& b, const Vector& a, const Vector& x_l, double nu_eps,
                 double epsilon, double sub_tol, int max_sub_iter = 5000);

/// Outer MM loop for the log-penalized problem (nu_eps = nu / log(1+1/eps)).
std::pair<FdaSolution, std::vector<FdaTraceEntry>> sfda_solve(const FdaInput& input, double nu,
                                                              const SolverConfig& config = {});

/// Convex l1-penalized variant: min x^T B x + nu ||x||_1 over a^T x = 1.
Vector sfda_lasso(const FdaInput& input, double nu, double sub_tol = 1e-8, int max_sub_iter = 20000);

/// Constraint-form access: bisection on nu such that ||x(nu)||_1 <= k,
/// returning the largest-l1 solution still satisfying the budget.
Vector sfda_lasso_constrained(const FdaInput& input, double k, double sub_tol = 1e-8);

}  // namespace sgev::fda
