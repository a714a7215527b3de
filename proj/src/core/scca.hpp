#pragma once

#include "solver.hpp"

namespace sgev::cca {

/// Covariance blocks of a two-view problem. Construction applies ridge
/// stabilization (gamma * trace/dim on the diagonal) to a block only when
/// its Cholesky fails, then re-checks.
struct CcaInput {
    SymMatrix sxx;  // p x p
    SymMatrix syy;  // q x q
    Matrix sxy;     // p x q

    CcaInput(SymMatrix sxx_in, SymMatrix syy_in, Matrix sxy_in, double ridge_gamma = 1e-6);

    int p() const { return sxx.dim(); }
    int q() const { return syy.dim(); }
};

struct CcaModel {
    std::vector<Vector> vx;       // p-vectors, unit Sigma_xx norm
    std::vector<Vector> vy;       // q-vectors, unit Sigma_yy norm
    Vector correlations;          // wx^T Sigma_xy wy per pair
    std::vector<std::pair<int, int>> cardinalities;  // (kx, ky) per pair
};

struct RetrievalReport {
    std::vector<int> ranks;    // rank of the relevant item per query (1-based)
    Vector arocs;              // per-query AROC
    double average_aroc = 0.0;
};

/// Assembles A = [[0, Sxy],[Syx, 0]], B = blockdiag(Sxx, Syy).
Problem assemble_block(const CcaInput& input);

struct PairResult {
    Vector wx, wy;
    double correlation;
    Solution block_solution;
    Trace trace;
};

/// One sparse canonical pair: sgev::solve on the assembled block with
/// tau = max(0, -lambda_min(A)), variational renormalization on the block
/// support, then per-side rescaling to unit Sigma-norm.
PairResult dccca_solve(const CcaInput& input, SolverConfig config);

/// d pairs with cross-covariance deflation
/// Sxy <- (I - Sxx Ux Ux^T) Sxy (I - Uy Uy^T Syy), Ux/Uy the
/// Sigma-orthonormalized found directions. Raises early_stop when the
/// deflated Sxy norm drops below 1e-12 before d pairs are found.
CcaModel cca_components(const CcaInput& input, int d, const SolverConfig& config);

enum class Side { x, y };

/// V^T q over the chosen side, touching only support entries.
Vector project(const CcaModel& model, Side side, const Vector& query, double zero_tol = 1e-9);

/// Targets sorted by ascending Euclidean distance from each query;
/// ties broken by target index. Returns target orderings per query.
std::vector<std::vector<int>> retrieve(const std::vector<Vector>& queries,
                                       const std::vector<Vector>& targets);

/// 1 - (rank - 1)/(n_targets - 1).
double aroc(int rank, int n_targets);

/// Full retrieval evaluation: project queries (x side) and targets (y side),
/// rank, and score each query whose relevant target shares its index.
RetrievalReport evaluate_retrieval(const CcaModel& model, const std::vector<Vector>& queries,
                                   const std::vector<Vector>& targets);

}  // namespace sgev::cca
