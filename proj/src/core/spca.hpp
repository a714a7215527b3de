#pragma once

#include <functional>
#include <string>

#include "solver.hpp"

namespace sgev::pca {

struct PcaConfig {
    double rho_tilde = 0.0;
    double epsilon = 2.220446049250313e-16;
    int max_iter = 1000;
    double tol_step = 1e-6;
    double zero_tol = 1e-9;
    std::optional<Vector> init;
    int n_components = 1;
    /// One target per component; empty means "use rho_tilde for every stage".
    std::vector<int> target_cardinalities;
    int bisect_steps = 40;
    bool check_psd = true;
    /// Receives the A >= 0 validation warning; defaults to stderr.
    std::function<void(const std::string&)> warn;
};

struct ComponentSet {
    std::vector<Vector> loadings;      // unit l2 norm each
    Vector variances;                  // per-component variance increment
    std::vector<int> cardinalities;
    std::vector<double> rhos;          // rho actually used per stage
    double cumulative_pev = 0.0;       // fraction of trace(A)
    int iterations = 0;                // summed over stages
};

struct TradeoffPoint {
    double rho_tilde;
    int cardinality;
    double pev;
};

struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
    std::string instance_id;
};

/// One ALG-S update: hard-thresholded matvec, renormalized to the unit
/// sphere. Coordinates at or below the threshold come out exactly zero.
/// Raises all_thresholded when every numerator vanishes.
Vector dcpca_step(const SymMatrix& a, const Vector& x, double rho_eps_value, double epsilon);

/// DC-PCA outer loop (B = I, tau = 0). An all_thresholded step maps to the
/// cardinality-0 "over-regularized" solution with converged = true.
std::pair<Solution, Trace> dcpca_solve(const SymMatrix& a, const PcaConfig& config);

/// Plain power iteration; stops when ||A v - lambda v|| <= tol (1 + |lambda|).
std::pair<double, Vector> power_method(const SymMatrix& a, double tol = 1e-9, int max_iter = 10000,
                                       const std::optional<Vector>& init = std::nullopt);

/// x -> B^-1 A x / sqrt(x^T A B^-1 A x); the rho = 0 iteration for A >= 0.
Vector generalized_power_step(const SymMatrix& a, const CholeskyFactor& bf, const Vector& x);

/// ALG-S with unweighted threshold rho/2 (the l1 surrogate baseline).
Vector scotlass_step(const SymMatrix& a, const Vector& x, double rho);

/// One iteration of the gradient scheme on max sum [ (c_i^T z)^2 - rho ]_+
/// over ||z|| = 1, where A = C^T C and c_i are columns of C.
Vector gpower_step(const Matrix& c, const Vector& z, double rho_tilde);

/// Recovers the n-dimensional loading from a fixed point z.
Vector gpower_recover(const Matrix& c, const Vector& z, double rho_tilde);

/// Modified Gram-Schmidt; raises rank_collapse below the pivot tolerance.
std::vector<Vector> orthonormalize(const std::vector<Vector>& found, double tol = 1e-10);

/// Subspace-projection deflation (I - QQ^T) A (I - QQ^T), re-symmetrized;
/// Q orthonormalizes `found`.
SymMatrix deflate(const SymMatrix& a, const std::vector<Vector>& found);

/// Hotelling update along one (already orthonormalized) direction:
/// A - (q^T A q) q q^T. The multi-component pipeline applies this per stage.
SymMatrix deflate_hotelling(const SymMatrix& a, const Vector& q);

/// Adjusted explained variance, score-QR convention: with M = V^T A V,
/// per-component increments are the squared diagonal of M's upper Cholesky
/// factor. Returns (per-component, cumulative fraction of trace).
std::pair<Vector, double> explained_variance(const SymMatrix& a, const std::vector<Vector>& loadings);

/// Per-stage variance accounting: increments q_t^T A q_t over the
/// Gram-Schmidt orthonormalization of the loadings (the deflation-consistent
/// cumulative PEV the component pipeline reports).
std::pair<Vector, double> stage_variance(const SymMatrix& a, const std::vector<Vector>& loadings);

/// Bisection on rho for a target renormalized cardinality. Returns the rho
/// used plus the renormalized solution; raises not_converged when the target
/// is unreachable on the plateau structure.
struct TunedComponent {
    double rho;
    Vector raw;
    Vector renormalized;
    double variance;
    int iterations;
};
TunedComponent tune_rho_for_cardinality(const SymMatrix& a, int target, const PcaConfig& config);

/// Multi-component DC-PCA: per stage, initialize at the deflated matrix's
/// leading eigenvector, tune rho (or use the fixed one), renormalize on the
/// deflated matrix, then apply the Hotelling update along the orthogonalized
/// direction. cumulative_pev uses stage_variance accounting.
ComponentSet fit_components(const SymMatrix& a, const PcaConfig& config);

/// rho sweep for the first component: warm-started dcpca_solve plus
/// renormalization per grid point; records (rho, cardinality, pev).
TradeoffCurve sweep(const SymMatrix& a, const Vector& rho_grid, const PcaConfig& config,
                    bool parallel = false);

}  // namespace sgev::pca
