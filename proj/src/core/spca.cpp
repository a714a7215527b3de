#include "spca.hpp"

#include <cmath>
#include <future>
#include <iostream>
#include <string>

namespace sgev::pca {

Vector dcpca_step(const SymMatrix& a, const Vector& x, double rho_eps_value, double epsilon) {
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n) fail(ErrorCode::dimension_mismatch, "dcpca_step: size mismatch");
    Vector y = a.apply(x);
    Vector out(n, 0.0);
    double nrm2_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double thr = 0.5 * rho_eps_value / (std::abs(x[i]) + epsilon);
        double m = std::abs(y[i]) - thr;
        if (m > 0.0) {
            out[i] = std::copysign(m, y[i]);
            nrm2_sum += m * m;
        }
    }
    if (nrm2_sum == 0.0) fail(ErrorCode::all_thresholded, "dcpca_step: every coordinate thresholded to zero");
    double inv = 1.0 / std::sqrt(nrm2_sum);
    for (double& v : out) v *= inv;
    return out;
}

namespace {

void warn_if_indefinite(const SymMatrix& a, const PcaConfig& config) {
    if (!config.check_psd) return;
    double lm = lambda_min(a);
    if (lm < -1e-8 * a.trace() / a.dim()) {
        std::string msg = "dcpca: A has negative eigenvalue " + std::to_string(lm) +
                          "; proceeding with tau = 0";
        if (config.warn)
            config.warn(msg);
        else
            std::cerr << "warning: " << msg << "\n";
    }
}

Vector default_pca_init(int n) {
    return Vector(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace

std::pair<Solution, Trace> dcpca_solve(const SymMatrix& a, const PcaConfig& config) {
    const int n = a.dim();
    const double re = rho_eps(config.rho_tilde, config.epsilon);
    warn_if_indefinite(a, config);

    Vector x;
    if (config.init) {
        x = *config.init;
        if (static_cast<int>(x.size()) != n) fail(ErrorCode::dimension_mismatch, "dcpca_solve: init size mismatch");
        double q = dot(x, x);
        if (q > 1.0 + 1e-9) fail(ErrorCode::invalid_argument, "dcpca_solve: init outside the unit ball");
        if (q > 1.0) scale(x, 1.0 / std::sqrt(q));
    } else {
        x = default_pca_init(n);
    }

    Trace trace;
    Solution sol;
    int it = 0;
    bool converged = false;
    for (; it < config.max_iter; ++it) {
        Vector x_next;
        try {
            x_next = dcpca_step(a, x, re, config.epsilon);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::all_thresholded) throw;
            // over-regularized: report the zero solution
            x.assign(n, 0.0);
            trace.entries.push_back({penalized_objective(x, a, re, config.epsilon), 0.0, 0, 0.0});
            converged = true;
            ++it;
            break;
        }
        double step = dist2(x_next, x);
        trace.entries.push_back({penalized_objective(x_next, a, re, config.epsilon), step,
                                 cardinality(x_next, config.zero_tol), dot(x_next, x_next)});
        x = std::move(x_next);
        if (step < config.tol_step) {
            converged = true;
            ++it;
            break;
        }
    }

    canonical_sign(x);
    sol.x = x;
    sol.objective = quad_form(a, x);
    sol.penalized_objective = penalized_objective(x, a, re, config.epsilon);
    sol.cardinality = cardinality(x, config.zero_tol);
    sol.iterations = it;
    sol.converged = converged;
    return {std::move(sol), std::move(trace)};
}

std::pair<double, Vector> power_method(const SymMatrix& a, double tol, int max_iter,
                                       const std::optional<Vector>& init) {
    const int n = a.dim();
    Vector x = init ? *init : default_pca_init(n);
    double nx = norm2(x);
    if (nx == 0.0) fail(ErrorCode::invalid_argument, "power_method: zero init");
    if (std::abs(nx - 1.0) > 1e-12) scale(x, 1.0 / nx);
    for (int it = 0; it < max_iter; ++it) {
        Vector y = a.apply(x);
        double lam = dot(x, y);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = y[i] - lam * x[i];
            res += r * r;
        }
        if (std::sqrt(res) <= tol * (1.0 + std::abs(lam))) return {lam, x};
        double ny = norm2(y);
        if (ny == 0.0) fail(ErrorCode::zero_direction, "power_method: A x vanished");
        scale(y, 1.0 / ny);
        x = std::move(y);
    }
    fail(ErrorCode::not_converged, "power_method: no convergence in " + std::to_string(max_iter) + " iterations");
}

Vector generalized_power_step(const SymMatrix& a, const CholeskyFactor& bf, const Vector& x) {
    Vector y = a.apply(x);
    if (norm2(y) == 0.0) fail(ErrorCode::zero_direction, "generalized_power_step: A x = 0");
    Vector z = bf.solve(y);
    double denom = std::sqrt(dot(y, z));
    scale(z, 1.0 / denom);
    return z;
}

Vector scotlass_step(const SymMatrix& a, const Vector& x, double rho) {
    const int n = a.dim();
    Vector y = a.apply(x);
    Vector out(n, 0.0);
    double nrm2_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double m = std::abs(y[i]) - 0.5 * rho;
        if (m > 0.0) {
            out[i] = std::copysign(m, y[i]);
            nrm2_sum += m * m;
        }
    }
    if (nrm2_sum == 0.0) fail(ErrorCode::all_thresholded, "scotlass_step: every coordinate thresholded to zero");
    double inv = 1.0 / std::sqrt(nrm2_sum);
    for (double& v : out) v *= inv;
    return out;
}

Vector gpower_step(const Matrix& c, const Vector& z, double rho_tilde) {
    if (static_cast<int>(z.size()) != c.rows()) fail(ErrorCode::dimension_mismatch, "gpower_step: size mismatch");
    Vector t = c.apply_transposed(z);  // c_i^T z per column
    Vector coeff(t.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] * t[i] > rho_tilde) {
            coeff[i] = t[i];
            any = true;
        }
    }
    if (!any) fail(ErrorCode::zero_update, "gpower_step: all indicators vanished");
    Vector zn = c.apply(coeff);
    double nrm = norm2(zn);
    if (nrm == 0.0) fail(ErrorCode::zero_update, "gpower_step: zero update direction");
    scale(zn, 1.0 / nrm);
    return zn;
}

Vector gpower_recover(const Matrix& c, const Vector& z, double rho_tilde) {
    Vector t = c.apply_transposed(z);
    Vector x(t.size(), 0.0);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] * t[i] > rho_tilde) {
            x[i] = t[i];
            s += t[i] * t[i];
        }
    }
    if (s == 0.0) fail(ErrorCode::zero_update, "gpower_recover: empty support");
    scale(x, 1.0 / std::sqrt(s));
    return x;
}

std::vector<Vector> orthonormalize(const std::vector<Vector>& found, double tol) {
    std::vector<Vector> q;
    for (const Vector& v : found) {
        Vector u = v;
        for (const Vector& qi : q) axpy(-dot(qi, u), qi, u);
        double nrm = norm2(u);
        if (nrm < tol) fail(ErrorCode::rank_collapse, "orthonormalize: near-zero pivot in Gram-Schmidt");
        scale(u, 1.0 / nrm);
        q.push_back(std::move(u));
    }
    return q;
}

SymMatrix deflate(const SymMatrix& a, const std::vector<Vector>& found) {
    if (found.empty()) fail(ErrorCode::invalid_argument, "deflate: found must be non-empty");
    const int n = a.dim();
    std::vector<Vector> q = orthonormalize(found);

    // P = I - QQ^T applied on both sides, then re-symmetrized
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) p(i, i) = 1.0;
    for (const Vector& qi : q)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p(i, j) -= qi[i] * qi[j];

    Matrix am(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) am(i, j) = a(i, j);
    Matrix res = matmul(matmul(p, am), p);

    SymMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = 0.5 * (res(i, j) + res(j, i));
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    return out;
}

SymMatrix deflate_hotelling(const SymMatrix& a, const Vector& q) {
    const int n = a.dim();
    if (static_cast<int>(q.size()) != n) fail(ErrorCode::dimension_mismatch, "deflate_hotelling: size mismatch");
    double lam = quad_form(a, q);
    SymMatrix out = a;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) -= lam * q[i] * q[j];
    return out;
}

namespace {

// Upper Cholesky of a PSD Gram matrix with clamped pivots; returns the
// squared diagonal (the adjusted per-component increments).
Vector clamped_chol_diag_sq(const Matrix& m) {
    const int k = m.rows();
    Matrix r(k, k);
    Vector diag_sq(k, 0.0);
    for (int j = 0; j < k; ++j) {
        double s = m(j, j);
        for (int i = 0; i < j; ++i) s -= r(i, j) * r(i, j);
        if (s <= 1e-14) continue;  // r(j,j) stays 0; dependent component adds nothing
        double rjj = std::sqrt(s);
        r(j, j) = rjj;
        diag_sq[j] = s;
        for (int c = j + 1; c < k; ++c) {
            double t = m(j, c);
            for (int i = 0; i < j; ++i) t -= r(i, j) * r(i, c);
            r(j, c) = t / rjj;
        }
    }
    return diag_sq;
}

}  // namespace

std::pair<Vector, double> explained_variance(const SymMatrix& a, const std::vector<Vector>& loadings) {
    if (loadings.empty()) fail(ErrorCode::invalid_argument, "explained_variance: no loadings");
    const int k = static_cast<int>(loadings.size());
    for (const Vector& v : loadings)
        if (std::abs(norm2(v) - 1.0) > 1e-6)
            fail(ErrorCode::invalid_argument, "explained_variance: loadings must be unit norm");
    Matrix m(k, k);
    std::vector<Vector> av(k);
    for (int i = 0; i < k; ++i) av[i] = a.apply(loadings[i]);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = dot(loadings[i], av[j]);
    Vector adj = clamped_chol_diag_sq(m);
    double total = 0.0;
    for (double v : adj) total += v;
    return {std::move(adj), total / a.trace()};
}

std::pair<Vector, double> stage_variance(const SymMatrix& a, const std::vector<Vector>& loadings) {
    if (loadings.empty()) fail(ErrorCode::invalid_argument, "stage_variance: no loadings");
    std::vector<Vector> q = orthonormalize(loadings);
    Vector inc(q.size());
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        inc[i] = quad_form(a, q[i]);
        total += inc[i];
    }
    return {std::move(inc), total / a.trace()};
}

namespace {

struct Evaluated {
    Vector raw;
    Vector renormalized;
    double variance;
    int card;
    int iterations;
};

Evaluated evaluate_rho(const SymMatrix& a, double rho, const PcaConfig& base) {
    PcaConfig c = base;
    c.rho_tilde = rho;
    c.check_psd = false;
    auto [sol, trace] = dcpca_solve(a, c);
    Evaluated e;
    e.raw = sol.x;
    e.iterations = sol.iterations;
    if (sol.cardinality == 0) {
        e.renormalized.assign(a.dim(), 0.0);
        e.variance = 0.0;
        e.card = 0;
    } else {
        auto [xr, lam] = variational_renormalization(sol.x, a, SymMatrix::identity(a.dim()), base.zero_tol);
        e.renormalized = std::move(xr);
        e.variance = lam;
        e.card = cardinality(e.renormalized, base.zero_tol);
    }
    return e;
}

}  // namespace

TunedComponent tune_rho_for_cardinality(const SymMatrix& a, int target, const PcaConfig& config) {
    if (target < 1 || target > a.dim())
        fail(ErrorCode::invalid_argument, "tune_rho_for_cardinality: target out of range");

    auto card_at = [&](double rho) { return evaluate_rho(a, rho, config); };

    double lo = 0.0, hi = 1.0;
    Evaluated e = card_at(hi);
    int guard = 0;
    while (e.card > target) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60) fail(ErrorCode::not_converged, "tune_rho: could not bracket the target cardinality");
        e = card_at(hi);
    }
    if (e.card == target) return {hi, e.raw, e.renormalized, e.variance, e.iterations};
    Evaluated e_lo = card_at(lo);
    if (e_lo.card == target) return {lo, e_lo.raw, e_lo.renormalized, e_lo.variance, e_lo.iterations};

    for (int it = 0; it < config.bisect_steps; ++it) {
        double mid = 0.5 * (lo + hi);
        Evaluated em = card_at(mid);
        if (em.card == target) return {mid, em.raw, em.renormalized, em.variance, em.iterations};
        if (em.card > target)
            lo = mid;
        else
            hi = mid;
    }
    // plateau jumped over the target; fine scan the remaining bracket
    for (int k = 1; k < 64; ++k) {
        double rho = lo + (hi - lo) * k / 64.0;
        Evaluated em = card_at(rho);
        if (em.card == target) return {rho, em.raw, em.renormalized, em.variance, em.iterations};
    }
    fail(ErrorCode::not_converged,
         "tune_rho: target cardinality " + std::to_string(target) + " not attained on the rho path");
}

ComponentSet fit_components(const SymMatrix& a, const PcaConfig& config) {
    const int n = a.dim();
    if (config.n_components < 1 || config.n_components > n)
        fail(ErrorCode::invalid_argument, "fit_components: n_components out of range");
    if (!config.target_cardinalities.empty() &&
        static_cast<int>(config.target_cardinalities.size()) != config.n_components)
        fail(ErrorCode::invalid_argument, "fit_components: one target cardinality per component required");
    warn_if_indefinite(a, config);

    ComponentSet set;
    SymMatrix current = a;
    std::vector<Vector> ortho;  // orthonormalized directions deflated so far

    for (int comp = 0; comp < config.n_components; ++comp) {
        PcaConfig stage = config;
        stage.check_psd = false;
        stage.n_components = 1;
        // stage init: leading eigenvector of the deflated matrix
        auto [lam_lead, v_lead] = lambda_max_shifted_power(current, 1e-9, 200000);
        (void)lam_lead;
        stage.init = v_lead;

        Vector loading;
        double variance = 0.0;
        double rho_used = config.rho_tilde;
        if (!config.target_cardinalities.empty()) {
            TunedComponent tc = tune_rho_for_cardinality(current, config.target_cardinalities[comp], stage);
            loading = tc.renormalized;
            variance = tc.variance;
            rho_used = tc.rho;
            set.iterations += tc.iterations;
        } else {
            Evaluated e = evaluate_rho(current, config.rho_tilde, stage);
            if (e.card == 0)
                fail(ErrorCode::all_thresholded,
                     "fit_components: component " + std::to_string(comp) + " over-regularized");
            loading = e.renormalized;
            variance = e.variance;
            set.iterations += e.iterations;
        }
        canonical_sign(loading);

        // orthogonalized Hotelling update for the next stage
        Vector u = loading;
        for (const Vector& qi : ortho) axpy(-dot(qi, u), qi, u);
        double nrm = norm2(u);
        if (nrm < 1e-10) fail(ErrorCode::rank_collapse, "fit_components: loading dependent on previous ones");
        scale(u, 1.0 / nrm);
        ortho.push_back(u);
        current = deflate_hotelling(current, u);

        set.loadings.push_back(std::move(loading));
        set.variances.push_back(variance);
        set.cardinalities.push_back(cardinality(set.loadings.back(), config.zero_tol));
        set.rhos.push_back(rho_used);
    }

    auto [inc, cum] = stage_variance(a, set.loadings);
    set.variances = inc;
    set.cumulative_pev = cum;
    return set;
}

TradeoffCurve sweep(const SymMatrix& a, const Vector& rho_grid, const PcaConfig& config, bool parallel) {
    if (rho_grid.empty()) fail(ErrorCode::invalid_argument, "sweep: empty grid");
    for (std::size_t i = 1; i < rho_grid.size(); ++i)
        if (rho_grid[i] <= rho_grid[i - 1])
            fail(ErrorCode::invalid_argument, "sweep: rho grid must be strictly increasing");
    warn_if_indefinite(a, config);

    const double tr = a.trace();
    TradeoffCurve curve;
    curve.points.resize(rho_grid.size());

    auto eval_point = [&](std::size_t i, const std::optional<Vector>& init) {
        PcaConfig c = config;
        c.check_psd = false;
        c.init = init;
        Evaluated e = evaluate_rho(a, rho_grid[i], c);
        curve.points[i] = {rho_grid[i], e.card, e.variance / tr};
        return e;
    };

    if (parallel) {
        // no warm starts across grid points; each one starts from the default init
        std::vector<std::future<void>> jobs;
        for (std::size_t i = 0; i < rho_grid.size(); ++i)
            jobs.push_back(std::async(std::launch::async, [&, i] {
                try {
                    eval_point(i, config.init);
                } catch (const Error& e) {
                    fail(e.code(), std::string(e.what()) + " (grid index " + std::to_string(i) + ")");
                }
            }));
        for (auto& j : jobs) j.get();
    } else {
        std::optional<Vector> warm = config.init;
        for (std::size_t i = 0; i < rho_grid.size(); ++i) {
            try {
                Evaluated e = eval_point(i, warm);
                warm = (e.card > 0) ? std::optional<Vector>(e.raw) : std::nullopt;
            } catch (const Error& e) {
                fail(e.code(), std::string(e.what()) + " (grid index " + std::to_string(i) + ")");
            }
        }
    }
    return curve;
}

}  // namespace sgev::pca
