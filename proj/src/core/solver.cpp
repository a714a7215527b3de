#include "solver.hpp"

#include <cmath>
#include <string>

namespace sgev {

Problem::Problem(SymMatrix a_in, SymMatrix b_in) : a(std::move(a_in)), b(std::move(b_in)) {
    if (a.dim() != b.dim()) fail(ErrorCode::dimension_mismatch, "Problem: A and B dimensions differ");
    b_factor = cholesky(b);  // SPD check
}

double rho_eps(double rho_tilde, double epsilon) {
    if (rho_tilde < 0.0) fail(ErrorCode::invalid_argument, "rho_eps: rho_tilde must be >= 0");
    if (epsilon <= 0.0) fail(ErrorCode::invalid_argument, "rho_eps: epsilon must be > 0");
    return rho_tilde / std::log1p(1.0 / epsilon);
}

double SolverConfig::rho_eps() const { return sgev::rho_eps(rho_tilde, epsilon); }

void SolverConfig::validate() const {
    if (rho_tilde < 0.0) fail(ErrorCode::invalid_argument, "config: rho_tilde must be >= 0");
    if (epsilon <= 0.0) fail(ErrorCode::invalid_argument, "config: epsilon must be > 0");
    if (max_iter < 1) fail(ErrorCode::invalid_argument, "config: max_iter must be >= 1");
    if (tol_step <= 0.0) fail(ErrorCode::invalid_argument, "config: tol_step must be > 0");
    if (sub_tol <= 0.0) fail(ErrorCode::invalid_argument, "config: sub_tol must be > 0");
    if (zero_tol < 0.0) fail(ErrorCode::invalid_argument, "config: zero_tol must be >= 0");
}

double approx_norm(const Vector& x, double epsilon) {
    if (epsilon <= 0.0) fail(ErrorCode::invalid_argument, "approx_norm: epsilon must be > 0");
    double denom = std::log1p(1.0 / epsilon);
    double s = 0.0;
    for (double v : x) s += std::log1p(std::abs(v) / epsilon);
    return s / denom;
}

Vector weights(const Vector& x, double epsilon) {
    if (epsilon <= 0.0) fail(ErrorCode::invalid_argument, "weights: epsilon must be > 0");
    Vector w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = 1.0 / (std::abs(x[i]) + epsilon);
    return w;
}

double penalized_objective(const Vector& x, const SymMatrix& a, double rho_eps_value, double epsilon) {
    double s = 0.0;
    for (double v : x) s += std::log(epsilon + std::abs(v));
    return rho_eps_value * s - quad_form(a, x);
}

int cardinality(const Vector& x, double zero_tol) { return count_above(x, zero_tol); }

void canonical_sign(Vector& x) {
    double best = 0.0;
    int arg = -1;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > best) {
            best = std::abs(x[i]);
            arg = static_cast<int>(i);
        }
    if (arg >= 0 && x[arg] < 0.0)
        for (double& v : x) v = -v;
}

namespace {

// Snap coordinates the x-block already zeroed, then restore feasibility.
Vector finish_admm_iterate(Vector z, const Vector& x_block, const SymMatrix& b, double sub_tol) {
    for (std::size_t i = 0; i < z.size(); ++i)
        if (x_block[i] == 0.0 && std::abs(z[i]) <= 10.0 * sub_tol) z[i] = 0.0;
    double q = quad_form(b, z);
    if (q > 1.0) scale(z, 1.0 / std::sqrt(q));
    return z;
}

Vector admm_tau_zero(const Vector& c, const Vector& w, double rho_eps_value, const SymMatrix& b,
                     const EllipsoidProjector& proj, double sub_tol, int max_sub_iter, AdmmState* warm) {
    const std::size_t n = c.size();
    Vector z(n, 0.0), u(n, 0.0);
    double rho = 1.0;
    if (warm && warm->z.size() == n) {
        z = warm->z;
        u = warm->u;
        rho = warm->rho;
    }
    Vector x(n, 0.0);
    for (int it = 0; it < max_sub_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = soft_threshold(z[i] - u[i] + c[i] / rho, 0.5 * rho_eps_value * w[i] / rho);
        Vector z_old = z;
        Vector xu(n);
        for (std::size_t i = 0; i < n; ++i) xu[i] = x[i] + u[i];
        z = proj.project(xu);
        double r = 0.0, s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += x[i] - z[i];
            double rd = x[i] - z[i], sd = z[i] - z_old[i];
            r += rd * rd;
            s += sd * sd;
        }
        r = std::sqrt(r);
        s = rho * std::sqrt(s);
        if (r <= sub_tol && s <= sub_tol) {
            if (warm) {
                warm->z = z;
                warm->u = u;
                warm->rho = rho;
            }
            return finish_admm_iterate(z, x, b, sub_tol);
        }
        if (r > 10.0 * s && rho < 1e8) {
            rho *= 2.0;
            scale(u, 0.5);
        } else if (s > 10.0 * r && rho > 1e-8) {
            rho *= 0.5;
            scale(u, 2.0);
        }
    }
    fail(ErrorCode::max_sub_iterations, "subproblem_tau_zero: ADMM exceeded max iterations");
}

Vector admm_tau_pos(const Vector& s_vec, const Vector& w, double lambda, const SymMatrix& b,
                    const EllipsoidProjector& proj, double sub_tol, int max_sub_iter, AdmmState* warm) {
    const std::size_t n = s_vec.size();
    Vector z(n, 0.0), u(n, 0.0);
    double rho = 1.0;
    if (warm && warm->z.size() == n) {
        z = warm->z;
        u = warm->u;
        rho = warm->rho;
    }
    Vector x(n, 0.0);
    for (int it = 0; it < max_sub_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = soft_threshold((2.0 * s_vec[i] + rho * (z[i] - u[i])) / (2.0 + rho),
                                  lambda * w[i] / (2.0 + rho));
        Vector z_old = z;
        Vector xu(n);
        for (std::size_t i = 0; i < n; ++i) xu[i] = x[i] + u[i];
        z = proj.project(xu);
        double r = 0.0, sres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += x[i] - z[i];
            double rd = x[i] - z[i], sd = z[i] - z_old[i];
            r += rd * rd;
            sres += sd * sd;
        }
        r = std::sqrt(r);
        sres = rho * std::sqrt(sres);
        if (r <= sub_tol && sres <= sub_tol) {
            if (warm) {
                warm->z = z;
                warm->u = u;
                warm->rho = rho;
            }
            return finish_admm_iterate(z, x, b, sub_tol);
        }
        if (r > 10.0 * sres && rho < 1e8) {
            rho *= 2.0;
            scale(u, 0.5);
        } else if (sres > 10.0 * r && rho > 1e-8) {
            rho *= 0.5;
            scale(u, 2.0);
        }
    }
    fail(ErrorCode::max_sub_iterations, "subproblem_tau_pos: ADMM exceeded max iterations");
}

}  // namespace

Vector subproblem_tau_zero(const Vector& c, const Vector& w, double rho_eps_value, const SymMatrix& b,
                           const CholeskyFactor& bf, const EllipsoidProjector* proj, double sub_tol,
                           int max_sub_iter, AdmmState* warm) {
    const int n = b.dim();
    if (static_cast<int>(c.size()) != n || c.size() != w.size())
        fail(ErrorCode::dimension_mismatch, "subproblem_tau_zero: size mismatch");

    if (rho_eps_value == 0.0) {
        // linear maximization over the ellipsoid: x = B^-1 c / sqrt(c^T B^-1 c)
        if (norm2(c) == 0.0) return Vector(n, 0.0);
        Vector z = bf.solve(c);
        double denom = std::sqrt(dot(c, z));
        scale(z, 1.0 / denom);
        return z;
    }
    if (b.is_diagonal()) {
        // coordinate-wise threshold, rescaled to the boundary
        Vector d(n, 0.0);
        bool any = false;
        for (int i = 0; i < n; ++i) {
            double v = soft_threshold(c[i], 0.5 * rho_eps_value * w[i]);
            if (v != 0.0) {
                d[i] = v / b(i, i);
                any = true;
            }
        }
        if (!any) return Vector(n, 0.0);  // over-regularized
        double q = quad_form(b, d);
        scale(d, 1.0 / std::sqrt(q));
        return d;
    }
    if (!proj) fail(ErrorCode::invalid_argument, "subproblem_tau_zero: projector required for non-diagonal B");
    return admm_tau_zero(c, w, rho_eps_value, b, *proj, sub_tol, max_sub_iter, warm);
}

Vector subproblem_tau_pos(const Vector& s, const Vector& w, double lambda, const SymMatrix& b,
                          const EllipsoidProjector& proj, double sub_tol, int max_sub_iter,
                          AdmmState* warm) {
    if (s.size() != w.size()) fail(ErrorCode::dimension_mismatch, "subproblem_tau_pos: size mismatch");
    if (lambda < 0.0) fail(ErrorCode::invalid_argument, "subproblem_tau_pos: lambda must be >= 0");

    if (lambda == 0.0) return proj.project(s);

    Vector xu(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) xu[i] = soft_threshold(s[i], 0.5 * lambda * w[i]);
    if (quad_form(b, xu) <= 1.0) return xu;  // unconstrained minimizer is feasible

    return admm_tau_pos(s, w, lambda, b, proj, sub_tol, max_sub_iter, warm);
}

std::pair<Solution, Trace> solve(const Problem& problem, const SolverConfig& config) {
    config.validate();
    const int n = problem.a.dim();
    const double re = config.rho_eps();

    double lam_min = config.lambda_min_hint ? *config.lambda_min_hint : lambda_min(problem.a);
    double tau_floor = std::max(0.0, -lam_min);
    double tau = config.tau.value_or(tau_floor);
    if (tau < tau_floor - 1e-9)
        fail(ErrorCode::invalid_argument, "solve: tau below max(0, -lambda_min(A)) = " + std::to_string(tau_floor));
    if (tau < 0.0) tau = 0.0;

    Vector x;
    if (config.init) {
        x = *config.init;
        if (static_cast<int>(x.size()) != n) fail(ErrorCode::dimension_mismatch, "solve: init size mismatch");
        double q = quad_form(problem.b, x);
        if (q > 1.0 + 1e-9) fail(ErrorCode::invalid_argument, "solve: init outside {x : x^T B x <= 1}");
        if (q > 1.0) scale(x, 1.0 / std::sqrt(q));
    } else {
        x.assign(n, 1.0);
        double q = quad_form(problem.b, x);
        scale(x, 1.0 / std::sqrt(q));
    }

    const bool need_projector = (tau > 0.0 && re >= 0.0) || (tau == 0.0 && re > 0.0 && !problem.b.is_diagonal());
    std::optional<EllipsoidProjector> proj;
    if (need_projector) proj.emplace(problem.b);

    Trace trace;
    trace.entries.reserve(std::min(config.max_iter, 4096));
    Solution sol;
    AdmmState warm;

    int it = 0;
    bool converged = false;
    for (; it < config.max_iter; ++it) {
        Vector w = weights(x, config.epsilon);
        Vector x_next;
        try {
            if (tau == 0.0) {
                Vector c = problem.a.apply(x);
                x_next = subproblem_tau_zero(c, w, re, problem.b, problem.b_factor,
                                             proj ? &*proj : nullptr, config.sub_tol,
                                             config.max_sub_iter, &warm);
            } else {
                Vector s = problem.a.apply(x);
                for (int i = 0; i < n; ++i) s[i] = s[i] / tau + x[i];
                x_next = subproblem_tau_pos(s, w, re / tau, problem.b, *proj, config.sub_tol,
                                            config.max_sub_iter, &warm);
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::max_sub_iterations)
                fail(e.code(), std::string(e.what()) + " (outer iteration " + std::to_string(it) + ")");
            throw;
        }
        double step = dist2(x_next, x);
        trace.entries.push_back({penalized_objective(x_next, problem.a, re, config.epsilon), step,
                                 cardinality(x_next, config.zero_tol), quad_form(problem.b, x_next)});
        x = std::move(x_next);
        if (step < config.tol_step) {
            converged = true;
            ++it;
            break;
        }
    }

    canonical_sign(x);
    sol.x = x;
    sol.objective = quad_form(problem.a, x);
    sol.penalized_objective = penalized_objective(x, problem.a, re, config.epsilon);
    sol.cardinality = cardinality(x, config.zero_tol);
    sol.iterations = it;
    sol.converged = converged;
    return {std::move(sol), std::move(trace)};
}

std::pair<Vector, double> variational_renormalization(const Vector& x, const SymMatrix& a,
                                                      const SymMatrix& b, double zero_tol) {
    if (a.dim() != b.dim() || static_cast<int>(x.size()) != a.dim())
        fail(ErrorCode::dimension_mismatch, "variational_renormalization: size mismatch");
    std::vector<int> support;
    for (int i = 0; i < a.dim(); ++i)
        if (std::abs(x[i]) > zero_tol) support.push_back(i);
    if (support.empty()) fail(ErrorCode::empty_support, "variational_renormalization: x has empty support");

    SymMatrix ak = a.submatrix(support);
    SymMatrix bk = b.submatrix(support);
    CholeskyFactor fk = cholesky(bk);
    auto [lam, u] = generalized_eigen_max(ak, fk);

    double align = 0.0;
    for (std::size_t j = 0; j < support.size(); ++j) align += u[j] * x[support[j]];
    if (align < 0.0)
        for (double& v : u) v = -v;

    Vector out(x.size(), 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) out[support[j]] = u[j];
    return {std::move(out), lam};
}

}  // namespace sgev
