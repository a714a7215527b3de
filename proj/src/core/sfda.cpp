#include "sfda.hpp"

#include <cmath>
#include <string>

namespace sgev::fda {

namespace {

void ridge_until_spd(SymMatrix& s, double gamma) {
    try {
        cholesky(s);
        return;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::not_positive_definite) throw;
    }
    double add = gamma * s.trace() / s.dim();
    for (int k = 0; k < 40; ++k) {
        for (int i = 0; i < s.dim(); ++i) s.at(i, i) += add;
        try {
            cholesky(s);
            return;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::not_positive_definite) throw;
            add *= 10.0;
        }
    }
    fail(ErrorCode::not_positive_definite, "FdaInput: scatter matrix not stabilizable");
}

}  // namespace

FdaInput::FdaInput(const Vector& mu1, const Vector& mu2, const SymMatrix& s1, const SymMatrix& s2,
                   double ridge_gamma) {
    if (mu1.size() != mu2.size() || s1.dim() != s2.dim() ||
        static_cast<int>(mu1.size()) != s1.dim())
        fail(ErrorCode::dimension_mismatch, "FdaInput: inconsistent dimensions");
    a.resize(mu1.size());
    for (std::size_t i = 0; i < mu1.size(); ++i) a[i] = mu1[i] - mu2[i];
    if (norm2(a) == 0.0) fail(ErrorCode::invalid_argument, "FdaInput: identical class means");
    b = SymMatrix(s1.dim());
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) b.at(i, j) = s1(i, j) + s2(i, j);
    ridge_until_spd(b, ridge_gamma);
    b_factor = cholesky(b);
}

FdaInput::FdaInput(Vector a_in, SymMatrix b_in, double ridge_gamma) : a(std::move(a_in)), b(std::move(b_in)) {
    if (static_cast<int>(a.size()) != b.dim())
        fail(ErrorCode::dimension_mismatch, "FdaInput: inconsistent dimensions");
    if (norm2(a) == 0.0) fail(ErrorCode::invalid_argument, "FdaInput: a must be nonzero");
    ridge_until_spd(b, ridge_gamma);
    b_factor = cholesky(b);
}

Vector fda_direction(const Vector& a, const CholeskyFactor& bf) {
    Vector z = bf.solve(a);
    double denom = dot(a, z);
    if (denom <= 0.0) fail(ErrorCode::invalid_argument, "fda_direction: a^T B^-1 a must be positive");
    scale(z, 1.0 / denom);
    return z;
}

namespace {

// Equality-constrained quadratic prox, factorization shared across calls.
struct KktBlock {
    CholeskyFactor k;  // K = 2B + rho I
    Vector ka;         // K^-1 a
    double aka;        // a^T K^-1 a
    Vector a;
    double rho;

    KktBlock(const SymMatrix& b, const Vector& a_in, double rho_in) : a(a_in), rho(rho_in) {
        SymMatrix m = b;
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j) m.at(i, j) = 2.0 * b(i, j) + (i == j ? rho : 0.0);
        k = cholesky(m);
        ka = k.solve(a);
        aka = dot(a, ka);
    }

    // argmin x^T B x + (rho/2)||x - v||^2  s.t. a^T x = 1
    Vector solve(const Vector& v) const {
        Vector rhs = scaled(v, rho);
        Vector x = k.solve(rhs);
        double mu = (dot(a, x) - 1.0) / aka;
        axpy(-mu, ka, x);
        return x;
    }
};

Vector admm_equality_l1(const SymMatrix& b, const Vector& a, const Vector& w_times_nu, double sub_tol,
                        int max_sub_iter, const Vector& x_start) {
    const std::size_t n = a.size();
    double rho = std::max(1e-12, 2.0 * b.trace() / b.dim());
    KktBlock kkt(b, a, rho);

    Vector z = x_start, u(n, 0.0), x(n, 0.0);
    for (int it = 0; it < max_sub_iter; ++it) {
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i] - u[i];
        x = kkt.solve(v);
        Vector z_old = z;
        double r = 0.0, s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = soft_threshold(x[i] + u[i], w_times_nu[i] / rho);
            u[i] += x[i] - z[i];
            double rd = x[i] - z[i], sd = z[i] - z_old[i];
            r += rd * rd;
            s += sd * sd;
        }
        r = std::sqrt(r);
        s = rho * std::sqrt(s);
        if (r <= sub_tol && s <= sub_tol) {
            // carry z's exact zeros onto x, fixing feasibility on the support
            Vector out = x;
            for (std::size_t i = 0; i < n; ++i)
                if (z[i] == 0.0 && std::abs(out[i]) <= 10.0 * sub_tol) out[i] = 0.0;
            double resid = 1.0 - dot(a, out);
            if (resid != 0.0) {
                double denom = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (out[i] != 0.0) denom += a[i] * a[i];
                if (denom > 0.0) {
                    for (std::size_t i = 0; i < n; ++i)
                        if (out[i] != 0.0) out[i] += a[i] * resid / denom;
                } else {
                    axpy(resid / dot(a, a), a, out);
                }
            }
            return out;
        }
    }
    fail(ErrorCode::max_sub_iterations, "sfda: ADMM exceeded max iterations");
}

}  // namespace

Vector sfda_step(const SymMatrix& b, const Vector& a, const Vector& x_l, double nu_eps, double epsilon,
                 double sub_tol, int max_sub_iter) {
    if (a.size() != x_l.size() || static_cast<int>(a.size()) != b.dim())
        fail(ErrorCode::dimension_mismatch, "sfda_step: size mismatch");
    if (nu_eps < 0.0) fail(ErrorCode::invalid_argument, "sfda_step: nu_eps must be >= 0");
    if (nu_eps == 0.0) return fda_direction(a, cholesky(b));
    Vector wn = weights(x_l, epsilon);
    for (double& v : wn) v *= nu_eps;
    return admm_equality_l1(b, a, wn, sub_tol, max_sub_iter, x_l);
}

std::pair<FdaSolution, std::vector<FdaTraceEntry>> sfda_solve(const FdaInput& input, double nu,
                                                              const SolverConfig& config) {
    if (nu < 0.0) fail(ErrorCode::invalid_argument, "sfda_solve: nu must be >= 0");
    const double nu_eps = nu / std::log1p(1.0 / config.epsilon);

    auto surrogate = [&](const Vector& x) {
        double s = 0.0;
        for (double v : x) s += std::log(config.epsilon + std::abs(v));
        return quad_form(input.b, x) + nu_eps * s;
    };

    std::vector<FdaTraceEntry> trace;
    Vector x = fda_direction(input.a, input.b_factor);
    FdaSolution sol;
    if (nu_eps == 0.0) {
        trace.push_back({surrogate(x), 0.0, std::abs(dot(input.a, x) - 1.0),
                         cardinality(x, config.zero_tol)});
        sol.converged = true;
        sol.iterations = 1;
    } else {
        int it = 0;
        for (; it < config.max_iter; ++it) {
            Vector x_next = sfda_step(input.b, input.a, x, nu_eps, config.epsilon, config.sub_tol,
                                      config.max_sub_iter);
            double step = dist2(x_next, x);
            trace.push_back({surrogate(x_next), step, std::abs(dot(input.a, x_next) - 1.0),
                             cardinality(x_next, config.zero_tol)});
            x = std::move(x_next);
            if (step < config.tol_step) {
                sol.converged = true;
                ++it;
                break;
            }
        }
        sol.iterations = it;
    }
    sol.quad = quad_form(input.b, x);
    sol.fisher = 1.0 / sol.quad;
    sol.cardinality = cardinality(x, config.zero_tol);
    sol.x = std::move(x);
    return {std::move(sol), std::move(trace)};
}

Vector sfda_lasso(const FdaInput& input, double nu, double sub_tol, int max_sub_iter) {
    if (nu < 0.0) fail(ErrorCode::invalid_argument, "sfda_lasso: nu must be >= 0");
    Vector x0 = fda_direction(input.a, input.b_factor);
    if (nu == 0.0) return x0;
    Vector wn(input.a.size(), nu);
    return admm_equality_l1(input.b, input.a, wn, sub_tol, max_sub_iter, x0);
}

Vector sfda_lasso_constrained(const FdaInput& input, double k, double sub_tol) {
    if (k <= 0.0) fail(ErrorCode::invalid_argument, "sfda_lasso_constrained: k must be > 0");
    auto l1 = [](const Vector& v) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
    };
    Vector x = sfda_lasso(input, 0.0, sub_tol);
    if (l1(x) <= k) return x;

    double lo = 0.0, hi = 1.0;
    Vector xh = sfda_lasso(input, hi, sub_tol);
    int guard = 0;
    while (l1(xh) > k) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60)
            fail(ErrorCode::invalid_argument, "sfda_lasso_constrained: budget below the feasible minimum");
        xh = sfda_lasso(input, hi, sub_tol);
    }
    Vector best = xh;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        Vector xm = sfda_lasso(input, mid, sub_tol);
        if (l1(xm) <= k) {
            best = xm;
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return best;
}

}  // namespace sgev::fda
