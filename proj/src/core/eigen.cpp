#include "eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sgev {

Vector EigenDecomposition::vector(int k) const {
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v[i] = vecs_[static_cast<std::size_t>(i) * n_ + k];
    return v;
}

Vector EigenDecomposition::to_basis(const Vector& x) const {
    if (static_cast<int>(x.size()) != n_) fail(ErrorCode::dimension_mismatch, "to_basis: size mismatch");
    Vector r(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* row = vecs_.data() + static_cast<std::size_t>(i) * n_;
        for (int k = 0; k < n_; ++k) r[k] += row[k] * x[i];
    }
    return r;
}

Vector EigenDecomposition::from_basis(const Vector& x) const {
    if (static_cast<int>(x.size()) != n_) fail(ErrorCode::dimension_mismatch, "from_basis: size mismatch");
    Vector r(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* row = vecs_.data() + static_cast<std::size_t>(i) * n_;
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += row[k] * x[k];
        r[i] = s;
    }
    return r;
}

EigenDecomposition full_eigen(const SymMatrix& s, int max_sweeps) {
    const int n = s.dim();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = s(i, j);
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    double scale_ref = std::max(s.max_abs(), 1e-300);
    const double skip_tol = 1e-15 * scale_ref;
    const double done_tol = 5e-15 * scale_ref;

    bool converged = (n == 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                off = std::max(off, std::abs(apq));
                if (std::abs(apq) <= skip_tol) continue;
                double app = A(p, p), aqq = A(q, q);
                double theta = 0.5 * (aqq - app) / apq;
                double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double sn = t * c;

                for (int k = 0; k < n; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - sn * akq;
                    A(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - sn * aqk;
                    A(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - sn * vkq;
                    V(k, q) = sn * vkp + c * vkq;
                }
            }
        }
        if (off <= done_tol) converged = true;
    }
    if (!converged) fail(ErrorCode::not_converged, "full_eigen: Jacobi did not converge in " +
                                                       std::to_string(max_sweeps) + " sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return A(i, i) > A(j, j); });

    EigenDecomposition e;
    e.n_ = n;
    e.values_.resize(n);
    e.vecs_.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        e.values_[k] = A(order[k], order[k]);
        for (int i = 0; i < n; ++i) e.vecs_[static_cast<std::size_t>(i) * n + k] = V(i, order[k]);
    }
    return e;
}

std::pair<double, Vector> lambda_max_shifted_power(const SymMatrix& s, double rel_tol, int max_iter) {
    const int n = s.dim();
    double shift = s.gershgorin_bound();
    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lam = 0.0;
    unsigned long long lcg = 0x9e3779b97f4a7c15ull;
    for (int it = 0; it < max_iter; ++it) {
        Vector y = s.apply(x);
        double rayleigh = dot(x, y);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = y[i] - rayleigh * x[i];
            res += r * r;
        }
        lam = rayleigh;
        if (std::sqrt(res) <= rel_tol * (1.0 + std::abs(rayleigh))) return {lam, x};
        for (int i = 0; i < n; ++i) y[i] += shift * x[i];
        double nrm = norm2(y);
        if (nrm == 0.0 || (it > 0 && it % 2000 == 0)) {
            // restart deterministically; covers starts orthogonal to the leading direction
            for (int i = 0; i < n; ++i) {
                lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
                y[i] = static_cast<double>(lcg >> 11) / 9.007199254740992e15 - 0.5;
            }
            nrm = norm2(y);
        }
        scale(y, 1.0 / nrm);
        x = std::move(y);
    }
    fail(ErrorCode::not_converged, "shifted power iteration: no convergence");
}

double lambda_min(const SymMatrix& s, int jacobi_limit) {
    const int n = s.dim();
    if (n <= jacobi_limit) {
        EigenDecomposition e = full_eigen(s);
        return e.values().back();
    }
    // power iteration on (c I - S): dominant eigenvalue c - lambda_min(S)
    double c = s.gershgorin_bound();
    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int it = 0; it < 200000; ++it) {
        Vector sx = s.apply(x);
        Vector y(n);
        for (int i = 0; i < n; ++i) y[i] = c * x[i] - sx[i];
        double mu = dot(x, y);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = y[i] - mu * x[i];
            res += r * r;
        }
        if (std::sqrt(res) <= 1e-9 * (1.0 + std::abs(mu))) return c - mu;
        double nrm = norm2(y);
        if (nrm == 0.0) return c;  // S == c I on this vector; degenerate
        scale(y, 1.0 / nrm);
        x = std::move(y);
    }
    fail(ErrorCode::not_converged, "lambda_min: power iteration did not converge");
}

std::pair<double, Vector> generalized_eigen_max(const SymMatrix& a, const CholeskyFactor& bf) {
    const int n = a.dim();
    if (bf.dim() != n) fail(ErrorCode::dimension_mismatch, "generalized_eigen_max: size mismatch");
    // W = L^-1 A L^-T, column by column
    Matrix y(n, n);
    for (int j = 0; j < n; ++j) {
        Vector col(n);
        for (int i = 0; i < n; ++i) col[i] = a(i, j);
        Vector sol = bf.solve_lower(col);
        for (int i = 0; i < n; ++i) y(i, j) = sol[i];
    }
    SymMatrix w(n);
    for (int i = 0; i < n; ++i) {
        Vector row(n);
        for (int j = 0; j < n; ++j) row[j] = y(i, j);
        Vector sol = bf.solve_lower(row);
        for (int j = 0; j < n; ++j) w.at(i, j) = sol[j];
    }
    // symmetrize roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (w(i, j) + w(j, i));
            w.at(i, j) = v;
            w.at(j, i) = v;
        }
    EigenDecomposition e = full_eigen(w);
    Vector x = bf.solve_upper(e.vector(0));
    return {e.values()[0], x};
}

}  // namespace sgev
