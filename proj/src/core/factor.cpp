#include "factor.hpp"

#include <cmath>
#include <string>

namespace sgev {

CholeskyFactor cholesky(const SymMatrix& b, double pivot_tol) {
    const int n = b.dim();
    if (pivot_tol < 0.0) pivot_tol = 1e-12 * b.trace() / n;

    CholeskyFactor f;
    f.n_ = n;
    f.l_.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto L = [&](int i, int j) -> double& { return f.l_[static_cast<std::size_t>(i) * n + j]; };

    for (int j = 0; j < n; ++j) {
        double d = b(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (d <= pivot_tol)
            fail(ErrorCode::not_positive_definite,
                 "cholesky: pivot " + std::to_string(d) + " at column " + std::to_string(j));
        double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = b(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }
    return f;
}

Vector CholeskyFactor::solve_lower(const Vector& b) const {
    if (static_cast<int>(b.size()) != n_) fail(ErrorCode::dimension_mismatch, "solve_lower: size mismatch");
    Vector y(b);
    for (int i = 0; i < n_; ++i) {
        double s = y[i];
        const double* row = l_.data() + static_cast<std::size_t>(i) * n_;
        for (int k = 0; k < i; ++k) s -= row[k] * y[k];
        y[i] = s / row[i];
    }
    return y;
}

Vector CholeskyFactor::solve_upper(const Vector& b) const {
    if (static_cast<int>(b.size()) != n_) fail(ErrorCode::dimension_mismatch, "solve_upper: size mismatch");
    Vector y(b);
    for (int i = n_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n_; ++k) s -= l_[static_cast<std::size_t>(k) * n_ + i] * y[k];
        y[i] = s / l_[static_cast<std::size_t>(i) * n_ + i];
    }
    return y;
}

Vector CholeskyFactor::solve(const Vector& b) const { return solve_upper(solve_lower(b)); }

Vector CholeskyFactor::apply_lt(const Vector& x) const {
    if (static_cast<int>(x.size()) != n_) fail(ErrorCode::dimension_mismatch, "apply_lt: size mismatch");
    Vector y(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = i; k < n_; ++k) y[i] += l_[static_cast<std::size_t>(k) * n_ + i] * x[k];
    return y;
}

double CholeskyFactor::log_det() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += std::log(l_[static_cast<std::size_t>(i) * n_ + i]);
    return 2.0 * s;
}

}  // namespace sgev
