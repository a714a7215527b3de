#include "projection.hpp"

#include <cmath>

namespace sgev {

EllipsoidProjector::EllipsoidProjector(const SymMatrix& b) : eig_(full_eigen(b)) {
    if (eig_.values().back() <= 0.0)
        fail(ErrorCode::not_positive_definite, "EllipsoidProjector: B is not positive definite");
}

Vector EllipsoidProjector::project(const Vector& s) const {
    const int n = eig_.dim();
    if (static_cast<int>(s.size()) != n) fail(ErrorCode::dimension_mismatch, "project: size mismatch");
    const Vector& lam = eig_.values();
    Vector t = eig_.to_basis(s);

    double q0 = 0.0;
    for (int i = 0; i < n; ++i) q0 += lam[i] * t[i] * t[i];
    if (q0 <= 1.0) return s;

    auto g = [&](double mu, double& deriv) {
        double val = -1.0, d = 0.0;
        for (int i = 0; i < n; ++i) {
            double den = 1.0 + mu * lam[i];
            double zi = t[i] / den;
            double term = lam[i] * zi * zi;
            val += term;
            d -= 2.0 * term * lam[i] / den;
        }
        deriv = d;
        return val;
    };

    // bracket: g(0) > 0, g decreasing; double hi until negative
    double lo = 0.0, hi = 1.0, d;
    int guard = 0;
    while (g(hi, d) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 400) fail(ErrorCode::not_converged, "project: bracketing failed");
    }

    double mu = lo;
    bool solved = false;
    for (int it = 0; it < 200; ++it) {
        double val = g(mu, d);
        if (std::abs(val) <= 1e-10) {
            solved = true;
            break;
        }
        if (val > 0.0)
            lo = mu;
        else
            hi = mu;
        double next = mu - val / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
        mu = next;
    }
    if (!solved) fail(ErrorCode::not_converged, "project: secular equation root find failed");

    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = t[i] / (1.0 + mu * lam[i]);
    return eig_.from_basis(z);
}

Vector project_ellipsoid(const Vector& s, const SymMatrix& b) {
    return EllipsoidProjector(b).project(s);
}

}  // namespace sgev
