#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace sgev {

using Vector = std::vector<double>;
using Index = std::ptrdiff_t;

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) fail(ErrorCode::dimension_mismatch, "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vector& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double dist2(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline void scale(Vector& a, double c) {
    for (double& v : a) v *= c;
}

inline Vector scaled(const Vector& a, double c) {
    Vector r(a);
    scale(r, c);
    return r;
}

// a += c*b
inline void axpy(double c, const Vector& b, Vector& a) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline bool all_finite(const Vector& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double soft_threshold(double v, double t) {
    double m = std::abs(v) - t;
    return m > 0.0 ? std::copysign(m, v) : 0.0;
}

inline int count_above(const Vector& x, double zero_tol) {
    int c = 0;
    for (double v : x)
        if (std::abs(v) > zero_tol) ++c;
    return c;
}

}  // namespace sgev
