#pragma once

#include <random>

#include "core/eigen.hpp"
#include "core/matrix.hpp"

namespace testutil {

using sgev::Matrix;
using sgev::SymMatrix;
using sgev::Vector;

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& gen, int n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (double& x : v) x = normal(gen);
    return v;
}

inline SymMatrix random_symmetric(std::mt19937_64& gen, int n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    SymMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = normal(gen);
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    return s;
}

// M M^T + n * 1e-3 I, comfortably SPD
inline SymMatrix random_spd(std::mt19937_64& gen, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = normal(gen);
    SymMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += m(i, k) * m(j, k);
            if (i == j) acc += n * 1e-3;
            s.at(i, j) = acc;
            s.at(j, i) = acc;
        }
    return s;
}

// C^T C with C p-by-n, PSD by construction
inline SymMatrix random_psd(std::mt19937_64& gen, int n, int p = -1) {
    if (p < 0) p = n + 2;
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix c(p, n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = normal(gen);
    SymMatrix s(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b <= n - 1; ++b) {
            double acc = 0.0;
            for (int k = 0; k < p; ++k) acc += c(k, a) * c(k, b);
            s.at(a, b) = acc;
            s.at(b, a) = acc;
        }
    return s;
}

inline Matrix random_dense(std::mt19937_64& gen, int rows, int cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
    return m;
}

}  // namespace testutil
