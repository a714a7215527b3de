#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/projection.hpp"
#include "helpers.hpp"

using namespace sgev;
using testutil::random_spd;
using testutil::random_symmetric;
using testutil::random_vector;

TEST_CASE("matvec identity and diagonal") {
    SymMatrix i3 = SymMatrix::identity(3);
    Vector v{1, 2, 3};
    CHECK(i3.apply(v) == v);

    SymMatrix d = SymMatrix::diagonal({2, 1});
    Vector r = d.apply({1, 1});
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(r[1] == doctest::Approx(1.0));
}

TEST_CASE("matvec matches a naive double loop") {
    auto gen = testutil::rng(11);
    SymMatrix s = random_symmetric(gen, 8);
    Vector v = random_vector(gen, 8);
    Vector got = s.apply(v);
    for (int i = 0; i < 8; ++i) {
        double want = 0.0;
        for (int j = 0; j < 8; ++j) want += s(i, j) * v[j];
        CHECK(std::abs(got[i] - want) <= 1e-12);
    }
}

TEST_CASE("matvec bilinear symmetry") {
    auto gen = testutil::rng(12);
    for (int t = 0; t < 20; ++t) {
        SymMatrix s = random_symmetric(gen, 7);
        Vector v = random_vector(gen, 7), w = random_vector(gen, 7);
        CHECK(std::abs(dot(s.apply(v), w) - dot(s.apply(w), v)) <= 1e-10);
    }
}

TEST_CASE("asymmetric input rejected or symmetrized per flag") {
    std::vector<double> buf{1.0, 2.0, 0.5, 1.0};
    CHECK_THROWS_WITH_AS(SymMatrix(2, buf, SymMatrix::OnAsymmetric::reject), doctest::Contains("asymmetric"),
                         Error);
    SymMatrix s(2, buf, SymMatrix::OnAsymmetric::symmetrize);
    CHECK(s(0, 1) == doctest::Approx(1.25));
    CHECK(s(1, 0) == doctest::Approx(1.25));

    std::vector<double> bad{1.0, std::nan(""), std::nan(""), 1.0};
    CHECK_THROWS_AS(SymMatrix(2, bad, SymMatrix::OnAsymmetric::symmetrize), Error);
}

TEST_CASE("cholesky hand-checked cases") {
    CholeskyFactor f = cholesky(SymMatrix::identity(2));
    CHECK(f.l(0, 0) == doctest::Approx(1.0));
    CHECK(f.l(1, 1) == doctest::Approx(1.0));

    SymMatrix b(2);
    b.set(0, 0, 4);
    b.set(0, 1, 2);
    b.set(1, 1, 3);
    f = cholesky(b);
    CHECK(f.l(0, 0) == doctest::Approx(2.0));
    CHECK(f.l(1, 0) == doctest::Approx(1.0));
    CHECK(f.l(1, 1) == doctest::Approx(std::sqrt(2.0)));

    SymMatrix notpd(2);
    notpd.set(0, 0, 1);
    notpd.set(0, 1, 2);
    notpd.set(1, 1, 1);
    CHECK_THROWS_AS(cholesky(notpd), Error);
}

TEST_CASE("cholesky reconstruction on random SPD matrices") {
    auto gen = testutil::rng(13);
    for (int t = 0; t < 10; ++t) {
        int n = 3 + static_cast<int>(gen() % 12);
        SymMatrix b = random_spd(gen, n);
        CholeskyFactor f = cholesky(b);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k <= std::min(i, j); ++k) acc += f.l(i, k) * f.l(j, k);
                worst = std::max(worst, std::abs(acc - b(i, j)));
            }
        CHECK(worst <= 1e-10 * std::max(1.0, b.max_abs()));
    }
}

TEST_CASE("full_eigen diagonal and 2x2 exchange") {
    EigenDecomposition e = full_eigen(SymMatrix::diagonal({3, 1, 2}));
    CHECK(e.values()[0] == doctest::Approx(3.0));
    CHECK(e.values()[1] == doctest::Approx(2.0));
    CHECK(e.values()[2] == doctest::Approx(1.0));
    CHECK(std::abs(e.vector(0)[0]) == doctest::Approx(1.0));
    CHECK(std::abs(e.vector(1)[2]) == doctest::Approx(1.0));
    CHECK(std::abs(e.vector(2)[1]) == doctest::Approx(1.0));

    SymMatrix x(2);
    x.set(0, 1, 1.0);
    e = full_eigen(x);
    CHECK(e.values()[0] == doctest::Approx(1.0));
    CHECK(e.values()[1] == doctest::Approx(-1.0));
    Vector v0 = e.vector(0);
    CHECK(std::abs(v0[0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(v0[0] * v0[1] > 0);  // (1,1)/sqrt(2) up to sign
}

TEST_CASE("full_eigen residuals, orthonormality, trace and determinant") {
    auto gen = testutil::rng(14);
    for (int t = 0; t < 8; ++t) {
        int n = 4 + static_cast<int>(gen() % 16);
        SymMatrix s = random_symmetric(gen, n);
        EigenDecomposition e = full_eigen(s);

        double trace_sum = 0.0;
        for (int k = 0; k < n; ++k) {
            trace_sum += e.values()[k];
            Vector v = e.vector(k);
            Vector sv = s.apply(v);
            double res = 0.0;
            for (int i = 0; i < n; ++i) {
                double d = sv[i] - e.values()[k] * v[i];
                res += d * d;
            }
            CHECK(std::sqrt(res) <= 1e-8 * (1.0 + std::abs(e.values()[k])));
            for (int m = 0; m < n; ++m) {
                double expect = (m == k) ? 1.0 : 0.0;
                CHECK(std::abs(dot(v, e.vector(m)) - expect) <= 1e-8);
            }
        }
        CHECK(std::abs(trace_sum - s.trace()) <= 1e-10 * std::max(1.0, std::abs(s.trace())));

        // determinant identity via Cholesky of the shifted matrix
        double shift = s.gershgorin_bound() + 1.0;
        SymMatrix shifted = s;
        for (int i = 0; i < n; ++i) shifted.at(i, i) += shift;
        double logdet = cholesky(shifted).log_det();
        double logprod = 0.0;
        for (double lam : e.values()) logprod += std::log(lam + shift);
        CHECK(std::abs(logdet - logprod) <= 1e-8 * std::max(1.0, std::abs(logdet)));
    }
}

TEST_CASE("lambda_min basics and the CCA block") {
    CHECK(lambda_min(SymMatrix::diagonal({5, -2})) == doctest::Approx(-2.0));
    CHECK(lambda_min(SymMatrix::identity(4)) == doctest::Approx(1.0));

    // A = [[0, Sxy],[Syx, 0]] with random 4+4 blocks
    auto gen = testutil::rng(15);
    SymMatrix a(8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double v = testutil::random_vector(gen, 1)[0];
            a.set(i, 4 + j, v);
        }
    double lm = lambda_min(a);
    double oracle = full_eigen(a).values().back();
    CHECK(std::abs(lm - oracle) <= 1e-8);
}

TEST_CASE("lambda_min power-iteration path agrees with the Jacobi oracle") {
    auto gen = testutil::rng(16);
    for (int t = 0; t < 5; ++t) {
        SymMatrix s = random_symmetric(gen, 40);
        double via_power = lambda_min(s, /*jacobi_limit=*/1);
        double via_jacobi = lambda_min(s);
        CHECK(std::abs(via_power - via_jacobi) <= 1e-6 * (1.0 + std::abs(via_jacobi)));
    }
}

TEST_CASE("project_ellipsoid interior and radial cases") {
    SymMatrix i2 = SymMatrix::identity(2);
    Vector inside = project_ellipsoid({0.5, 0.0}, i2);
    CHECK(inside[0] == 0.5);
    CHECK(inside[1] == 0.0);

    Vector radial = project_ellipsoid({2.0, 0.0}, i2);
    CHECK(radial[0] == doctest::Approx(1.0));
    CHECK(radial[1] == doctest::Approx(0.0).epsilon(1e-12));
}

namespace {

// boundary-parametrization grid oracle for 2-D ellipsoids
Vector grid_project_2d(const Vector& s, const SymMatrix& b) {
    EigenDecomposition e = full_eigen(b);
    double best = 1e300;
    Vector best_x(2, 0.0);
    const int steps = 2'000'000;
    for (int k = 0; k < steps; ++k) {
        double theta = 2.0 * M_PI * k / steps;
        Vector z{std::cos(theta) / std::sqrt(e.values()[0]), std::sin(theta) / std::sqrt(e.values()[1])};
        Vector x = e.from_basis(z);
        double d = dist2(x, s);
        if (d < best) {
            best = d;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace

TEST_CASE("project_ellipsoid matches the boundary grid oracle") {
    SymMatrix b = SymMatrix::diagonal({1.0, 4.0});
    Vector s{3.0, 4.0};
    Vector got = project_ellipsoid(s, b);
    Vector want = grid_project_2d(s, b);
    CHECK(std::abs(got[0] - want[0]) <= 1e-5);
    CHECK(std::abs(got[1] - want[1]) <= 1e-5);
    CHECK(std::abs(quad_form(b, got) - 1.0) <= 1e-10);
}

TEST_CASE("project_ellipsoid feasibility and idempotence") {
    auto gen = testutil::rng(17);
    for (int t = 0; t < 25; ++t) {
        int n = 2 + static_cast<int>(gen() % 8);
        SymMatrix b = random_spd(gen, n);
        EllipsoidProjector proj(b);
        Vector s = random_vector(gen, n, 3.0);
        Vector x = proj.project(s);
        CHECK(quad_form(b, x) <= 1.0 + 1e-9);
        Vector x2 = proj.project(x);
        CHECK(dist2(x, x2) <= 1e-10);
        if (quad_form(b, s) <= 1.0) CHECK(x == s);
    }
}
