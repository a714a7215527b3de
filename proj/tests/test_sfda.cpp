#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "core/scca.hpp"
#include "core/sfda.hpp"
#include "helpers.hpp"

using namespace sgev;
using namespace sgev::fda;
using testutil::random_spd;
using testutil::random_vector;

namespace {

double l1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

// random feasible point on a^T x = 1
Vector random_feasible(std::mt19937_64& gen, const Vector& a) {
    Vector v = random_vector(gen, static_cast<int>(a.size()));
    double av = dot(a, v);
    double aa = dot(a, a);
    // v + a (1 - a.v)/a.a
    axpy((1.0 - av) / aa, a, v);
    return v;
}

}  // namespace

TEST_CASE("fda_direction hand cases") {
    CholeskyFactor fi = cholesky(SymMatrix::identity(2));
    Vector x = fda_direction({2, 0}, fi);
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.0));

    CholeskyFactor fd = cholesky(SymMatrix::diagonal({1, 4}));
    Vector y = fda_direction({1, 1}, fd);
    CHECK(y[0] == doctest::Approx(0.8));
    CHECK(y[1] == doctest::Approx(0.2));
}

TEST_CASE("fda_direction minimizes x^T B x over random feasible perturbations") {
    auto gen = testutil::rng(51);
    for (int t = 0; t < 3; ++t) {
        int n = 5 + static_cast<int>(gen() % 6);
        SymMatrix b = random_spd(gen, n);
        Vector a = random_vector(gen, n);
        Vector x = fda_direction(a, cholesky(b));
        CHECK(std::abs(dot(a, x) - 1.0) <= 1e-12);
        double fx = quad_form(b, x);
        for (int k = 0; k < 10000; ++k) {
            Vector y = random_feasible(gen, a);
            CHECK(fx <= quad_form(b, y) + 1e-10);
        }
    }
}

TEST_CASE("sfda_step: nu = 0 returns the closed form; n = 1 pinned by the constraint") {
    auto gen = testutil::rng(52);
    SymMatrix b = random_spd(gen, 4);
    Vector a = random_vector(gen, 4);
    Vector dir = fda_direction(a, cholesky(b));
    Vector x = sfda_step(b, a, dir, 0.0, 2.22e-16, 1e-10);
    CHECK(dist2(x, dir) <= 1e-12);

    SymMatrix b1(1);
    b1.set(0, 0, 3.0);
    for (double nu : {0.0, 0.5, 10.0}) {
        Vector got = sfda_step(b1, {2.0}, {0.5}, nu, 2.22e-16, 1e-10);
        CHECK(got[0] == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("sfda_step satisfies the subgradient KKT system and a null-space grid") {
    auto gen = testutil::rng(53);
    for (int t = 0; t < 6; ++t) {
        const int n = 3;
        SymMatrix b = random_spd(gen, n);
        Vector a = random_vector(gen, n);
        Vector x_l = random_feasible(gen, a);
        double nu_eps = 0.4;
        double eps = 0.1;
        Vector x = sfda_step(b, a, x_l, nu_eps, eps, 1e-10, 100000);
        CHECK(std::abs(dot(a, x) - 1.0) <= 1e-8);

        // stationarity: 2Bx + nu_eps W g + mu a = 0 with g in the subgradient
        Vector w = weights(x_l, eps);
        Vector bx = b.apply(x);
        // least-squares mu over the active coordinates
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i)
            if (std::abs(x[i]) > 1e-7) {
                double gi = x[i] > 0 ? 1.0 : -1.0;
                num += (2.0 * bx[i] + nu_eps * w[i] * gi) * a[i];
                den += a[i] * a[i];
            }
        double mu = den > 0 ? -num / den : 0.0;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = 2.0 * bx[i] + mu * a[i];
            if (std::abs(x[i]) > 1e-7)
                worst = std::max(worst, std::abs(r + nu_eps * w[i] * (x[i] > 0 ? 1.0 : -1.0)));
            else
                worst = std::max(worst, std::max(0.0, std::abs(r) - nu_eps * w[i]));
        }
        CHECK(worst <= 1e-5 * (1.0 + b.max_abs()));

        // 2-D grid over the null space of a^T around x
        Vector n1 = random_vector(gen, n), n2 = random_vector(gen, n);
        axpy(-dot(a, n1) / dot(a, a), a, n1);
        axpy(-dot(a, n2) / dot(a, a), a, n2);
        auto objective = [&](const Vector& v) {
            double s = quad_form(b, v);
            for (int i = 0; i < n; ++i) s += nu_eps * w[i] * std::abs(v[i]);
            return s;
        };
        double fx = objective(x);
        for (int i = -40; i <= 40; ++i)
            for (int j = -40; j <= 40; ++j) {
                Vector y = x;
                axpy(i * 0.01, n1, y);
                axpy(j * 0.01, n2, y);
                CHECK(fx <= objective(y) + 1e-7);
            }
    }
}

TEST_CASE("sfda_solve: nu = 0 gives the closed form in one outer iteration") {
    auto gen = testutil::rng(54);
    SymMatrix b = random_spd(gen, 6);
    Vector mu1 = random_vector(gen, 6), mu2 = random_vector(gen, 6);
    FdaInput input(mu1, mu2, b, SymMatrix::identity(6));
    auto [sol, trace] = sfda_solve(input, 0.0);
    CHECK(sol.iterations == 1);
    CHECK(sol.converged);
    Vector dir = fda_direction(input.a, input.b_factor);
    CHECK(dist2(sol.x, dir) <= 1e-8);
    CHECK(sol.fisher == doctest::Approx(1.0 / quad_form(input.b, dir)).epsilon(1e-10));
}

TEST_CASE("sfda_solve recovers a planted sparse discriminant on a nu grid") {
    auto gen = testutil::rng(55);
    const int n = 15, k = 3;
    std::set<int> sup;
    while (static_cast<int>(sup.size()) < k) sup.insert(static_cast<int>(gen() % n));
    Vector a(n, 0.0);
    for (int i : sup) a[i] = 1.0 + (gen() % 100) / 100.0;
    // well conditioned B
    SymMatrix b = SymMatrix::identity(n);
    auto noise = testutil::random_symmetric(gen, n, 0.05);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.at(i, j) += noise(i, j) * (i == j ? 0 : 1);
    FdaInput input(a, b);

    bool found = false;
    for (int g = 0; g < 25 && !found; ++g) {
        double nu = 0.01 * std::pow(4000.0, g / 24.0);
        SolverConfig cfg;
        cfg.max_iter = 500;
        auto [sol, trace] = sfda_solve(input, nu, cfg);
        std::set<int> got;
        for (int i = 0; i < n; ++i)
            if (std::abs(sol.x[i]) > 1e-9) got.insert(i);
        if (got == sup) found = true;
    }
    CHECK(found);
}

TEST_CASE("sfda_solve surrogate objective is non-increasing; feasibility held") {
    auto gen = testutil::rng(56);
    for (int t = 0; t < 6; ++t) {
        int n = 8;
        SymMatrix b = random_spd(gen, n);
        Vector a = random_vector(gen, n);
        FdaInput input(a, b);
        SolverConfig cfg;
        cfg.max_iter = 300;
        auto [sol, trace] = sfda_solve(input, 0.5 + (gen() % 100) / 40.0, cfg);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i].surrogate <= trace[i - 1].surrogate + 1e-8);
        for (const auto& e : trace) CHECK(e.feasibility <= 1e-8);
    }
}

TEST_CASE("cross-module consistency: nu = 0 direction matches the rank-one GEV solve") {
    auto gen = testutil::rng(57);
    for (int t = 0; t < 5; ++t) {
        int n = 7;
        SymMatrix b = random_spd(gen, n);
        Vector a = random_vector(gen, n);
        FdaInput input(a, b);
        auto [sol, trace] = sfda_solve(input, 0.0);

        SymMatrix aat(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) aat.at(i, j) = a[i] * a[j];
        Problem gev(aat, input.b);
        SolverConfig cfg;
        cfg.tol_step = 1e-11;
        cfg.max_iter = 50000;
        auto [gsol, gtrace] = solve(gev, cfg);

        // compare directions up to sign/scale via the angle
        double cosang = std::abs(dot(sol.x, gsol.x)) / (norm2(sol.x) * norm2(gsol.x));
        CHECK(std::acos(std::min(1.0, cosang)) <= 1e-5);
    }
}

TEST_CASE("sfda_lasso: limits and the null-space grid oracle") {
    auto gen = testutil::rng(58);
    SymMatrix b = random_spd(gen, 4);
    Vector a = random_vector(gen, 4);
    FdaInput input(a, b);
    CHECK(dist2(sfda_lasso(input, 0.0), fda_direction(a, input.b_factor)) <= 1e-12);

    // mass concentrates on the coordinate cheap in B; on the feasible segment
    // the l1 term is constant, so the exact optimum is (100/101, 1/101)
    FdaInput cheap(Vector{1.0, 1.0}, SymMatrix::diagonal({1.0, 100.0}));
    for (double nu : {5.0, 50.0, 500.0}) {
        Vector xbig = sfda_lasso(cheap, nu);
        CHECK(xbig[0] == doctest::Approx(100.0 / 101.0).epsilon(1e-6));
        CHECK(xbig[1] == doctest::Approx(1.0 / 101.0).epsilon(1e-4));
    }

    // n = 6 objective against a grid over 2 random null-space directions
    for (int t = 0; t < 3; ++t) {
        const int n = 6;
        SymMatrix bb = random_spd(gen, n);
        Vector aa = random_vector(gen, n);
        FdaInput in6(aa, bb);
        double nu = 0.8;
        Vector x = sfda_lasso(in6, nu, 1e-10);
        auto objective = [&](const Vector& v) { return quad_form(bb, v) + nu * l1(v); };
        double fx = objective(x);
        Vector n1 = random_vector(gen, n), n2 = random_vector(gen, n);
        axpy(-dot(aa, n1) / dot(aa, aa), aa, n1);
        axpy(-dot(aa, n2) / dot(aa, aa), aa, n2);
        for (int i = -30; i <= 30; ++i)
            for (int j = -30; j <= 30; ++j) {
                Vector y = x;
                axpy(i * 0.02, n1, y);
                axpy(j * 0.02, n2, y);
                CHECK(fx <= objective(y) + 1e-4 * std::max(1.0, std::abs(fx)));
            }
    }
}

TEST_CASE("sfda_lasso convexity: returned objective below random feasible points") {
    auto gen = testutil::rng(59);
    const int n = 8;
    SymMatrix b = random_spd(gen, n);
    Vector a = random_vector(gen, n);
    FdaInput input(a, b);
    double nu = 1.2;
    Vector x = sfda_lasso(input, nu, 1e-10);
    double fx = quad_form(b, x) + nu * l1(x);
    for (int k = 0; k < 1000; ++k) {
        Vector y = random_feasible(gen, a);
        CHECK(fx <= quad_form(b, y) + nu * l1(y) + 1e-8);
    }
}

TEST_CASE("sfda_lasso_constrained maps a budget to a penalty") {
    auto gen = testutil::rng(60);
    SymMatrix b = random_spd(gen, 6);
    Vector a = random_vector(gen, 6);
    FdaInput input(a, b);
    double unconstrained = l1(fda_direction(a, input.b_factor));
    double k = 0.6 * unconstrained;
    Vector x = sfda_lasso_constrained(input, k);
    CHECK(l1(x) <= k + 1e-6);
    CHECK(std::abs(dot(a, x) - 1.0) <= 1e-8);
    // infeasible budget rejected: below the minimum attainable l1
    CHECK_THROWS_AS(sfda_lasso_constrained(input, 1e-9), Error);
}

TEST_CASE("FdaInput validation") {
    CHECK_THROWS_AS(FdaInput(Vector{0, 0}, SymMatrix::identity(2)), Error);
    auto gen = testutil::rng(61);
    Vector mu = random_vector(gen, 3);
    CHECK_THROWS_AS(FdaInput(mu, mu, SymMatrix::identity(3), SymMatrix::identity(3)), Error);
}
