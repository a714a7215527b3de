#include "scca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sgev::cca {

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
    fail(ErrorCode::not_positive_definite, "CcaInput: covariance block not stabilizable");
}

}  // namespace

CcaInput::CcaInput(SymMatrix sxx_in, SymMatrix syy_in, Matrix sxy_in, double ridge_gamma)
    : sxx(std::move(sxx_in)), syy(std::move(syy_in)), sxy(std::move(sxy_in)) {
    if (sxy.rows() != sxx.dim() || sxy.cols() != syy.dim())
        fail(ErrorCode::dimension_mismatch, "CcaInput: cross-covariance dimensions inconsistent");
    ridge_until_spd(sxx, ridge_gamma);
    ridge_until_spd(syy, ridge_gamma);
}

Problem assemble_block(const CcaInput& input) {
    const int p = input.p(), q = input.q(), n = p + q;
    SymMatrix a(n), b(n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            a.at(i, p + j) = input.sxy(i, j);
            a.at(p + j, i) = input.sxy(i, j);
        }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) b.at(i, j) = input.sxx(i, j);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) b.at(p + i, p + j) = input.syy(i, j);
    return Problem(std::move(a), std::move(b));
}

PairResult dccca_solve(const CcaInput& input, SolverConfig config) {
    const int p = input.p(), q = input.q();
    Problem problem = assemble_block(input);

    if (!config.tau && !config.lambda_min_hint) {
        double lm = lambda_min(problem.a);
        config.lambda_min_hint = lm;
        config.tau = std::max(0.0, -lm);
    }
    auto [sol, trace] = solve(problem, config);

    PairResult r;
    r.trace = std::move(trace);
    if (sol.cardinality > 0) {
        auto [xr, lam] = variational_renormalization(sol.x, problem.a, problem.b, config.zero_tol);
        (void)lam;
        sol.x = std::move(xr);
    }
    r.wx.assign(sol.x.begin(), sol.x.begin() + p);
    r.wy.assign(sol.x.begin() + p, sol.x.end());

    // per-side rescaling to unit Sigma-norm; the joint constraint leaves the
    // split free up to a complementary factor
    double nx2 = quad_form(input.sxx, r.wx);
    double ny2 = quad_form(input.syy, r.wy);
    if (nx2 > 1e-24) scale(r.wx, 1.0 / std::sqrt(nx2));
    if (ny2 > 1e-24) scale(r.wy, 1.0 / std::sqrt(ny2));
    canonical_sign(r.wx);
    // align wy's sign so the reported correlation is the pair's achieved one
    r.correlation = dot(r.wx, input.sxy.apply(r.wy));
    if (r.correlation < 0.0) {
        scale(r.wy, -1.0);
        r.correlation = -r.correlation;
    }
    r.block_solution = std::move(sol);
    (void)q;
    return r;
}

namespace {

double frob_norm(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

// Gram-Schmidt in the Sigma inner product; returns false when the direction
// is dependent on the ones already kept.
bool sigma_orthonormalize(const SymMatrix& sigma, std::vector<Vector>& basis, Vector v) {
    for (const Vector& u : basis) axpy(-dot(u, sigma.apply(v)), u, v);
    double n2 = quad_form(sigma, v);
    if (n2 < 1e-20) return false;
    scale(v, 1.0 / std::sqrt(n2));
    basis.push_back(std::move(v));
    return true;
}

}  // namespace

CcaModel cca_components(const CcaInput& input, int d, const SolverConfig& config) {
    if (d < 1) fail(ErrorCode::invalid_argument, "cca_components: d must be >= 1");
    const int p = input.p(), q = input.q();

    CcaModel model;
    Matrix sxy_cur = input.sxy;
    std::vector<Vector> ux, uy;  // Sigma-orthonormalized found directions

    for (int comp = 0; comp < d; ++comp) {
        if (frob_norm(sxy_cur) < 1e-12)
            fail(ErrorCode::early_stop,
                 "cca_components: only " + std::to_string(comp) + " informative pairs");
        CcaInput stage(input.sxx, input.syy, sxy_cur, 0.0);
        PairResult pr = dccca_solve(stage, config);
        model.vx.push_back(pr.wx);
        model.vy.push_back(pr.wy);
        model.correlations.push_back(dot(pr.wx, input.sxy.apply(pr.wy)));
        model.cardinalities.push_back({cardinality(pr.wx, config.zero_tol),
                                       cardinality(pr.wy, config.zero_tol)});

        // an over-regularized pair comes back zero on a side; keep it in the
        // model (correlation 0) and leave the deflation untouched
        if (model.cardinalities.back().first == 0 || model.cardinalities.back().second == 0) continue;

        bool okx = sigma_orthonormalize(input.sxx, ux, pr.wx);
        bool oky = sigma_orthonormalize(input.syy, uy, pr.wy);
        if (!okx || !oky)
            fail(ErrorCode::early_stop,
                 "cca_components: pair " + std::to_string(comp + 1) +
                     " is dependent on earlier pairs; stopping");

        // Sxy <- (I - Sxx Ux Ux^T) Sxy (I - Uy Uy^T Syy)
        Matrix m = input.sxy;
        // left: subtract Sxx u (u^T m) for each u
        for (const Vector& u : ux) {
            Vector su = input.sxx.apply(u);
            Vector utm(q, 0.0);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j) utm[j] += u[i] * m(i, j);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j) m(i, j) -= su[i] * utm[j];
        }
        // right: subtract (m u) (Syy u)^T for each u
        for (const Vector& u : uy) {
            Vector su = input.syy.apply(u);
            Vector mu(p, 0.0);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j) mu[i] += m(i, j) * u[j];
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j) m(i, j) -= mu[i] * su[j];
        }
        sxy_cur = std::move(m);
    }
    return model;
}

Vector project(const CcaModel& model, Side side, const Vector& query, double zero_tol) {
    const std::vector<Vector>& comps = (side == Side::x) ? model.vx : model.vy;
    if (comps.empty()) fail(ErrorCode::invalid_argument, "project: empty model");
    Vector out(comps.size(), 0.0);
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const Vector& v = comps[k];
        if (v.size() != query.size()) fail(ErrorCode::dimension_mismatch, "project: query size mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > zero_tol) s += v[i] * query[i];  // support entries only
        out[k] = s;
    }
    return out;
}

std::vector<std::vector<int>> retrieve(const std::vector<Vector>& queries,
                                       const std::vector<Vector>& targets) {
    if (targets.empty()) fail(ErrorCode::invalid_argument, "retrieve: empty target set");
    std::vector<std::vector<int>> out;
    out.reserve(queries.size());
    for (const Vector& qv : queries) {
        std::vector<double> d(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (targets[t].size() != qv.size())
                fail(ErrorCode::dimension_mismatch, "retrieve: dimension mismatch");
            d[t] = dist2(targets[t], qv);
        }
        std::vector<int> order(targets.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
        out.push_back(std::move(order));
    }
    return out;
}

double aroc(int rank, int n_targets) {
    if (n_targets < 2) fail(ErrorCode::domain_error, "aroc: need at least two targets");
    if (rank < 1 || rank > n_targets) fail(ErrorCode::domain_error, "aroc: rank out of range");
    return 1.0 - static_cast<double>(rank - 1) / (n_targets - 1);
}

RetrievalReport evaluate_retrieval(const CcaModel& model, const std::vector<Vector>& queries,
                                   const std::vector<Vector>& targets) {
    if (queries.size() != targets.size())
        fail(ErrorCode::invalid_argument, "evaluate_retrieval: aligned query/target sets required");
    std::vector<Vector> pq, pt;
    pq.reserve(queries.size());
    pt.reserve(targets.size());
    for (const Vector& v : queries) pq.push_back(project(model, Side::x, v));
    for (const Vector& v : targets) pt.push_back(project(model, Side::y, v));

    std::vector<std::vector<int>> orders = retrieve(pq, pt);
    RetrievalReport rep;
    const int n = static_cast<int>(targets.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        int rank = 0;
        for (std::size_t pos = 0; pos < orders[i].size(); ++pos)
            if (orders[i][pos] == static_cast<int>(i)) {
                rank = static_cast<int>(pos) + 1;
                break;
            }
        rep.ranks.push_back(rank);
        rep.arocs.push_back(aroc(rank, n));
    }
    rep.average_aroc = 0.0;
    for (double v : rep.arocs) rep.average_aroc += v;
    if (!rep.arocs.empty()) rep.average_aroc /= static_cast<double>(rep.arocs.size());
    return rep;
}

}  // namespace sgev::cca
