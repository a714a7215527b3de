#include "sgev.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "core/io.hpp"
#include "core/scca.hpp"
#include "core/sfda.hpp"
#include "core/spca.hpp"

using sgev::Error;
using sgev::ErrorCode;
using sgev::Matrix;
using sgev::SymMatrix;
using sgev::Vector;

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& msg) { g_last_error = msg; }

sgev_status map_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_argument: return SGEV_ERR_INVALID_ARGUMENT;
        case ErrorCode::dimension_mismatch: return SGEV_ERR_DIMENSION_MISMATCH;
        case ErrorCode::not_positive_definite: return SGEV_ERR_NOT_POSITIVE_DEFINITE;
        case ErrorCode::not_converged: return SGEV_ERR_NOT_CONVERGED;
        case ErrorCode::max_sub_iterations: return SGEV_ERR_MAX_SUB_ITERATIONS;
        case ErrorCode::all_thresholded: return SGEV_ERR_ALL_THRESHOLDED;
        case ErrorCode::zero_direction: return SGEV_ERR_ZERO_DIRECTION;
        case ErrorCode::zero_update: return SGEV_ERR_ZERO_UPDATE;
        case ErrorCode::empty_support: return SGEV_ERR_EMPTY_SUPPORT;
        case ErrorCode::rank_collapse: return SGEV_ERR_RANK_COLLAPSE;
        case ErrorCode::early_stop: return SGEV_ERR_EARLY_STOP;
        case ErrorCode::parse_error: return SGEV_ERR_PARSE;
        case ErrorCode::io_error: return SGEV_ERR_IO;
        case ErrorCode::domain_error: return SGEV_ERR_DOMAIN;
    }
    return SGEV_ERR_INTERNAL;
}

template <typename F>
sgev_status guarded(F&& f) {
    try {
        f();
        return SGEV_OK;
    } catch (const Error& e) {
        set_last_error(e.what());
        return map_code(e.code());
    } catch (const std::exception& e) {
        set_last_error(e.what());
        return SGEV_ERR_INTERNAL;
    }
}

sgev_status invalid(const std::string& msg) {
    set_last_error(msg);
    return SGEV_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct sgev_matrix {
    SymMatrix m;
};
struct sgev_dense {
    Matrix m;
};
struct sgev_curve {
    sgev::pca::TradeoffCurve c;
};
struct sgev_report {
    sgev::cca::RetrievalReport r;
};

struct sgev_options {
    double rho = 0.0;
    double epsilon = 2.220446049250313e-16;
    double tau = -1.0;  // negative: auto
    int max_iter = 1000;
    double tol = 1e-6;
    double sub_tol = 1e-8;
    double zero_tol = 1e-9;
    int components = 1;
    std::vector<int> targets;
    bool random_init = false;
    unsigned long long seed = 0;
};

struct sgev_result {
    sgev::io::ResultRecord rec;
    int p = 0, q = 0;  // CCA block split; 0 when not applicable
};

extern "C" {

const char* sgev_status_name(sgev_status s) {
    switch (s) {
        case SGEV_OK: return "ok";
        case SGEV_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case SGEV_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case SGEV_ERR_NOT_POSITIVE_DEFINITE: return "not_positive_definite";
        case SGEV_ERR_NOT_CONVERGED: return "not_converged";
        case SGEV_ERR_MAX_SUB_ITERATIONS: return "max_sub_iterations";
        case SGEV_ERR_ALL_THRESHOLDED: return "all_thresholded";
        case SGEV_ERR_ZERO_DIRECTION: return "zero_direction";
        case SGEV_ERR_ZERO_UPDATE: return "zero_update";
        case SGEV_ERR_EMPTY_SUPPORT: return "empty_support";
        case SGEV_ERR_RANK_COLLAPSE: return "rank_collapse";
        case SGEV_ERR_EARLY_STOP: return "early_stop";
        case SGEV_ERR_PARSE: return "parse_error";
        case SGEV_ERR_IO: return "io_error";
        case SGEV_ERR_DOMAIN: return "domain_error";
        case SGEV_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* sgev_last_error(void) { return g_last_error.c_str(); }

const char* sgev_version(void) { return "1.0.0"; }

/* ---- matrices ---- */

sgev_status sgev_matrix_create(int n, const double* rowmajor, int symmetrize, sgev_matrix** out) {
    if (!rowmajor || !out || n <= 0) return invalid("sgev_matrix_create: bad arguments");
    return guarded([&] {
        std::vector<double> buf(rowmajor, rowmajor + static_cast<std::size_t>(n) * n);
        auto mode = symmetrize ? SymMatrix::OnAsymmetric::symmetrize : SymMatrix::OnAsymmetric::reject;
        *out = new sgev_matrix{SymMatrix(n, buf, mode)};
    });
}

sgev_status sgev_matrix_load_csv(const char* path, sgev_matrix** out) {
    if (!path || !out) return invalid("sgev_matrix_load_csv: bad arguments");
    return guarded([&] { *out = new sgev_matrix{sgev::io::load_matrix(path)}; });
}

int sgev_matrix_dim(const sgev_matrix* m) { return m ? m->m.dim() : 0; }

double sgev_matrix_get(const sgev_matrix* m, int i, int j) {
    if (!m || i < 0 || j < 0 || i >= m->m.dim() || j >= m->m.dim()) return 0.0;
    return m->m(i, j);
}

sgev_status sgev_matrix_fingerprint(const sgev_matrix* m, char* buf, size_t buflen) {
    if (!m || !buf) return invalid("sgev_matrix_fingerprint: bad arguments");
    return guarded([&] {
        std::string fp = sgev::io::fingerprint(m->m);
        if (buflen <= fp.size()) sgev::fail(ErrorCode::invalid_argument, "fingerprint buffer too small");
        std::memcpy(buf, fp.c_str(), fp.size() + 1);
    });
}

void sgev_matrix_free(sgev_matrix* m) { delete m; }

sgev_status sgev_dense_create(int rows, int cols, const double* rowmajor, sgev_dense** out) {
    if (!rowmajor || !out || rows <= 0 || cols <= 0) return invalid("sgev_dense_create: bad arguments");
    return guarded([&] {
        std::vector<double> buf(rowmajor, rowmajor + static_cast<std::size_t>(rows) * cols);
        *out = new sgev_dense{Matrix(rows, cols, std::move(buf))};
    });
}

sgev_status sgev_dense_load_csv(const char* path, sgev_dense** out) {
    if (!path || !out) return invalid("sgev_dense_load_csv: bad arguments");
    return guarded([&] { *out = new sgev_dense{sgev::io::load_csv(path)}; });
}

int sgev_dense_rows(const sgev_dense* m) { return m ? m->m.rows() : 0; }
int sgev_dense_cols(const sgev_dense* m) { return m ? m->m.cols() : 0; }

double sgev_dense_get(const sgev_dense* m, int i, int j) {
    if (!m || i < 0 || j < 0 || i >= m->m.rows() || j >= m->m.cols()) return 0.0;
    return m->m(i, j);
}

void sgev_dense_free(sgev_dense* m) { delete m; }

sgev_status sgev_covariance(const sgev_dense* data, int center, int scaled, sgev_matrix** out) {
    if (!data || !out) return invalid("sgev_covariance: bad arguments");
    return guarded([&] {
        *out = new sgev_matrix{sgev::io::covariance_from_data(data->m, center != 0, scaled != 0)};
    });
}

sgev_status sgev_cross_covariance(const sgev_dense* x, const sgev_dense* y, int center, int scaled,
                                  sgev_dense** out) {
    if (!x || !y || !out) return invalid("sgev_cross_covariance: bad arguments");
    return guarded([&] {
        *out = new sgev_dense{sgev::io::cross_covariance(x->m, y->m, center != 0, scaled != 0)};
    });
}

sgev_status sgev_gram_bow(const sgev_dense* docs, sgev_matrix** out) {
    if (!docs || !out) return invalid("sgev_gram_bow: bad arguments");
    return guarded([&] { *out = new sgev_matrix{sgev::io::gram_from_bow(docs->m)}; });
}

/* ---- options ---- */

sgev_options* sgev_options_create(void) { return new sgev_options(); }
void sgev_options_free(sgev_options* o) { delete o; }

#define SGEV_SETTER(name, field, check)                                     \
    sgev_status name(sgev_options* o, double v) {                           \
        if (!o || !(check)) return invalid(#name ": bad argument");         \
        o->field = v;                                                       \
        return SGEV_OK;                                                     \
    }

SGEV_SETTER(sgev_options_set_rho, rho, v >= 0.0)
SGEV_SETTER(sgev_options_set_epsilon, epsilon, v > 0.0)
SGEV_SETTER(sgev_options_set_tol, tol, v > 0.0)
SGEV_SETTER(sgev_options_set_sub_tol, sub_tol, v > 0.0)
SGEV_SETTER(sgev_options_set_zero_tol, zero_tol, v >= 0.0)
#undef SGEV_SETTER

sgev_status sgev_options_set_tau(sgev_options* o, double tau) {
    if (!o) return invalid("sgev_options_set_tau: bad argument");
    o->tau = tau;
    return SGEV_OK;
}

sgev_status sgev_options_set_max_iter(sgev_options* o, int max_iter) {
    if (!o || max_iter < 1) return invalid("sgev_options_set_max_iter: bad argument");
    o->max_iter = max_iter;
    return SGEV_OK;
}

sgev_status sgev_options_set_components(sgev_options* o, int d) {
    if (!o || d < 1) return invalid("sgev_options_set_components: bad argument");
    o->components = d;
    return SGEV_OK;
}

sgev_status sgev_options_set_target_cardinalities(sgev_options* o, const int* targets, int count) {
    if (!o || (count > 0 && !targets) || count < 0)
        return invalid("sgev_options_set_target_cardinalities: bad arguments");
    o->targets.assign(targets, targets + count);
    return SGEV_OK;
}

sgev_status sgev_options_set_init(sgev_options* o, int random_init, unsigned long long seed) {
    if (!o) return invalid("sgev_options_set_init: bad argument");
    o->random_init = random_init != 0;
    o->seed = seed;
    return SGEV_OK;
}

/* ---- result internals ---- */

namespace {

std::map<std::string, double> echo_config(const sgev_options& o) {
    std::map<std::string, double> c;
    c["rho"] = o.rho;
    c["epsilon"] = o.epsilon;
    if (o.tau >= 0.0) c["tau"] = o.tau;
    c["max_iter"] = o.max_iter;
    c["tol"] = o.tol;
    c["sub_tol"] = o.sub_tol;
    c["zero_tol"] = o.zero_tol;
    c["components"] = o.components;
    c["init_random"] = o.random_init ? 1.0 : 0.0;
    c["seed"] = static_cast<double>(o.seed);
    for (std::size_t i = 0; i < o.targets.size(); ++i)
        c["target_cardinality_" + std::to_string(i)] = o.targets[i];
    return c;
}

Vector random_direction(int n, unsigned long long seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = normal(gen);
    return v;
}

sgev::SolverConfig engine_config(const sgev_options& o) {
    sgev::SolverConfig c;
    c.rho_tilde = o.rho;
    c.epsilon = o.epsilon;
    if (o.tau >= 0.0) c.tau = o.tau;
    c.max_iter = o.max_iter;
    c.tol_step = o.tol;
    c.sub_tol = o.sub_tol;
    c.zero_tol = o.zero_tol;
    return c;
}

const sgev_options& opts_or_default(const sgev_options* o) {
    static const sgev_options defaults;
    return o ? *o : defaults;
}

}  // namespace

const char* sgev_result_solver(const sgev_result* r) { return r ? r->rec.solver.c_str() : ""; }

int sgev_result_component_count(const sgev_result* r) {
    return r ? static_cast<int>(r->rec.x.size()) : 0;
}

int sgev_result_dim(const sgev_result* r, int side) {
    if (!r || r->rec.x.empty()) return 0;
    if (r->p > 0) return side == 0 ? r->p : r->q;
    return side == 0 ? static_cast<int>(r->rec.x.front().size()) : 0;
}

sgev_status sgev_result_loading(const sgev_result* r, int side, int comp, double* buf, size_t buflen) {
    if (!r || !buf || comp < 0 || comp >= static_cast<int>(r->rec.x.size()))
        return invalid("sgev_result_loading: bad arguments");
    const Vector& x = r->rec.x[comp];
    int offset = 0, len = static_cast<int>(x.size());
    if (r->p > 0) {
        offset = side == 0 ? 0 : r->p;
        len = side == 0 ? r->p : r->q;
    } else if (side != 0) {
        return invalid("sgev_result_loading: result has no y side");
    }
    if (buflen < static_cast<size_t>(len)) return invalid("sgev_result_loading: buffer too small");
    std::memcpy(buf, x.data() + offset, static_cast<size_t>(len) * sizeof(double));
    return SGEV_OK;
}

sgev_status sgev_result_objective(const sgev_result* r, int comp, double* out) {
    if (!r || !out || comp < 0 || comp >= static_cast<int>(r->rec.objective.size()))
        return invalid("sgev_result_objective: bad arguments");
    *out = r->rec.objective[comp];
    return SGEV_OK;
}

sgev_status sgev_result_cardinality(const sgev_result* r, int side, int comp, int* out) {
    if (!r || !out || comp < 0 || comp >= static_cast<int>(r->rec.x.size()))
        return invalid("sgev_result_cardinality: bad arguments");
    auto it = r->rec.config.find("zero_tol");
    double zt = it == r->rec.config.end() ? 1e-9 : it->second;
    const Vector& x = r->rec.x[comp];
    int offset = 0, len = static_cast<int>(x.size());
    if (r->p > 0) {
        offset = side == 0 ? 0 : r->p;
        len = side == 0 ? r->p : r->q;
    } else if (side != 0) {
        return invalid("sgev_result_cardinality: result has no y side");
    }
    int c = 0;
    for (int i = 0; i < len; ++i)
        if (std::abs(x[offset + i]) > zt) ++c;
    *out = c;
    return SGEV_OK;
}

int sgev_result_iterations(const sgev_result* r) { return r ? r->rec.iterations : 0; }
int sgev_result_converged(const sgev_result* r) { return r && r->rec.converged ? 1 : 0; }

sgev_status sgev_result_cumulative_pev(const sgev_result* r, double* out) {
    if (!r || !out) return invalid("sgev_result_cumulative_pev: bad arguments");
    auto it = r->rec.config.find("cumulative_pev");
    if (it == r->rec.config.end()) return invalid("sgev_result_cumulative_pev: not a PCA result");
    *out = it->second;
    return SGEV_OK;
}

sgev_status sgev_result_save(const sgev_result* r, const char* path) {
    if (!r || !path) return invalid("sgev_result_save: bad arguments");
    return guarded([&] { sgev::io::save_result(r->rec, path); });
}

sgev_status sgev_result_load(const char* path, sgev_result** out) {
    if (!path || !out) return invalid("sgev_result_load: bad arguments");
    return guarded([&] {
        auto rec = sgev::io::load_result(path);
        auto* r = new sgev_result{std::move(rec), 0, 0};
        auto pit = r->rec.config.find("p");
        auto qit = r->rec.config.find("q");
        if (pit != r->rec.config.end() && qit != r->rec.config.end()) {
            r->p = static_cast<int>(pit->second);
            r->q = static_cast<int>(qit->second);
        }
        *out = r;
    });
}

void sgev_result_free(sgev_result* r) { delete r; }

/* ---- solvers ---- */

sgev_status sgev_solve_eig(const sgev_matrix* a, const sgev_matrix* b, const sgev_options* o,
                           sgev_result** out) {
    if (!a || !out) return invalid("sgev_solve_eig: bad arguments");
    return guarded([&] {
        const sgev_options& opt = opts_or_default(o);
        SymMatrix bm = b ? b->m : SymMatrix::identity(a->m.dim());
        sgev::Problem problem(a->m, bm);
        sgev::SolverConfig cfg = engine_config(opt);
        if (opt.random_init) {
            Vector v = random_direction(a->m.dim(), opt.seed);
            double q = sgev::quad_form(bm, v);
            sgev::scale(v, 1.0 / std::sqrt(q));
            cfg.init = v;
        }
        auto [sol, trace] = sgev::solve(problem, cfg);
        auto* r = new sgev_result();
        r->rec.solver = "eig";
        r->rec.config = echo_config(opt);
        r->rec.x = {sol.x};
        r->rec.objective = {sol.objective};
        r->rec.cardinality = {sol.cardinality};
        r->rec.iterations = sol.iterations;
        r->rec.final_step_norm = trace.entries.empty() ? 0.0 : trace.entries.back().step_norm;
        r->rec.converged = sol.converged;
        r->rec.fingerprint = sgev::io::fingerprint(a->m) + (b ? "+" + sgev::io::fingerprint(bm) : "");
        r->rec.timestamp = sgev::io::make_timestamp();
        *out = r;
    });
}

sgev_status sgev_solve_pca(const sgev_matrix* a, const sgev_options* o, sgev_result** out) {
    if (!a || !out) return invalid("sgev_solve_pca: bad arguments");
    return guarded([&] {
        const sgev_options& opt = opts_or_default(o);
        sgev::pca::PcaConfig cfg;
        cfg.rho_tilde = opt.rho;
        cfg.epsilon = opt.epsilon;
        cfg.max_iter = opt.max_iter;
        cfg.tol_step = opt.tol;
        cfg.zero_tol = opt.zero_tol;
        cfg.n_components = opt.components;
        cfg.target_cardinalities = opt.targets;
        if (!cfg.target_cardinalities.empty() &&
            static_cast<int>(cfg.target_cardinalities.size()) != cfg.n_components) {
            if (cfg.target_cardinalities.size() == 1)
                cfg.target_cardinalities.resize(cfg.n_components, cfg.target_cardinalities[0]);
            else
                sgev::fail(ErrorCode::invalid_argument,
                           "pca: target cardinality count must be 1 or match --components");
        }
        if (opt.random_init) {
            Vector v = random_direction(a->m.dim(), opt.seed);
            sgev::scale(v, 1.0 / sgev::norm2(v));
            cfg.init = v;
        }
        auto set = sgev::pca::fit_components(a->m, cfg);
        auto* r = new sgev_result();
        r->rec.solver = "pca";
        r->rec.config = echo_config(opt);
        r->rec.config["cumulative_pev"] = set.cumulative_pev;
        r->rec.config["trace_a"] = a->m.trace();
        r->rec.x = set.loadings;
        r->rec.objective = set.variances;
        r->rec.cardinality = set.cardinalities;
        r->rec.iterations = set.iterations;
        r->rec.converged = true;
        r->rec.fingerprint = sgev::io::fingerprint(a->m);
        r->rec.timestamp = sgev::io::make_timestamp();
        *out = r;
    });
}

sgev_status sgev_solve_cca(const sgev_matrix* sxx, const sgev_matrix* syy, const sgev_dense* sxy,
                           const sgev_options* o, sgev_result** out) {
    if (!sxx || !syy || !sxy || !out) return invalid("sgev_solve_cca: bad arguments");
    return guarded([&] {
        const sgev_options& opt = opts_or_default(o);
        sgev::cca::CcaInput input(sxx->m, syy->m, sxy->m);
        sgev::SolverConfig cfg = engine_config(opt);
        if (opt.random_init) {
            // feasible random start on the block ellipsoid
            Vector v = random_direction(input.p() + input.q(), opt.seed);
            sgev::Problem block = sgev::cca::assemble_block(input);
            double q = sgev::quad_form(block.b, v);
            sgev::scale(v, 1.0 / std::sqrt(q));
            cfg.init = v;
        }
        auto model = sgev::cca::cca_components(input, opt.components, cfg);
        auto* r = new sgev_result();
        r->p = input.p();
        r->q = input.q();
        r->rec.solver = "cca";
        r->rec.config = echo_config(opt);
        r->rec.config["p"] = input.p();
        r->rec.config["q"] = input.q();
        for (std::size_t k = 0; k < model.vx.size(); ++k) {
            Vector stacked(model.vx[k]);
            stacked.insert(stacked.end(), model.vy[k].begin(), model.vy[k].end());
            r->rec.x.push_back(std::move(stacked));
            r->rec.cardinality.push_back(model.cardinalities[k].first + model.cardinalities[k].second);
        }
        r->rec.objective = model.correlations;
        r->rec.converged = true;
        r->rec.fingerprint = sgev::io::fingerprint(sxx->m) + "+" + sgev::io::fingerprint(syy->m) +
                             "+" + sgev::io::fingerprint(sxy->m);
        r->rec.timestamp = sgev::io::make_timestamp();
        *out = r;
    });
}

sgev_status sgev_solve_fda(const sgev_dense* class1, const sgev_dense* class2, const sgev_options* o,
                           sgev_result** out) {
    if (!class1 || !class2 || !out) return invalid("sgev_solve_fda: bad arguments");
    return guarded([&] {
        const sgev_options& opt = opts_or_default(o);
        const Matrix& c1 = class1->m;
        const Matrix& c2 = class2->m;
        if (c1.cols() != c2.cols())
            sgev::fail(ErrorCode::dimension_mismatch, "fda: class feature counts differ");
        auto mean_of = [](const Matrix& m) {
            Vector mu(m.cols(), 0.0);
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) mu[j] += m(i, j);
            for (double& v : mu) v /= m.rows();
            return mu;
        };
        Vector mu1 = mean_of(c1), mu2 = mean_of(c2);
        SymMatrix s1 = sgev::io::covariance_from_data(c1, true);
        SymMatrix s2 = sgev::io::covariance_from_data(c2, true);
        sgev::fda::FdaInput input(mu1, mu2, s1, s2);
        auto [sol, trace] = sgev::fda::sfda_solve(input, opt.rho, engine_config(opt));
        auto* r = new sgev_result();
        r->rec.solver = "fda";
        r->rec.config = echo_config(opt);
        r->rec.x = {sol.x};
        r->rec.objective = {sol.fisher};
        r->rec.cardinality = {sol.cardinality};
        r->rec.iterations = sol.iterations;
        r->rec.final_step_norm = trace.empty() ? 0.0 : trace.back().step_norm;
        r->rec.converged = sol.converged;
        r->rec.fingerprint = sgev::io::fingerprint(c1) + "+" + sgev::io::fingerprint(c2);
        r->rec.timestamp = sgev::io::make_timestamp();
        *out = r;
    });
}

/* ---- sweep ---- */

sgev_status sgev_sweep(const sgev_matrix* a, const double* rho_grid, int grid_len,
                       const sgev_options* o, int parallel, sgev_curve** out) {
    if (!a || !rho_grid || grid_len < 1 || !out) return invalid("sgev_sweep: bad arguments");
    return guarded([&] {
        const sgev_options& opt = opts_or_default(o);
        sgev::pca::PcaConfig cfg;
        cfg.rho_tilde = opt.rho;
        cfg.epsilon = opt.epsilon;
        cfg.max_iter = opt.max_iter;
        cfg.tol_step = opt.tol;
        cfg.zero_tol = opt.zero_tol;
        if (opt.random_init) {
            Vector v = random_direction(a->m.dim(), opt.seed);
            sgev::scale(v, 1.0 / sgev::norm2(v));
            cfg.init = v;
        }
        Vector grid(rho_grid, rho_grid + grid_len);
        auto curve = sgev::pca::sweep(a->m, grid, cfg, parallel != 0);
        curve.instance_id = sgev::io::fingerprint(a->m);
        *out = new sgev_curve{std::move(curve)};
    });
}

int sgev_curve_size(const sgev_curve* c) { return c ? static_cast<int>(c->c.points.size()) : 0; }

sgev_status sgev_curve_point(const sgev_curve* c, int i, double* rho, int* cardinality, double* pev) {
    if (!c || i < 0 || i >= static_cast<int>(c->c.points.size()))
        return invalid("sgev_curve_point: bad arguments");
    if (rho) *rho = c->c.points[i].rho_tilde;
    if (cardinality) *cardinality = c->c.points[i].cardinality;
    if (pev) *pev = c->c.points[i].pev;
    return SGEV_OK;
}

sgev_status sgev_curve_save_csv(const sgev_curve* c, const char* path) {
    if (!c || !path) return invalid("sgev_curve_save_csv: bad arguments");
    return guarded([&] {
        std::ofstream outf(path, std::ios::binary);
        if (!outf) sgev::fail(ErrorCode::io_error, std::string("cannot write ") + path);
        outf << "rho,cardinality,pev\n";
        char buf[96];
        for (const auto& p : c->c.points) {
            std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g\n", p.rho_tilde, p.cardinality, p.pev);
            outf << buf;
        }
    });
}

void sgev_curve_free(sgev_curve* c) { delete c; }

/* ---- retrieval ---- */

sgev_status sgev_retrieval_eval(const sgev_result* cca, const sgev_dense* queries,
                                const sgev_dense* targets, sgev_report** out) {
    if (!cca || !queries || !targets || !out) return invalid("sgev_retrieval_eval: bad arguments");
    if (cca->p <= 0) return invalid("sgev_retrieval_eval: result is not a CCA model");
    return guarded([&] {
        sgev::cca::CcaModel model;
        for (const Vector& stacked : cca->rec.x) {
            model.vx.emplace_back(stacked.begin(), stacked.begin() + cca->p);
            model.vy.emplace_back(stacked.begin() + cca->p, stacked.end());
        }
        auto rows_of = [](const Matrix& m) {
            std::vector<Vector> rows;
            rows.reserve(m.rows());
            for (int i = 0; i < m.rows(); ++i) {
                Vector r(m.cols());
                for (int j = 0; j < m.cols(); ++j) r[j] = m(i, j);
                rows.push_back(std::move(r));
            }
            return rows;
        };
        auto rep = sgev::cca::evaluate_retrieval(model, rows_of(queries->m), rows_of(targets->m));
        *out = new sgev_report{std::move(rep)};
    });
}

int sgev_report_size(const sgev_report* r) { return r ? static_cast<int>(r->r.ranks.size()) : 0; }

sgev_status sgev_report_entry(const sgev_report* r, int i, int* rank, double* aroc) {
    if (!r || i < 0 || i >= static_cast<int>(r->r.ranks.size()))
        return invalid("sgev_report_entry: bad arguments");
    if (rank) *rank = r->r.ranks[i];
    if (aroc) *aroc = r->r.arocs[i];
    return SGEV_OK;
}

double sgev_report_average_aroc(const sgev_report* r) { return r ? r->r.average_aroc : 0.0; }

sgev_status sgev_report_save(const sgev_report* r, const char* path) {
    if (!r || !path) return invalid("sgev_report_save: bad arguments");
    return guarded([&] {
        nlohmann::ordered_json j;
        j["ranks"] = r->r.ranks;
        j["arocs"] = r->r.arocs;
        j["average_aroc"] = r->r.average_aroc;
        std::ofstream outf(path, std::ios::binary);
        if (!outf) sgev::fail(ErrorCode::io_error, std::string("cannot write ") + path);
        outf << j.dump(2) << "\n";
    });
}

void sgev_report_free(sgev_report* r) { delete r; }

}  // extern "C"
