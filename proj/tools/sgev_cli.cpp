// Command-line front end for the sparse GEV solvers. Links the C API only.

#include <sgev.h>

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

int die(const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(), sgev_last_error());
    return kExitSolver;
}

struct Cleanup {
    std::vector<sgev_matrix*> mats;
    std::vector<sgev_dense*> denses;
    sgev_options* opts = nullptr;
    sgev_result* result = nullptr;
    sgev_curve* curve = nullptr;
    sgev_report* report = nullptr;
    ~Cleanup() {
        for (auto* m : mats) sgev_matrix_free(m);
        for (auto* d : denses) sgev_dense_free(d);
        sgev_options_free(opts);
        sgev_result_free(result);
        sgev_curve_free(curve);
        sgev_report_free(report);
    }
};

struct CommonArgs {
    double rho = 0.0;
    double epsilon = 2.220446049250313e-16;
    double tau = -1.0;
    int max_iter = 1000;
    double tol = 1e-6;
    int components = 1;
    std::vector<int> targets;
    std::string init = "uniform";
    unsigned long long seed = 0;
    std::string output;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_components = true) {
    cmd->add_option("--rho", a.rho, "sparsity parameter rho (default 0)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--epsilon", a.epsilon, "approximation parameter (default machine precision)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", a.tau, "d.c. shift override (default: auto from lambda_min)");
    cmd->add_option("--max-iter", a.max_iter, "outer iteration cap (default 1000)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", a.tol, "step-norm stopping tolerance (default 1e-6)")
        ->check(CLI::PositiveNumber);
    if (with_components)
        cmd->add_option("--components", a.components, "number of components (default 1)")
            ->check(CLI::PositiveNumber);
    cmd->add_option("--init", a.init, "initialization: uniform | random")
        ->check(CLI::IsMember({"uniform", "random"}));
    cmd->add_option("--seed", a.seed, "seed for --init random");
    cmd->add_option("--output", a.output, "write a JSON result record here");
}

sgev_options* build_options(const CommonArgs& a) {
    sgev_options* o = sgev_options_create();
    sgev_options_set_rho(o, a.rho);
    sgev_options_set_epsilon(o, a.epsilon);
    if (a.tau >= 0.0) sgev_options_set_tau(o, a.tau);
    sgev_options_set_max_iter(o, a.max_iter);
    sgev_options_set_tol(o, a.tol);
    sgev_options_set_components(o, a.components);
    if (!a.targets.empty()) sgev_options_set_target_cardinalities(o, a.targets.data(),
                                                                  static_cast<int>(a.targets.size()));
    sgev_options_set_init(o, a.init == "random" ? 1 : 0, a.seed);
    return o;
}

void print_vector(const char* label, const std::vector<double>& v) {
    std::printf("%s [", label);
    for (std::size_t i = 0; i < v.size(); ++i) std::printf("%s%.4f", i ? ", " : "", v[i]);
    std::printf("]\n");
}

int load_symmetric(const std::string& input, const std::string& data, int center, int scaled,
                   Cleanup& gc, sgev_matrix** out) {
    if (!input.empty()) {
        if (sgev_matrix_load_csv(input.c_str(), out) != SGEV_OK) return die(input);
    } else {
        sgev_dense* d = nullptr;
        if (sgev_dense_load_csv(data.c_str(), &d) != SGEV_OK) return die(data);
        gc.denses.push_back(d);
        if (sgev_covariance(d, center, scaled, out) != SGEV_OK) return die("covariance");
    }
    gc.mats.push_back(*out);
    return 0;
}

int save_if_requested(const CommonArgs& a, sgev_result* r) {
    if (a.output.empty()) return 0;
    if (sgev_result_save(r, a.output.c_str()) != SGEV_OK) return die(a.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse generalized eigenvalue solvers (sparse PCA / CCA / FDA)"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // ---- eig ----
    auto* eig = app.add_subcommand("eig", "rho = 0 generalized eigenvalue solve");
    CommonArgs ea;
    std::string eig_input, eig_data, eig_b;
    int eig_center = 0, eig_scaled = 0;
    eig->add_option("--input", eig_input, "symmetric matrix CSV (A)");
    eig->add_option("--data", eig_data, "data CSV; A = C^T C");
    eig->add_option("--b", eig_b, "constraint matrix CSV (default identity)");
    eig->add_flag("--center", eig_center, "column-center data input");
    eig->add_flag("--scaled", eig_scaled, "divide covariance by (rows-1)");
    add_common(eig, ea, false);

    // ---- pca ----
    auto* pca = app.add_subcommand("pca", "sparse principal components (DC-PCA pipeline)");
    CommonArgs pa;
    std::string pca_input, pca_data, pca_targets;
    int pca_center = 0, pca_scaled = 0;
    pca->add_option("--input", pca_input, "symmetric matrix CSV (A)");
    pca->add_option("--data", pca_data, "data CSV; A = C^T C");
    pca->add_flag("--center", pca_center, "column-center data input");
    pca->add_flag("--scaled", pca_scaled, "divide covariance by (rows-1)");
    pca->add_option("--target-cardinality", pca_targets,
                    "target cardinality, one value or a comma list (one per component)");
    add_common(pca, pa);

    // ---- cca ----
    auto* cca = app.add_subcommand("cca", "sparse canonical correlation analysis");
    CommonArgs ca;
    std::string f_sxx, f_syy, f_sxy, f_bowx, f_bowy;
    int cca_center = 0, cca_scaled = 0;
    cca->add_option("--sxx", f_sxx, "x-view covariance CSV");
    cca->add_option("--syy", f_syy, "y-view covariance CSV");
    cca->add_option("--sxy", f_sxy, "cross-covariance CSV");
    cca->add_option("--bow-x", f_bowx, "binary bag-of-words CSV, x view");
    cca->add_option("--bow-y", f_bowy, "binary bag-of-words CSV, y view");
    cca->add_flag("--center", cca_center, "center gram features (bow path)");
    cca->add_flag("--scaled", cca_scaled, "divide covariances by (rows-1) (bow path)");
    add_common(cca, ca);

    // ---- fda ----
    auto* fda = app.add_subcommand("fda", "sparse Fisher discriminant direction");
    CommonArgs fa;
    std::string f_c1, f_c2;
    fda->add_option("--class1", f_c1, "class-1 data CSV (rows = samples)")->required();
    fda->add_option("--class2", f_c2, "class-2 data CSV (rows = samples)")->required();
    add_common(fda, fa, false);

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "rho sweep for the first sparse PC");
    CommonArgs sa;
    std::string sweep_input, sweep_data, sweep_curve;
    int sweep_center = 0, sweep_scaled = 0, sweep_parallel = 0, sweep_points = 20;
    double rho_min = 1e-3, rho_max = 10.0;
    sweep->add_option("--input", sweep_input, "symmetric matrix CSV (A)");
    sweep->add_option("--data", sweep_data, "data CSV; A = C^T C");
    sweep->add_flag("--center", sweep_center, "column-center data input");
    sweep->add_flag("--scaled", sweep_scaled, "divide covariance by (rows-1)");
    sweep->add_option("--rho-min", rho_min, "grid start (default 1e-3)")->check(CLI::PositiveNumber);
    sweep->add_option("--rho-max", rho_max, "grid end (default 10)")->check(CLI::PositiveNumber);
    sweep->add_option("--points", sweep_points, "log-spaced grid size (default 20)")
        ->check(CLI::PositiveNumber);
    sweep->add_flag("--parallel", sweep_parallel, "evaluate grid points in parallel (no warm starts)");
    sweep->add_option("--curve", sweep_curve, "write the curve CSV (rho,cardinality,pev) here");
    add_common(sweep, sa, false);

    // ---- retrieve-eval ----
    auto* rev = app.add_subcommand("retrieve-eval", "ranked-retrieval AROC evaluation of a CCA model");
    std::string m_model, m_queries, m_targets, m_out;
    rev->add_option("--model", m_model, "CCA result record (JSON)")->required();
    rev->add_option("--queries", m_queries, "query features CSV (x side, aligned rows)")->required();
    rev->add_option("--targets", m_targets, "target features CSV (y side, aligned rows)")->required();
    rev->add_option("--output", m_out, "write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    Cleanup gc;

    if (eig->parsed()) {
        if (eig_input.empty() == eig_data.empty()) {
            std::fprintf(stderr, "error: provide exactly one of --input or --data\n");
            return kExitUsage;
        }
        sgev_matrix* a = nullptr;
        if (int rc = load_symmetric(eig_input, eig_data, eig_center, eig_scaled, gc, &a)) return rc;
        sgev_matrix* b = nullptr;
        if (!eig_b.empty()) {
            if (sgev_matrix_load_csv(eig_b.c_str(), &b) != SGEV_OK) return die(eig_b);
            gc.mats.push_back(b);
        }
        gc.opts = build_options(ea);
        if (sgev_solve_eig(a, b, gc.opts, &gc.result) != SGEV_OK) return die("eig");
        double obj;
        int card;
        sgev_result_objective(gc.result, 0, &obj);
        sgev_result_cardinality(gc.result, 0, 0, &card);
        std::printf("objective %.10g\ncardinality %d\nconverged %d\niterations %d\n", obj, card,
                    sgev_result_converged(gc.result), sgev_result_iterations(gc.result));
        std::vector<double> x(sgev_result_dim(gc.result, 0));
        sgev_result_loading(gc.result, 0, 0, x.data(), x.size());
        print_vector("x", x);
        return save_if_requested(ea, gc.result);
    }

    if (pca->parsed()) {
        if (pca_input.empty() == pca_data.empty()) {
            std::fprintf(stderr, "error: provide exactly one of --input or --data\n");
            return kExitUsage;
        }
        if (!pca_targets.empty()) {
            try {
                std::size_t pos = 0;
                while (pos < pca_targets.size()) {
                    std::size_t next = pca_targets.find(',', pos);
                    pa.targets.push_back(std::stoi(pca_targets.substr(pos, next - pos)));
                    if (next == std::string::npos) break;
                    pos = next + 1;
                }
            } catch (const std::exception&) {
                std::fprintf(stderr, "error: bad --target-cardinality value '%s'\n", pca_targets.c_str());
                return kExitUsage;
            }
        }
        sgev_matrix* a = nullptr;
        if (int rc = load_symmetric(pca_input, pca_data, pca_center, pca_scaled, gc, &a)) return rc;
        gc.opts = build_options(pa);
        if (sgev_solve_pca(a, gc.opts, &gc.result) != SGEV_OK) return die("pca");
        int k = sgev_result_component_count(gc.result);
        for (int c = 0; c < k; ++c) {
            double var;
            int card;
            sgev_result_objective(gc.result, c, &var);
            sgev_result_cardinality(gc.result, 0, c, &card);
            std::printf("component %d: variance %.10g cardinality %d\n", c + 1, var, card);
            std::vector<double> x(sgev_result_dim(gc.result, 0));
            sgev_result_loading(gc.result, 0, c, x.data(), x.size());
            print_vector("  loading", x);
        }
        double pev;
        if (sgev_result_cumulative_pev(gc.result, &pev) == SGEV_OK)
            std::printf("cumulative PEV %.6f\n", pev);
        return save_if_requested(pa, gc.result);
    }

    if (cca->parsed()) {
        bool cov_path = !f_sxx.empty() && !f_syy.empty() && !f_sxy.empty();
        bool bow_path = !f_bowx.empty() && !f_bowy.empty();
        if (cov_path == bow_path) {
            std::fprintf(stderr, "error: provide --sxx/--syy/--sxy or --bow-x/--bow-y\n");
            return kExitUsage;
        }
        sgev_matrix *sxx = nullptr, *syy = nullptr;
        sgev_dense* sxy = nullptr;
        if (cov_path) {
            if (sgev_matrix_load_csv(f_sxx.c_str(), &sxx) != SGEV_OK) return die(f_sxx);
            gc.mats.push_back(sxx);
            if (sgev_matrix_load_csv(f_syy.c_str(), &syy) != SGEV_OK) return die(f_syy);
            gc.mats.push_back(syy);
            if (sgev_dense_load_csv(f_sxy.c_str(), &sxy) != SGEV_OK) return die(f_sxy);
            gc.denses.push_back(sxy);
        } else {
            sgev_dense *bx = nullptr, *by = nullptr;
            if (sgev_dense_load_csv(f_bowx.c_str(), &bx) != SGEV_OK) return die(f_bowx);
            gc.denses.push_back(bx);
            if (sgev_dense_load_csv(f_bowy.c_str(), &by) != SGEV_OK) return die(f_bowy);
            gc.denses.push_back(by);
            sgev_matrix *gx = nullptr, *gy = nullptr;
            if (sgev_gram_bow(bx, &gx) != SGEV_OK) return die("gram x");
            gc.mats.push_back(gx);
            if (sgev_gram_bow(by, &gy) != SGEV_OK) return die("gram y");
            gc.mats.push_back(gy);
            // gram rows become the feature vectors of each document
            int n = sgev_matrix_dim(gx);
            std::vector<double> bufx(static_cast<std::size_t>(n) * n), bufy(bufx.size());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    bufx[static_cast<std::size_t>(i) * n + j] = sgev_matrix_get(gx, i, j);
                    bufy[static_cast<std::size_t>(i) * n + j] = sgev_matrix_get(gy, i, j);
                }
            sgev_dense *fx = nullptr, *fy = nullptr;
            if (sgev_dense_create(n, n, bufx.data(), &fx) != SGEV_OK) return die("gram x features");
            gc.denses.push_back(fx);
            if (sgev_dense_create(n, n, bufy.data(), &fy) != SGEV_OK) return die("gram y features");
            gc.denses.push_back(fy);
            if (sgev_covariance(fx, cca_center, cca_scaled, &sxx) != SGEV_OK) return die("sxx");
            gc.mats.push_back(sxx);
            if (sgev_covariance(fy, cca_center, cca_scaled, &syy) != SGEV_OK) return die("syy");
            gc.mats.push_back(syy);
            if (sgev_cross_covariance(fx, fy, cca_center, cca_scaled, &sxy) != SGEV_OK)
                return die("sxy");
            gc.denses.push_back(sxy);
        }
        gc.opts = build_options(ca);
        if (sgev_solve_cca(sxx, syy, sxy, gc.opts, &gc.result) != SGEV_OK) return die("cca");
        int k = sgev_result_component_count(gc.result);
        for (int c = 0; c < k; ++c) {
            double corr;
            int kx, ky;
            sgev_result_objective(gc.result, c, &corr);
            sgev_result_cardinality(gc.result, 0, c, &kx);
            sgev_result_cardinality(gc.result, 1, c, &ky);
            std::printf("pair %d: correlation %.10g cardinality (%d, %d)\n", c + 1, corr, kx, ky);
        }
        return save_if_requested(ca, gc.result);
    }

    if (fda->parsed()) {
        sgev_dense *c1 = nullptr, *c2 = nullptr;
        if (sgev_dense_load_csv(f_c1.c_str(), &c1) != SGEV_OK) return die(f_c1);
        gc.denses.push_back(c1);
        if (sgev_dense_load_csv(f_c2.c_str(), &c2) != SGEV_OK) return die(f_c2);
        gc.denses.push_back(c2);
        gc.opts = build_options(fa);
        if (sgev_solve_fda(c1, c2, gc.opts, &gc.result) != SGEV_OK) return die("fda");
        double fisher;
        int card;
        sgev_result_objective(gc.result, 0, &fisher);
        sgev_result_cardinality(gc.result, 0, 0, &card);
        std::printf("fisher %.10g\ncardinality %d\nconverged %d\n", fisher, card,
                    sgev_result_converged(gc.result));
        std::vector<double> x(sgev_result_dim(gc.result, 0));
        sgev_result_loading(gc.result, 0, 0, x.data(), x.size());
        print_vector("x", x);
        return save_if_requested(fa, gc.result);
    }

    if (sweep->parsed()) {
        if (sweep_input.empty() == sweep_data.empty()) {
            std::fprintf(stderr, "error: provide exactly one of --input or --data\n");
            return kExitUsage;
        }
        if (sweep_points > 1 && rho_max <= rho_min) {
            std::fprintf(stderr, "error: --rho-max must exceed --rho-min\n");
            return kExitUsage;
        }
        sgev_matrix* a = nullptr;
        if (int rc = load_symmetric(sweep_input, sweep_data, sweep_center, sweep_scaled, gc, &a))
            return rc;
        std::vector<double> grid(sweep_points);
        for (int i = 0; i < sweep_points; ++i)
            grid[i] = sweep_points == 1
                          ? rho_min
                          : rho_min * std::pow(rho_max / rho_min, static_cast<double>(i) / (sweep_points - 1));
        gc.opts = build_options(sa);
        if (sgev_sweep(a, grid.data(), sweep_points, gc.opts, sweep_parallel, &gc.curve) != SGEV_OK)
            return die("sweep");
        for (int i = 0; i < sgev_curve_size(gc.curve); ++i) {
            double rho, pev;
            int card;
            sgev_curve_point(gc.curve, i, &rho, &card, &pev);
            std::printf("rho %.6g cardinality %d pev %.6f\n", rho, card, pev);
        }
        if (!sweep_curve.empty() && sgev_curve_save_csv(gc.curve, sweep_curve.c_str()) != SGEV_OK)
            return die(sweep_curve);
        return 0;
    }

    if (rev->parsed()) {
        if (sgev_result_load(m_model.c_str(), &gc.result) != SGEV_OK) return die(m_model);
        sgev_dense *qs = nullptr, *ts = nullptr;
        if (sgev_dense_load_csv(m_queries.c_str(), &qs) != SGEV_OK) return die(m_queries);
        gc.denses.push_back(qs);
        if (sgev_dense_load_csv(m_targets.c_str(), &ts) != SGEV_OK) return die(m_targets);
        gc.denses.push_back(ts);
        if (sgev_retrieval_eval(gc.result, qs, ts, &gc.report) != SGEV_OK) return die("retrieve-eval");
        std::printf("queries %d\naverage AROC %.6f\n", sgev_report_size(gc.report),
                    sgev_report_average_aroc(gc.report));
        if (!m_out.empty() && sgev_report_save(gc.report, m_out.c_str()) != SGEV_OK) return die(m_out);
        return 0;
    }

    return kExitUsage;
}
