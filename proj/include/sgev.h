/* Sparse generalized eigenvalue solvers: sparse PCA / CCA / FDA behind a
 * C interface with opaque handles and status codes.
 *
 * Conventions:
 *   - every fallible call returns sgev_status; SGEV_OK is 0
 *   - sgev_last_error() returns a thread-local message for the last failure
 *   - out-parameters are written only on success
 *   - handles are freed with their matching *_free; free(NULL) is a no-op
 */
#ifndef SGEV_H
#define SGEV_H

#include <stddef.h>

#if defined(_WIN32)
#define SGEV_API __declspec(dllexport)
#else
#define SGEV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgev_status {
    SGEV_OK = 0,
    SGEV_ERR_INVALID_ARGUMENT = 1,
    SGEV_ERR_DIMENSION_MISMATCH = 2,
    SGEV_ERR_NOT_POSITIVE_DEFINITE = 3,
    SGEV_ERR_NOT_CONVERGED = 4,
    SGEV_ERR_MAX_SUB_ITERATIONS = 5,
    SGEV_ERR_ALL_THRESHOLDED = 6,
    SGEV_ERR_ZERO_DIRECTION = 7,
    SGEV_ERR_ZERO_UPDATE = 8,
    SGEV_ERR_EMPTY_SUPPORT = 9,
    SGEV_ERR_RANK_COLLAPSE = 10,
    SGEV_ERR_EARLY_STOP = 11,
    SGEV_ERR_PARSE = 12,
    SGEV_ERR_IO = 13,
    SGEV_ERR_DOMAIN = 14,
    SGEV_ERR_INTERNAL = 15
} sgev_status;

SGEV_API const char* sgev_status_name(sgev_status s);
SGEV_API const char* sgev_last_error(void);
SGEV_API const char* sgev_version(void);

/* ------------------------------------------------------------------ */
/* matrices                                                            */

typedef struct sgev_matrix sgev_matrix; /* dense symmetric */
typedef struct sgev_dense sgev_dense;   /* dense rectangular */

SGEV_API sgev_status sgev_matrix_create(int n, const double* rowmajor, int symmetrize,
                                        sgev_matrix** out);
SGEV_API sgev_status sgev_matrix_load_csv(const char* path, sgev_matrix** out);
SGEV_API int sgev_matrix_dim(const sgev_matrix* m);
SGEV_API double sgev_matrix_get(const sgev_matrix* m, int i, int j);
SGEV_API sgev_status sgev_matrix_fingerprint(const sgev_matrix* m, char* buf, size_t buflen);
SGEV_API void sgev_matrix_free(sgev_matrix* m);

SGEV_API sgev_status sgev_dense_create(int rows, int cols, const double* rowmajor, sgev_dense** out);
SGEV_API sgev_status sgev_dense_load_csv(const char* path, sgev_dense** out);
SGEV_API int sgev_dense_rows(const sgev_dense* m);
SGEV_API int sgev_dense_cols(const sgev_dense* m);
SGEV_API double sgev_dense_get(const sgev_dense* m, int i, int j);
SGEV_API void sgev_dense_free(sgev_dense* m);

/* data -> covariance CtC (optionally column-centered; scaled divides by rows-1) */
SGEV_API sgev_status sgev_covariance(const sgev_dense* data, int center, int scaled,
                                     sgev_matrix** out);
SGEV_API sgev_status sgev_cross_covariance(const sgev_dense* x, const sgev_dense* y, int center,
                                           int scaled, sgev_dense** out);
/* binary bag-of-words -> gram E E^T */
SGEV_API sgev_status sgev_gram_bow(const sgev_dense* docs, sgev_matrix** out);

/* ------------------------------------------------------------------ */
/* options                                                             */

typedef struct sgev_options sgev_options;

SGEV_API sgev_options* sgev_options_create(void);
SGEV_API void sgev_options_free(sgev_options* o);
SGEV_API sgev_status sgev_options_set_rho(sgev_options* o, double rho_tilde);
SGEV_API sgev_status sgev_options_set_epsilon(sgev_options* o, double epsilon);
SGEV_API sgev_status sgev_options_set_tau(sgev_options* o, double tau); /* negative: auto */
SGEV_API sgev_status sgev_options_set_max_iter(sgev_options* o, int max_iter);
SGEV_API sgev_status sgev_options_set_tol(sgev_options* o, double tol_step);
SGEV_API sgev_status sgev_options_set_sub_tol(sgev_options* o, double sub_tol);
SGEV_API sgev_status sgev_options_set_zero_tol(sgev_options* o, double zero_tol);
SGEV_API sgev_status sgev_options_set_components(sgev_options* o, int d);
/* one target per component; overrides rho for the PCA pipeline */
SGEV_API sgev_status sgev_options_set_target_cardinalities(sgev_options* o, const int* targets,
                                                           int count);
/* init: 0 = uniform (default), 1 = random with the given seed */
SGEV_API sgev_status sgev_options_set_init(sgev_options* o, int random_init,
                                           unsigned long long seed);

/* ------------------------------------------------------------------ */
/* results                                                             */

typedef struct sgev_result sgev_result;

SGEV_API const char* sgev_result_solver(const sgev_result* r);
SGEV_API int sgev_result_component_count(const sgev_result* r);
/* side: 0 = primary/x, 1 = y (CCA only) */
SGEV_API int sgev_result_dim(const sgev_result* r, int side);
SGEV_API sgev_status sgev_result_loading(const sgev_result* r, int side, int comp, double* buf,
                                         size_t buflen);
SGEV_API sgev_status sgev_result_objective(const sgev_result* r, int comp, double* out);
SGEV_API sgev_status sgev_result_cardinality(const sgev_result* r, int side, int comp, int* out);
SGEV_API int sgev_result_iterations(const sgev_result* r);
SGEV_API int sgev_result_converged(const sgev_result* r);
SGEV_API sgev_status sgev_result_cumulative_pev(const sgev_result* r, double* out);
SGEV_API sgev_status sgev_result_save(const sgev_result* r, const char* path);
SGEV_API sgev_status sgev_result_load(const char* path, sgev_result** out);
SGEV_API void sgev_result_free(sgev_result* r);

/* ------------------------------------------------------------------ */
/* solvers                                                             */

/* rho = 0 generalized eigenvalue solve; b may be NULL for the identity */
SGEV_API sgev_status sgev_solve_eig(const sgev_matrix* a, const sgev_matrix* b,
                                    const sgev_options* o, sgev_result** out);

/* sparse PCA pipeline: components, per-stage rho tuning, deflation,
 * variational renormalization */
SGEV_API sgev_status sgev_solve_pca(const sgev_matrix* a, const sgev_options* o, sgev_result** out);

/* sparse CCA: d canonical pairs with cross-covariance deflation */
SGEV_API sgev_status sgev_solve_cca(const sgev_matrix* sxx, const sgev_matrix* syy,
                                    const sgev_dense* sxy, const sgev_options* o, sgev_result** out);

/* sparse FDA from per-class data matrices (rows = samples); rho plays nu */
SGEV_API sgev_status sgev_solve_fda(const sgev_dense* class1, const sgev_dense* class2,
                                    const sgev_options* o, sgev_result** out);

/* ------------------------------------------------------------------ */
/* sweep                                                               */

typedef struct sgev_curve sgev_curve;

SGEV_API sgev_status sgev_sweep(const sgev_matrix* a, const double* rho_grid, int grid_len,
                                const sgev_options* o, int parallel, sgev_curve** out);
SGEV_API int sgev_curve_size(const sgev_curve* c);
SGEV_API sgev_status sgev_curve_point(const sgev_curve* c, int i, double* rho, int* cardinality,
                                      double* pev);
SGEV_API sgev_status sgev_curve_save_csv(const sgev_curve* c, const char* path);
SGEV_API void sgev_curve_free(sgev_curve* c);

/* ------------------------------------------------------------------ */
/* retrieval evaluation                                                */

typedef struct sgev_report sgev_report;

/* queries/targets: rows are feature vectors (x side / y side); the relevant
 * target of query i is target i */
SGEV_API sgev_status sgev_retrieval_eval(const sgev_result* cca, const sgev_dense* queries,
                                         const sgev_dense* targets, sgev_report** out);
SGEV_API int sgev_report_size(const sgev_report* r);
SGEV_API sgev_status sgev_report_entry(const sgev_report* r, int i, int* rank, double* aroc);
SGEV_API double sgev_report_average_aroc(const sgev_report* r);
SGEV_API sgev_status sgev_report_save(const sgev_report* r, const char* path);
SGEV_API void sgev_report_free(sgev_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SGEV_H */
