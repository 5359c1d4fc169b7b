/*
 * C interface to the generank solver library.
 *
 * Objects are opaque handles created by gr_*_create / gr_*_read style
 * functions and released with the matching gr_*_free. Every fallible call
 * returns a gr_status; on failure a message describing the most recent error
 * on the calling thread is available from gr_last_error().
 *
 * Vectors cross the boundary as (pointer, length) pairs. Output buffers are
 * caller-allocated; a length that does not match the object dimension is
 * reported as GR_ERR_DIMENSION.
 */
#ifndef GENERANK_H
#define GENERANK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(GENERANK_BUILDING_LIBRARY)
#define GR_API __declspec(dllexport)
#else
#define GR_API __declspec(dllimport)
#endif
#else
#define GR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gr_status {
  GR_OK = 0,
  GR_ERR_INVALID_ARGUMENT = 1,
  GR_ERR_DIMENSION = 2,
  GR_ERR_PARSE = 3,
  GR_ERR_IO = 4,
  GR_ERR_VALIDATION = 5,
  GR_ERR_BREAKDOWN = 6,
  GR_ERR_CAP_EXCEEDED = 7,
  GR_ERR_SINGULAR = 8,
  GR_ERR_INTERNAL = 9
} gr_status;

typedef enum gr_method {
  GR_METHOD_CG = 0,
  GR_METHOD_PCG_JACOBI = 1,
  GR_METHOD_CHEBYSHEV = 2,
  GR_METHOD_CG_MALPHA = 3
} gr_method;

typedef enum gr_operator {
  GR_OP_J = 0,
  GR_OP_S = 1,
  GR_OP_M = 2,
  GR_OP_T = 3,
  GR_OP_SPD = 4
} gr_operator;

typedef enum gr_expression_kind {
  GR_EX_UNIFORM = 0,
  GR_EX_RANDOM = 1,
  GR_EX_FILE = 2
} gr_expression_kind;

typedef enum gr_verdict { GR_PASS = 0, GR_FAIL = 1, GR_SKIPPED = 2 } gr_verdict;

typedef struct gr_matrix gr_matrix;
typedef struct gr_genes gr_genes;
typedef struct gr_problem gr_problem;
typedef struct gr_report gr_report;
typedef struct gr_theorems gr_theorems;
typedef struct gr_bench gr_bench;

/* Auto residual-check interval (every iteration up to 1e5 unknowns). */
#define GR_RESIDUAL_CHECK_AUTO ((size_t)-1)

typedef struct gr_solver_config {
  gr_method method;
  double tol;
  size_t max_iter;
  int deterministic;
  size_t residual_check_interval;
} gr_solver_config;

typedef struct gr_provenance {
  const char* matrix;
  const char* ex_kind;
  uint64_t seed;
  size_t nnz;
} gr_provenance;

GR_API const char* gr_version(void);
GR_API const char* gr_last_error(void);
GR_API const char* gr_status_string(gr_status status);

/* ---- matrices ---------------------------------------------------------- */

GR_API gr_status gr_matrix_read_mm(const char* path, gr_matrix** out);
GR_API gr_status gr_matrix_write_mm(const gr_matrix* matrix, const char* path);
/* Undirected 0/1 adjacency from 0-based edge endpoints (edge k joins
 * first[k] and second[k]). */
GR_API gr_status gr_matrix_from_edges(size_t n, const size_t* first, const size_t* second,
                                      size_t edge_count, gr_matrix** out);
GR_API gr_status gr_matrix_renga(size_t n, double lambda, double beta, uint64_t seed,
                                 gr_matrix** out);
GR_API gr_status gr_matrix_random(size_t n, double density, uint64_t seed, gr_matrix** out);
/* Adjacency from a gene<TAB>annotation file; genes receives the row order. */
GR_API gr_status gr_matrix_from_annotations(const char* tsv_path, gr_matrix** out,
                                            gr_genes** genes);
GR_API size_t gr_matrix_dim(const gr_matrix* matrix);
GR_API size_t gr_matrix_nnz(const gr_matrix* matrix);
GR_API gr_status gr_matrix_spmv(const gr_matrix* matrix, const double* v, size_t n,
                                double* out);
GR_API void gr_matrix_free(gr_matrix* matrix);

/* ---- gene identifiers -------------------------------------------------- */

/* One identifier per line. */
GR_API gr_status gr_genes_read(const char* path, gr_genes** out);
GR_API gr_status gr_genes_write(const gr_genes* genes, const char* path);
GR_API size_t gr_genes_count(const gr_genes* genes);
/* NULL when index is out of range. Valid until the handle is freed. */
GR_API const char* gr_genes_at(const gr_genes* genes, size_t index);
GR_API void gr_genes_free(gr_genes* genes);

/* ---- expression vectors ----------------------------------------------- */

/* Fills out[0..n). For GR_EX_FILE, path names a one-value-per-line or
 * `gene_id,ex` CSV file; when genes is non-NULL CSV rows are matched to it. */
GR_API gr_status gr_expression_make(gr_expression_kind kind, size_t n, uint64_t seed,
                                    const char* path, const gr_genes* genes, double* out);

/* ---- problems and operators ------------------------------------------- */

/* The problem keeps its own reference to the matrix; the matrix handle may be
 * freed afterwards. */
GR_API gr_status gr_problem_create(const gr_matrix* adjacency, double alpha, const double* ex,
                                   size_t n, gr_problem** out);
GR_API gr_status gr_problem_with_alpha(const gr_problem* problem, double alpha,
                                       gr_problem** out);
GR_API size_t gr_problem_dim(const gr_problem* problem);
GR_API double gr_problem_alpha(const gr_problem* problem);
GR_API gr_status gr_problem_degrees(const gr_problem* problem, double* out, size_t n);
GR_API gr_status gr_problem_apply(const gr_problem* problem, gr_operator op, const double* v,
                                  size_t n, double* out);
GR_API void gr_problem_free(gr_problem* problem);

/* Gene indices (0-based) ordered by descending score; ties by index. */
GR_API gr_status gr_rank_genes(const double* x, size_t n, size_t* order);

/* ---- solving ------------------------------------------------------------ */

GR_API gr_solver_config gr_solver_config_default(void);
GR_API gr_status gr_method_parse(const char* name, gr_method* out);
GR_API const char* gr_method_name(gr_method method);

/* A solve that hits max_iter still returns GR_OK with converged == 0. */
GR_API gr_status gr_solve(const gr_problem* problem, const gr_solver_config* config,
                          gr_report** out);
GR_API gr_method gr_report_method(const gr_report* report);
GR_API size_t gr_report_iterations(const gr_report* report);
GR_API int gr_report_converged(const gr_report* report);
GR_API double gr_report_wall_time(const gr_report* report);
GR_API double gr_report_final_spd_residual(const gr_report* report);
GR_API size_t gr_report_history_length(const gr_report* report);
GR_API gr_status gr_report_history(const gr_report* report, double* out, size_t length);
GR_API size_t gr_report_dim(const gr_report* report);
/* GeneRank scores x. */
GR_API gr_status gr_report_solution(const gr_report* report, double* out, size_t n);
GR_API gr_status gr_report_write_json(const gr_report* report, const gr_provenance* provenance,
                                      const char* path);
/* genes may be NULL; rows are then numbered from 1. */
GR_API gr_status gr_report_write_ranking(const gr_report* report, const gr_genes* genes,
                                         const char* path);
GR_API void gr_report_free(gr_report* report);

/* ---- spectral checks --------------------------------------------------- */

GR_API gr_status gr_dense_spectrum(const gr_problem* problem, gr_operator op, size_t cap,
                                   double* out, size_t n);
GR_API gr_status gr_lanczos_extremes(const gr_problem* problem, gr_operator op, size_t iters,
                                     uint64_t seed, double* lambda_min, double* lambda_max,
                                     int* breakdown);
GR_API gr_status gr_write_eigenvalues(const double* values, size_t n, const char* path);

GR_API gr_status gr_check_theorems(const gr_problem* problem, size_t dense_cap,
                                   size_t lanczos_iters, uint64_t seed, gr_theorems** out);
GR_API int gr_theorems_passed(const gr_theorems* report);
GR_API size_t gr_theorems_count(const gr_theorems* report);
GR_API const char* gr_theorems_id(const gr_theorems* report, size_t index);
GR_API const char* gr_theorems_statement(const gr_theorems* report, size_t index);
GR_API gr_verdict gr_theorems_verdict(const gr_theorems* report, size_t index);
GR_API const char* gr_theorems_detail(const gr_theorems* report, size_t index);
GR_API double gr_theorems_cond_s(const gr_theorems* report);
GR_API double gr_theorems_cond_t(const gr_theorems* report);
GR_API void gr_theorems_free(gr_theorems* report);

/* ---- benchmark grid ----------------------------------------------------- */

typedef struct gr_bench_spec {
  const gr_matrix* matrix;
  const char* matrix_label;
  const double* ex;
  size_t n;
  const char* ex_label;
  const double* alphas;
  size_t alpha_count;
  const gr_method* methods;
  size_t method_count;
  double tol;
  size_t max_iter;
  size_t reps;
} gr_bench_spec;

GR_API gr_status gr_bench_run(const gr_bench_spec* spec, gr_bench** out);
GR_API int gr_bench_all_converged(const gr_bench* bench);
GR_API size_t gr_bench_cell_count(const gr_bench* bench);
GR_API gr_status gr_bench_cell(const gr_bench* bench, size_t index, double* alpha,
                               gr_method* method, size_t* iterations, int* converged,
                               double* median_seconds, double* setup_seconds);
/* Aligned text table; valid until the handle is freed. */
GR_API const char* gr_bench_table(const gr_bench* bench);
GR_API gr_status gr_bench_write_csv(const gr_bench* bench, const char* path);
GR_API void gr_bench_free(gr_bench* bench);

#ifdef __cplusplus
}
#endif

#endif /* GENERANK_H */
