/*
 * flq — range-limited frustrated-loop Ising benchmark library.
 *
 * C interface of the shared library. Objects are opaque handles created and
 * destroyed through the functions below; every fallible call returns an
 * flq_status, with a thread-local message available from flq_last_error().
 */
#ifndef FLQ_H
#define FLQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FLQ_API __attribute__((visibility("default")))

typedef enum flq_status {
    FLQ_OK = 0,
    FLQ_ERR_INVALID = 1,    /* invalid argument or precondition */
    FLQ_ERR_IO = 2,         /* filesystem failure */
    FLQ_ERR_PARSE = 3,      /* malformed input file */
    FLQ_ERR_VALIDATION = 4, /* well-formed input violating an invariant */
    FLQ_ERR_EXHAUSTED = 5,  /* loop generation exceeded its attempt budget */
    FLQ_ERR_LIMIT = 6       /* refused: problem size over a hard limit */
} flq_status;

/* Message for the most recent failure on this thread. */
FLQ_API const char *flq_last_error(void);

/* ------------------------------------------------------------------ */
/* Seed derivation: h <- splitmix64(h ^ word) chained over the words,
 * starting from the golden-ratio constant. Instance seeds are
 *   flq_hash64({master, L, alpha_num, alpha_den, R (UINT64_MAX = inf), index})
 * and solver substreams derive the same way, so any part of an experiment
 * can be regenerated externally. */
FLQ_API uint64_t flq_hash64(const uint64_t *words, size_t count);

/* ------------------------------------------------------------------ */
/* Chimera topology                                                    */

typedef struct flq_topology flq_topology;

/* L x L grid of 8-qubit cells, full yield; 1 <= L <= 64. */
FLQ_API flq_status flq_topology_build(uint32_t grid, flq_topology **out);
/* Copy with the listed qubits (and their edges) removed. */
FLQ_API flq_status flq_topology_mask(const flq_topology *topo, const uint32_t *broken,
                                     size_t count, flq_topology **out);
FLQ_API void flq_topology_free(flq_topology *topo);

FLQ_API uint32_t flq_topology_grid(const flq_topology *topo);
FLQ_API uint32_t flq_topology_qubits(const flq_topology *topo);     /* N = 8 L^2 */
FLQ_API uint32_t flq_topology_functional(const flq_topology *topo); /* n */
FLQ_API size_t flq_topology_edge_count(const flq_topology *topo);
FLQ_API flq_status flq_topology_edge(const flq_topology *topo, size_t index, uint32_t *u,
                                     uint32_t *v);
/* Cell coordinate of a qubit under the canonical indexing
 * qubit = 8*(row*L + col) + k, k < 4 horizontal. */
FLQ_API flq_status flq_topology_cell_of(const flq_topology *topo, uint32_t qubit, uint32_t *row,
                                        uint32_t *col);

/* ------------------------------------------------------------------ */
/* Frustrated-loop instances                                           */

typedef struct flq_instance flq_instance;

#define FLQ_RANGE_UNLIMITED (-1)

typedef enum flq_loop_policy {
    FLQ_POLICY_CELL_REJECTION = 0, /* discard loops inside one unit cell */
    FLQ_POLICY_HEN_MIN_LENGTH = 1  /* discard loops shorter than 8 vertices */
} flq_loop_policy;

/* Plants the all-up/all-down ground state from roundoff(alpha * n) random
 * frustrated loops, honoring the coupling-range limit (>= 2, or
 * FLQ_RANGE_UNLIMITED). Deterministic in every argument. */
FLQ_API flq_status flq_generate(const flq_topology *topo, int64_t alpha_num, int64_t alpha_den,
                                int32_t range_limit, flq_loop_policy policy, uint64_t seed,
                                flq_instance **out);
FLQ_API void flq_instance_free(flq_instance *instance);

FLQ_API int64_t flq_instance_planted_energy(const flq_instance *instance);
FLQ_API int32_t flq_instance_coupling_range(const flq_instance *instance); /* max |J| */
FLQ_API int64_t flq_instance_loop_count(const flq_instance *instance);
FLQ_API uint32_t flq_instance_functional(const flq_instance *instance);
FLQ_API uint32_t flq_instance_grid(const flq_instance *instance);

FLQ_API flq_status flq_instance_write(const flq_instance *instance, const char *path);
FLQ_API flq_status flq_instance_read(const char *path, flq_instance **out);

/* ------------------------------------------------------------------ */
/* Solvers                                                             */

typedef struct flq_result flq_result;

typedef struct flq_solver_params {
    uint64_t sweeps;            /* sa schedule length (default 1000) */
    double beta_start;          /* default 0.01 */
    double beta_final;          /* default 5 */
    uint64_t max_restarts;      /* sas (default 100) */
    uint64_t repetitions;       /* saa (default 100) */
    uint64_t stall_rounds;      /* hfs; 0 = 100 * L */
    uint64_t subsets_per_round; /* hfs (default 1) */
    uint32_t tree_cap;          /* hfs; 0 = 2 * L */
    uint64_t max_rounds;        /* hfs; 0 = unbounded */
    double delta_h, delta_j;    /* control-error noise widths (sa solvers) */
    uint64_t seed;
} flq_solver_params;

FLQ_API void flq_solver_params_init(flq_solver_params *params);

/* Runs solver "sas" | "saa" | "hfs" | "brute" against the instance's
 * planted target. */
FLQ_API flq_status flq_solve(const flq_instance *instance, const char *solver,
                             const flq_solver_params *params, flq_result **out);
FLQ_API void flq_result_free(flq_result *result);

FLQ_API double flq_result_best_energy(const flq_result *result); /* instance units */
FLQ_API int flq_result_success(const flq_result *result);
FLQ_API uint64_t flq_result_successes(const flq_result *result); /* successful trials */
FLQ_API uint64_t flq_result_trials(const flq_result *result);    /* anneals/repetitions/runs */
FLQ_API double flq_result_work(const flq_result *result);
FLQ_API double flq_result_model_time_us(const flq_result *result);

/* One-line JSON record: {solver, instance_id, seed, sweeps|rounds, restarts,
 * best_energy, success, work, model_time_us}. Free with flq_string_free. */
FLQ_API flq_status flq_result_record_json(const flq_result *result, const char *instance_id,
                                          char **out);
FLQ_API void flq_string_free(char *text);

/* ------------------------------------------------------------------ */
/* Analysis                                                            */

/* R99 time to solution; +inf when p_hat is 0, capped at run_time/divisor
 * when p_hat >= 0.99. NaN signals an invalid argument. */
FLQ_API double flq_tts_r99(double p_hat, double run_time_us, double divisor);

/* Bootstrap of the median (resampling with replacement, >= 100 resamples).
 * Infinite inputs participate in the order statistics; their fraction is
 * reported separately. */
FLQ_API flq_status flq_median_bootstrap(const double *values, size_t count, uint32_t resamples,
                                        uint64_t seed, double *median, double *stddev,
                                        double *unsolved_fraction);

/* Least squares of ln(value) against size. */
FLQ_API flq_status flq_fit_log_slope(const double *sizes, const double *values, size_t count,
                                     double *slope, double *intercept);

/* Pearson correlation; *defined is 0 when a side has zero variance. */
FLQ_API flq_status flq_pearson(const double *a, const double *b, size_t count, double *r,
                               int *defined);

/* ------------------------------------------------------------------ */
/* Experiment pipeline                                                 */

/* Generates one instance file per (size, alpha, range, index) under
 * out_dir/instances plus out_dir/manifest.csv. ranges use
 * FLQ_RANGE_UNLIMITED for inf; alphas are num/den pairs (alphas_num[i],
 * alphas_den[i]). Exhausted instances are recorded, not fatal; *exhausted
 * (optional) receives their count. */
FLQ_API flq_status flq_generate_corpus(const uint32_t *sizes, size_t size_count,
                                       const int64_t *alphas_num, const int64_t *alphas_den,
                                       size_t alpha_count, const int32_t *ranges,
                                       size_t range_count, flq_loop_policy policy,
                                       uint32_t instances_per_class, uint64_t master_seed,
                                       const char *out_dir, size_t *exhausted);

/* Analyzes a result log against its manifest, writing tts_median.csv,
 * ratio.csv, scaling.csv and scatter.csv into out_dir. *summary_out
 * (optional) receives a malloc'd text summary; free with flq_string_free. */
FLQ_API flq_status flq_analyze(const char *results_path, const char *manifest_path,
                               const char *out_dir, uint32_t bootstrap_resamples,
                               uint64_t bootstrap_seed, char **summary_out);

#ifdef __cplusplus
}
#endif

#endif /* FLQ_H */
