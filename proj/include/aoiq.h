/* C interface to the discrete-time age-of-information analysis library.
 *
 * All entry points return an aoiq_status; outputs are written through
 * pointers. On any failure the return value is nonzero and a human-readable
 * message is available from aoiq_last_error() (thread-local). Handles created
 * by the create/simulate calls are owned by the caller and released with the
 * matching free call.
 */
#ifndef AOIQ_H
#define AOIQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AOIQ_API __declspec(dllexport)
#else
#define AOIQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aoiq_status {
  AOIQ_OK = 0,
  AOIQ_ERROR = 1,         /* unexpected internal failure */
  AOIQ_ERR_INVALID = 2,   /* invalid parameters or model misuse */
  AOIQ_ERR_ACCURACY = 3,  /* accuracy, convergence, or divergence failure */
} aoiq_status;

typedef enum aoiq_model_kind {
  AOIQ_MODEL_FCFS = 0,
  AOIQ_MODEL_LCFS_PREEMPTIVE = 1,
  AOIQ_MODEL_BUFFERLESS = 2,
} aoiq_model_kind;

typedef enum aoiq_metric {
  AOIQ_METRIC_COUD = 0,
  AOIQ_METRIC_PCOUD = 1,
} aoiq_metric;

typedef enum aoiq_dist {
  AOIQ_DIST_AOI = 0,
  AOIQ_DIST_PAOI = 1,
  AOIQ_DIST_SYSTEM_TIME = 2,
} aoiq_dist;

typedef enum aoiq_cost_kind {
  AOIQ_COST_LINEAR = 0,      /* alpha * t */
  AOIQ_COST_POWER = 1,       /* alpha * t^power */
  AOIQ_COST_AFFINE_QUAD = 2, /* alpha * t^2 + beta * t */
  AOIQ_COST_EXP = 3,         /* exp(alpha * t) - 1 */
  AOIQ_COST_LOG = 4,         /* log(alpha * t + 1) */
  AOIQ_COST_SERIES = 5,      /* sum_k series[k-1] * t^k */
} aoiq_cost_kind;

typedef struct aoiq_cost {
  aoiq_cost_kind kind;
  double alpha;
  double beta;
  int power;
  const double* series; /* AOIQ_COST_SERIES only; series_len coefficients */
  int series_len;
} aoiq_cost;

typedef struct aoiq_model aoiq_model; /* opaque: a validated parameter set */
typedef struct aoiq_sim aoiq_sim;     /* opaque: results of one simulated run */

AOIQ_API const char* aoiq_version(void);
AOIQ_API const char* aoiq_last_error(void);

/* mu is ignored by the bufferless model; p is used only by it. */
AOIQ_API aoiq_status aoiq_model_create(aoiq_model_kind kind, double lambda, double mu, double p,
                                       aoiq_model** out);
AOIQ_API void aoiq_model_free(aoiq_model* model);

/* Stationary masses and distribution values at integer age x. */
AOIQ_API aoiq_status aoiq_aoi_pmf(const aoiq_model* model, int x, double* out);
AOIQ_API aoiq_status aoiq_paoi_pmf(const aoiq_model* model, int x, double* out);
AOIQ_API aoiq_status aoiq_aoi_cdf(const aoiq_model* model, int x, double* out);
AOIQ_API aoiq_status aoiq_paoi_cdf(const aoiq_model* model, int x, double* out);
AOIQ_API aoiq_status aoiq_system_time_pmf(const aoiq_model* model, int x, double* out);

/* Cost means: closed form, pmf summation, and the power-series route for
 * non-polynomial costs (probe_t / epsilon drive the expansion length). */
AOIQ_API aoiq_status aoiq_cost_mean_closed(const aoiq_model* model, aoiq_metric metric,
                                           const aoiq_cost* cost, double* out);
AOIQ_API aoiq_status aoiq_cost_mean_numeric(const aoiq_model* model, aoiq_metric metric,
                                            const aoiq_cost* cost, double tail_tol, double* out);
AOIQ_API aoiq_status aoiq_cost_mean_series(const aoiq_model* model, aoiq_metric metric,
                                           const aoiq_cost* cost, int probe_t, double epsilon,
                                           double* out);

/* Gap trajectory of the power-series approximation: gaps[k-1] holds the
 * probe-point gap after k terms. *k_out is the first k below epsilon. */
AOIQ_API aoiq_status aoiq_approximate(const aoiq_cost* cost, int probe_t, double epsilon,
                                      int max_k, double* gaps, int* k_out);

AOIQ_API aoiq_status aoiq_optimal_lambda_pcoud_closed(double mu, double* out);

typedef struct aoiq_opt_result {
  double lambda_star;
  double objective_value;
  int iterations;
  double bracket_lo;
  double bracket_hi;
  int method; /* 0 closed form, 1 golden section */
} aoiq_opt_result;

AOIQ_API aoiq_status aoiq_optimal_lambda(aoiq_model_kind kind, const aoiq_cost* cost,
                                         aoiq_metric metric, double mu, double p, double tol,
                                         aoiq_opt_result* out);

/* Slot-level Monte-Carlo run; deterministic for a given seed. */
AOIQ_API aoiq_status aoiq_simulate(const aoiq_model* model, uint64_t horizon_slots,
                                   uint64_t warmup_slots, uint64_t seed, int x_max_histogram,
                                   int record_trace, aoiq_sim** out);
AOIQ_API void aoiq_sim_free(aoiq_sim* sim);

AOIQ_API uint64_t aoiq_sim_deliveries(const aoiq_sim* sim);
AOIQ_API uint64_t aoiq_sim_slots(const aoiq_sim* sim);
AOIQ_API double aoiq_sim_rate(const aoiq_sim* sim);
AOIQ_API double aoiq_sim_mean(const aoiq_sim* sim, aoiq_dist which);

/* buf[i] receives the empirical mass at value i (i = 0 .. buf_len-1); mass
 * beyond buf_len is reported through *tail (may be NULL). */
AOIQ_API aoiq_status aoiq_sim_pmf(const aoiq_sim* sim, aoiq_dist which, double* buf, int buf_len,
                                  double* tail);

AOIQ_API aoiq_status aoiq_sim_stationary_residual(const aoiq_sim* sim, int x_limit, double* residual,
                                                double* renewal_rate_gap, int* low_confidence);
AOIQ_API aoiq_status aoiq_sim_cost_mean(const aoiq_sim* sim, const aoiq_cost* cost, double* coud,
                                        double* pcoud);

typedef struct aoiq_delivery {
  uint64_t n;
  int64_t t_generated;
  int64_t t_delivered;
  int64_t system_time;
  int64_t peak_age;
} aoiq_delivery;

AOIQ_API uint64_t aoiq_sim_trace_len(const aoiq_sim* sim);
AOIQ_API aoiq_status aoiq_sim_trace_get(const aoiq_sim* sim, uint64_t index, aoiq_delivery* out);

#ifdef __cplusplus
}
#endif

#endif /* AOIQ_H */
