/*
 * gldemu - stochastic simulator emulation with generalized lambda
 * distributions whose parameters are polynomial chaos expansions.
 *
 * C API over the core library: opaque handles, integer status codes, and a
 * thread-local error message. All functions return GLDEMU_OK (0) on success.
 */
#ifndef GLDEMU_H
#define GLDEMU_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GLDEMU_API __declspec(dllexport)
#else
#define GLDEMU_API __attribute__((visibility("default")))
#endif

typedef enum gldemu_status {
  GLDEMU_OK = 0,
  GLDEMU_E_USAGE = 2,    /* invalid arguments / preconditions */
  GLDEMU_E_DATA = 3,     /* malformed or inconsistent data */
  GLDEMU_E_FIT = 4,      /* fitting failed */
  GLDEMU_E_DOMAIN = 5,   /* point outside a mathematical domain */
  GLDEMU_E_IO = 6,       /* file system problem */
  GLDEMU_E_INTERNAL = 7  /* unexpected failure */
} gldemu_status;

typedef struct gldemu_dataset gldemu_dataset; /* replicated experimental design */
typedef struct gldemu_model gldemu_model;     /* fitted lambda surrogate */

/* Message for the most recent failure on this thread; never NULL. */
GLDEMU_API const char *gldemu_last_error(void);

GLDEMU_API const char *gldemu_version(void);

/* ---- datasets ---------------------------------------------------------- */

/* Runs the named reference case (example1, example2, sde) on a Sobol' design
 * of n_points with n_replications per point. */
GLDEMU_API int gldemu_simulate(const char *case_name, int n_points, int n_replications,
                               uint64_t seed, gldemu_dataset **out);

/* Loads a long-format CSV (header x1,...,xM,rep,y). case_name may be NULL;
 * when given it supplies the input marginals, otherwise uniform marginals are
 * inferred from the data ranges. */
GLDEMU_API int gldemu_dataset_load(const char *csv_path, const char *case_name,
                                   gldemu_dataset **out);

GLDEMU_API int gldemu_dataset_save(const gldemu_dataset *d, const char *csv_path);

GLDEMU_API int gldemu_dataset_shape(const gldemu_dataset *d, int *n_points, int *input_dim,
                                    int *n_replications);

GLDEMU_API void gldemu_dataset_free(gldemu_dataset *d);

/* ---- fitting ----------------------------------------------------------- */

/* method: infer-mm | infer-mle | joint-mm | joint-mle.
 * pmax < 0 selects the default degree cap for the input dimension.
 * seed drives the stochastic fallback stage of the joint methods. */
GLDEMU_API int gldemu_fit(const gldemu_dataset *d, const char *method, int pmax, uint64_t seed,
                          gldemu_model **out);

/* ---- models ------------------------------------------------------------ */

GLDEMU_API int gldemu_model_save(const gldemu_model *m, const char *json_path);
GLDEMU_API int gldemu_model_load(const char *json_path, gldemu_model **out);
GLDEMU_API int gldemu_model_input_dim(const gldemu_model *m, int *input_dim);

/* Distribution parameters lambda1..lambda4 at input point x. */
GLDEMU_API int gldemu_model_lambda(const gldemu_model *m, const double *x, int input_dim,
                                   double lambda_out[4]);

/* Support bounds at x; infinite ends are +-HUGE_VAL. */
GLDEMU_API int gldemu_model_support(const gldemu_model *m, const double *x, int input_dim,
                                    double *lower, double *upper);

/* Quantile Q(u), u in [0,1]. */
GLDEMU_API int gldemu_model_quantile(const gldemu_model *m, const double *x, int input_dim,
                                     double u, double *out);

/* Density at output value y (0 outside the support). */
GLDEMU_API int gldemu_model_pdf(const gldemu_model *m, const double *x, int input_dim, double y,
                                double *out);

GLDEMU_API void gldemu_model_free(gldemu_model *m);

/* ---- benchmark --------------------------------------------------------- */

typedef struct gldemu_benchmark_config {
  const char *case_name;
  const char *methods;  /* comma separated list */
  const int *n_values;
  int n_count;
  const int *r_values;
  int r_count;
  int repetitions;
  int pmax;             /* < 0: default */
  int test_points;      /* <= 0: 1000 */
  int kde_replications; /* <= 0: 2000 (sde reference budget) */
  uint64_t seed;
} gldemu_benchmark_config;

/* Runs the convergence-study protocol and writes one CSV row per
 * (method, N, R, repetition), sorted, with columns
 * N,R,method,repetition,epsilon,runtime_seconds. */
GLDEMU_API int gldemu_benchmark(const gldemu_benchmark_config *cfg, const char *out_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GLDEMU_H */
