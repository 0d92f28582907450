#ifndef RSTHP_C_H
#define RSTHP_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(RSTHP_BUILDING_LIBRARY)
#define RSTHP_API __attribute__((visibility("default")))
#else
#define RSTHP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsthp_status
{
    RSTHP_OK = 0,
    RSTHP_ERR_ARGUMENT = 1, /* null handle, bad index, malformed argument */
    RSTHP_ERR_CONFIG = 2,   /* invalid experiment or scheme definition */
    RSTHP_ERR_NUMERIC = 3,  /* rank deficiency or other numerical failure */
    RSTHP_ERR_DOMAIN = 4,   /* input outside an operation's domain */
    RSTHP_ERR_IO = 5,
    RSTHP_ERR_INTERNAL = 9
} rsthp_status;

typedef enum rsthp_format
{
    RSTHP_FORMAT_CSV = 0,
    RSTHP_FORMAT_JSON = 1
} rsthp_format;

typedef enum rsthp_error_convention
{
    RSTHP_ERROR_PER_ENTRY = 0,
    RSTHP_ERROR_PER_COMPONENT = 1
} rsthp_error_convention;

typedef struct rsthp_experiment rsthp_experiment;
typedef struct rsthp_results rsthp_results;

typedef struct rsthp_row
{
    char scheme[64];
    double snr_dB;
    double sigma_e2;
    double delta_used;
    double esr_total;
    double esr_common;
    double esr_private;
    double ci_halfwidth;
    int n_channels;
    int n_errors;
    uint64_t seed;
} rsthp_row;

/* Message of the last failed call on this thread; empty after a success. */
RSTHP_API const char *rsthp_last_error(void);
RSTHP_API const char *rsthp_version(void);

/* Experiment definitions. The default experiment has the 12x(6x2) system,
   100x100 Monte Carlo, seed 1 and delta search, but no schemes, SNRs or errors. */
RSTHP_API rsthp_status rsthp_experiment_new(rsthp_experiment **out);
RSTHP_API rsthp_status rsthp_experiment_load(const char *path, rsthp_experiment **out);
RSTHP_API rsthp_status rsthp_experiment_preset(const char *name, uint64_t seed, rsthp_experiment **out);
RSTHP_API void rsthp_experiment_free(rsthp_experiment *exp);

RSTHP_API rsthp_status rsthp_experiment_set_seed(rsthp_experiment *exp, uint64_t seed);
RSTHP_API rsthp_status rsthp_experiment_set_monte_carlo(rsthp_experiment *exp, int channels, int errors);
/* Comma-separated scheme identifiers, e.g. "zf-dthp,rs-zf-dthp-mmsec". */
RSTHP_API rsthp_status rsthp_experiment_set_schemes(rsthp_experiment *exp, const char *ids);
RSTHP_API rsthp_status rsthp_experiment_set_snr_grid(rsthp_experiment *exp, const double *snr_dB, size_t count);
RSTHP_API rsthp_status rsthp_experiment_set_error_fixed(rsthp_experiment *exp, const double *sigma_e2, size_t count,
                                                        rsthp_error_convention convention);
RSTHP_API rsthp_status rsthp_experiment_set_error_scaled(rsthp_experiment *exp, double scale, double alpha,
                                                         rsthp_error_convention convention);
RSTHP_API rsthp_status rsthp_experiment_set_delta_fixed(rsthp_experiment *exp, double delta);
RSTHP_API rsthp_status rsthp_experiment_set_delta_search(rsthp_experiment *exp, int grid_points, int pilot_channels,
                                                         int pilot_errors);
/* Output path and format stored in a loaded config; path may be empty. */
RSTHP_API rsthp_status rsthp_experiment_output(const rsthp_experiment *exp, const char **path, rsthp_format *format);

RSTHP_API rsthp_status rsthp_run(const rsthp_experiment *exp, int threads, rsthp_results **out);
/* ESR at `points` evenly spaced delta values in [0, 1] for every
   (error model, RS scheme, SNR) of the experiment; delta_used holds the point. */
RSTHP_API rsthp_status rsthp_sweep_delta(const rsthp_experiment *exp, int points, int threads, rsthp_results **out);

RSTHP_API size_t rsthp_results_count(const rsthp_results *res);
RSTHP_API rsthp_status rsthp_results_row(const rsthp_results *res, size_t index, rsthp_row *out);
/* path "-" writes to standard output. */
RSTHP_API rsthp_status rsthp_results_write(const rsthp_results *res, const char *path, rsthp_format format);
RSTHP_API void rsthp_results_free(rsthp_results *res);

/* Closed-form operation count as an exact fraction num/den. */
RSTHP_API rsthp_status rsthp_flops(const char *scheme, int64_t n, int64_t K, int64_t *num, int64_t *den);
/* Identifiers accepted by rsthp_flops, comma-separated. */
RSTHP_API const char *rsthp_flops_schemes(void);

#ifdef __cplusplus
}
#endif

#endif
