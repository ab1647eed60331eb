/* hmjp - transition-rate estimation for intermittently observed two-state
 * Markov jump processes.
 *
 * C interface of the shared library. All functions return an hmjp_status;
 * on failure a thread-local message is available from hmjp_last_error().
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function.
 */
#ifndef HMJP_H
#define HMJP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HMJP_VERSION_STRING "0.1.0"

typedef enum {
  HMJP_OK = 0,
  HMJP_ERR_USAGE = 1,   /* invalid arguments or configuration */
  HMJP_ERR_DATA = 2,    /* malformed or unusable input data */
  HMJP_ERR_NUMERIC = 3  /* numeric failure or aborted computation */
} hmjp_status;

typedef enum {
  HMJP_CONSTANT = 0,
  HMJP_WEIBULL = 1,
  HMJP_GOMPERTZ = 2
} hmjp_family;

/* intensity lambda(t): constant rate; weibull rate*shape*t^(shape-1);
 * gompertz rate*exp(shape*t) */
typedef struct {
  hmjp_family family;
  double shape; /* ignored (pinned to 1) for the constant family */
  double rate;
} hmjp_rate_spec;

typedef struct {
  hmjp_rate_spec channel0;   /* 0 -> 1 transitions */
  hmjp_rate_spec channel1;   /* 1 -> 0 transitions */
  double init_prob_state1;   /* P(first observed state is 1) */
} hmjp_model_spec;

typedef struct {
  hmjp_family family;
  long iterations;        /* default 5000 */
  long burn_in;           /* default 1000 */
  long thin;              /* default 1 */
  double prior_rate_a;    /* Gamma prior on rates, default 0.1 */
  double prior_rate_b;    /* default 0.1 */
  double prior_shape_alpha; /* Gamma prior on shapes, default 1 */
  double prior_shape_beta;  /* default 1 */
  double proposal_sd;     /* log-normal walk scale for shapes, default 0.1 */
  long max_attempts;      /* rejection cap per interval, default 1000000 */
  uint64_t seed;
  int threads;            /* workers for augmentation; no effect on results */
  int adapt_proposal;     /* tune proposal_sd during burn-in (default on) */
} hmjp_fit_options;

typedef struct hmjp_panel hmjp_panel;
typedef struct hmjp_chain hmjp_chain;

const char *hmjp_version(void);
const char *hmjp_last_error(void);
void hmjp_string_free(char *s);

void hmjp_fit_options_init(hmjp_fit_options *opt);

/* ---- panel data ------------------------------------------------------- */

/* CSV with header subject,time,state; '#' comment lines are skipped. */
hmjp_status hmjp_panel_read_csv(const char *path, hmjp_panel **out);
/* Same layout, state column optional: visit-time grids for simulation. */
hmjp_status hmjp_grid_read_csv(const char *path, hmjp_panel **out);
/* manifest: newline-separated key=value lines written as '#' comments. */
hmjp_status hmjp_panel_write_csv(const hmjp_panel *p, const char *path,
                                 const char *manifest);
void hmjp_panel_free(hmjp_panel *p);

long hmjp_panel_num_subjects(const hmjp_panel *p);
long hmjp_panel_num_observations(const hmjp_panel *p);
long hmjp_panel_num_intervals(const hmjp_panel *p);

/* Validation report as text; *n_violations = 0 for a valid panel. */
hmjp_status hmjp_panel_validate(const hmjp_panel *p, char **report,
                                int *n_violations);

/* ---- simulation ------------------------------------------------------- */

hmjp_status hmjp_simulate_regular(const hmjp_model_spec *m, long subjects,
                                  long visits, double horizon, uint64_t seed,
                                  hmjp_panel **out);
hmjp_status hmjp_simulate_on_grid(const hmjp_model_spec *m,
                                  const hmjp_panel *grid, uint64_t seed,
                                  hmjp_panel **out);

/* ---- transition probabilities ----------------------------------------- */

/* out is row-major: p00, p01, p10, p11. */
hmjp_status hmjp_tpm_closed_form(double lambda0, double lambda1, double s,
                                 double t, double out[4]);
hmjp_status hmjp_tpm_quadrature(const hmjp_model_spec *m, double s, double t,
                                double rel_tol, double out[4]);

/* ---- fitting ---------------------------------------------------------- */

hmjp_status hmjp_fit(const hmjp_panel *p, const hmjp_fit_options *opt,
                     hmjp_chain **out);

/* Exact maximum likelihood for the constant-rate model with 95% Wald
 * intervals; boundary[k] is set when channel k shows no transitions (the
 * estimate is the 0 boundary and its interval is NaN). */
hmjp_status hmjp_exact_fit_constant(const hmjp_panel *p,
                                    double init_prob_state1, double est[2],
                                    double ci_low[2], double ci_high[2],
                                    int boundary[2]);

/* ---- chains ------------------------------------------------------------ */

void hmjp_chain_free(hmjp_chain *c);
long hmjp_chain_num_draws(const hmjp_chain *c);

/* Columns: iteration,gamma0,lambda0,gamma1,lambda1,accept0,accept1,trunc0,trunc1 */
hmjp_status hmjp_chain_write_csv(const hmjp_chain *c, const char *path,
                                 const char *manifest);
hmjp_status hmjp_chain_read_csv(const char *path, hmjp_chain **out);

/* Order: gamma0, lambda0, gamma1, lambda1. */
hmjp_status hmjp_chain_summary(const hmjp_chain *c, double median[4],
                               double lo95[4], double hi95[4]);
hmjp_status hmjp_chain_summary_write_csv(const hmjp_chain *c, const char *path,
                                         const char *manifest);
/* n_degenerate (optional) reports how many of the four parameters had zero
 * variance and therefore no density grid; they are flagged in the header. */
hmjp_status hmjp_chain_density_write_csv(const hmjp_chain *c, int grid_points,
                                         const char *path, const char *manifest,
                                         int *n_degenerate);
/* Mean truncated fraction per channel over the recorded sweeps. */
hmjp_status hmjp_chain_truncation(const hmjp_chain *c, double out_frac[2]);

#ifdef __cplusplus
}
#endif

#endif /* HMJP_H */
