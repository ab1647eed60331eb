#include "hmjp/hmjp.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hmjp/io.hpp"
#include "hmjp/mcmc.hpp"
#include "hmjp/panel.hpp"
#include "hmjp/quadrature.hpp"
#include "hmjp/rates.hpp"
#include "hmjp/simulate.hpp"
#include "hmjp/tpm.hpp"

struct hmjp_panel {
  hmjp::PanelDataset impl;
};

struct hmjp_chain {
  hmjp::ChainOutput impl;
};

namespace {

thread_local std::string g_last_error;

hmjp_status fail(hmjp_status code, const char *what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

// Maps the library's exception taxonomy onto status codes: argument misuse
// is USAGE, malformed input is DATA, numeric trouble is NUMERIC.
hmjp_status translate_current_exception() {
  try {
    throw;
  } catch (const std::invalid_argument &e) {
    return fail(HMJP_ERR_USAGE, e.what());
  } catch (const hmjp::PanelFormatError &e) {
    return fail(HMJP_ERR_DATA, e.what());
  } catch (const hmjp::QuadratureError &e) {
    return fail(HMJP_ERR_NUMERIC, e.what());
  } catch (const hmjp::ChainAborted &e) {
    return fail(HMJP_ERR_NUMERIC, e.what());
  } catch (const hmjp::AugmentationExhausted &e) {
    return fail(HMJP_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc &e) {
    return fail(HMJP_ERR_NUMERIC, "out of memory");
  } catch (const std::exception &e) {
    return fail(HMJP_ERR_DATA, e.what());
  } catch (...) {
    return fail(HMJP_ERR_NUMERIC, "unknown error");
  }
}

hmjp::RateParams to_rate_params(const hmjp_rate_spec &spec) {
  switch (spec.family) {
  case HMJP_CONSTANT: return hmjp::make_constant(spec.rate);
  case HMJP_WEIBULL: return hmjp::make_weibull(spec.shape, spec.rate);
  case HMJP_GOMPERTZ: return hmjp::make_gompertz(spec.shape, spec.rate);
  }
  throw std::invalid_argument("unknown rate family");
}

hmjp::ChannelPair to_channels(const hmjp_model_spec &m) {
  return hmjp::ChannelPair{to_rate_params(m.channel0), to_rate_params(m.channel1)};
}

hmjp::RateFamily to_family(hmjp_family f) {
  switch (f) {
  case HMJP_CONSTANT: return hmjp::RateFamily::constant;
  case HMJP_WEIBULL: return hmjp::RateFamily::weibull;
  case HMJP_GOMPERTZ: return hmjp::RateFamily::gompertz;
  }
  throw std::invalid_argument("unknown rate family");
}

char *dup_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill_tpm(const hmjp::TransitionMatrix &m, double out[4]) {
  out[0] = m.p00;
  out[1] = m.p01;
  out[2] = m.p10;
  out[3] = m.p11;
}

} // namespace

extern "C" {

const char *hmjp_version(void) { return HMJP_VERSION_STRING; }

const char *hmjp_last_error(void) { return g_last_error.c_str(); }

void hmjp_string_free(char *s) { delete[] s; }

void hmjp_fit_options_init(hmjp_fit_options *opt) {
  if (!opt) return;
  opt->family = HMJP_CONSTANT;
  opt->iterations = 5000;
  opt->burn_in = 1000;
  opt->thin = 1;
  opt->prior_rate_a = 0.1;
  opt->prior_rate_b = 0.1;
  opt->prior_shape_alpha = 1.0;
  opt->prior_shape_beta = 1.0;
  opt->proposal_sd = 0.1;
  opt->max_attempts = 1000000;
  opt->seed = 1;
  opt->threads = 1;
  opt->adapt_proposal = 1;
}

hmjp_status hmjp_panel_read_csv(const char *path, hmjp_panel **out) {
  if (!path || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    auto *p = new hmjp_panel{hmjp::parse_panel_csv_file(path)};
    *out = p;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_grid_read_csv(const char *path, hmjp_panel **out) {
  if (!path || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    auto *p = new hmjp_panel{hmjp::parse_grid_csv_file(path)};
    *out = p;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_panel_write_csv(const hmjp_panel *p, const char *path,
                                 const char *manifest) {
  if (!p || !path) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    hmjp::write_panel_csv_file(p->impl, path, manifest ? manifest : "");
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

void hmjp_panel_free(hmjp_panel *p) { delete p; }

long hmjp_panel_num_subjects(const hmjp_panel *p) {
  return p ? static_cast<long>(p->impl.subjects.size()) : 0;
}

long hmjp_panel_num_observations(const hmjp_panel *p) {
  return p ? p->impl.num_observations() : 0;
}

long hmjp_panel_num_intervals(const hmjp_panel *p) {
  return p ? p->impl.num_intervals() : 0;
}

hmjp_status hmjp_panel_validate(const hmjp_panel *p, char **report,
                                int *n_violations) {
  if (!p) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const hmjp::ValidationReport rep = hmjp::validate_panel(p->impl);
    if (report) *report = dup_string(hmjp::format_validation_report(rep));
    if (n_violations) *n_violations = static_cast<int>(rep.violations.size());
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_simulate_regular(const hmjp_model_spec *m, long subjects,
                                  long visits, double horizon, uint64_t seed,
                                  hmjp_panel **out) {
  if (!m || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const auto init = hmjp::make_initial_distribution(m->init_prob_state1);
    auto *p = new hmjp_panel{hmjp::simulate_panel_regular(
        to_channels(*m), subjects, visits, horizon, init, seed)};
    *out = p;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_simulate_on_grid(const hmjp_model_spec *m,
                                  const hmjp_panel *grid, uint64_t seed,
                                  hmjp_panel **out) {
  if (!m || !grid || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const auto init = hmjp::make_initial_distribution(m->init_prob_state1);
    std::vector<std::vector<double>> grids;
    grids.reserve(grid->impl.subjects.size());
    for (const auto &subject : grid->impl.subjects) grids.push_back(subject.times);
    auto panel = hmjp::simulate_panel(to_channels(*m), grids, init, seed);
    // keep the grid file's subject ids
    for (std::size_t j = 0; j < panel.subjects.size(); ++j)
      panel.subjects[j].id = grid->impl.subjects[j].id;
    *out = new hmjp_panel{std::move(panel)};
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_tpm_closed_form(double lambda0, double lambda1, double s,
                                 double t, double out[4]) {
  if (!out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    fill_tpm(hmjp::tpm_closed_form_constant(lambda0, lambda1, s, t), out);
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_tpm_quadrature(const hmjp_model_spec *m, double s, double t,
                                double rel_tol, double out[4]) {
  if (!m || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    fill_tpm(hmjp::tpm_quadrature(to_channels(*m), s, t, rel_tol), out);
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_fit(const hmjp_panel *p, const hmjp_fit_options *opt,
                     hmjp_chain **out) {
  if (!p || !opt || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    hmjp::Prior prior;
    for (int k = 0; k < 2; ++k) {
      prior.rate_a[k] = opt->prior_rate_a;
      prior.rate_b[k] = opt->prior_rate_b;
      prior.shape_alpha[k] = opt->prior_shape_alpha;
      prior.shape_beta[k] = opt->prior_shape_beta;
    }
    hmjp::ChainConfig cfg;
    cfg.iterations = opt->iterations;
    cfg.burn_in = opt->burn_in;
    cfg.thin = opt->thin;
    cfg.proposal_sd = opt->proposal_sd;
    cfg.seed = opt->seed;
    cfg.max_attempts = opt->max_attempts;
    cfg.threads = opt->threads;
    cfg.adapt_proposal = opt->adapt_proposal != 0;
    auto *c = new hmjp_chain{
        hmjp::run_chain(p->impl, to_family(opt->family), prior, cfg)};
    *out = c;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_exact_fit_constant(const hmjp_panel *p,
                                    double init_prob_state1, double est[2],
                                    double ci_low[2], double ci_high[2],
                                    int boundary[2]) {
  if (!p || !est) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const auto init = hmjp::make_initial_distribution(init_prob_state1);
    const hmjp::ExactFitResult r = hmjp::exact_fit_constant(p->impl, init);
    est[0] = r.lambda0;
    est[1] = r.lambda1;
    if (ci_low) {
      ci_low[0] = r.ci0_low;
      ci_low[1] = r.ci1_low;
    }
    if (ci_high) {
      ci_high[0] = r.ci0_high;
      ci_high[1] = r.ci1_high;
    }
    if (boundary) {
      boundary[0] = r.boundary0 ? 1 : 0;
      boundary[1] = r.boundary1 ? 1 : 0;
    }
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

void hmjp_chain_free(hmjp_chain *c) { delete c; }

long hmjp_chain_num_draws(const hmjp_chain *c) {
  return c ? static_cast<long>(c->impl.draws.size()) : 0;
}

hmjp_status hmjp_chain_write_csv(const hmjp_chain *c, const char *path,
                                 const char *manifest) {
  if (!c || !path) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    hmjp::write_chain_csv_file(c->impl, path, manifest ? manifest : "");
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_chain_read_csv(const char *path, hmjp_chain **out) {
  if (!path || !out) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    auto *c = new hmjp_chain{hmjp::read_chain_csv_file(path)};
    *out = c;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_chain_summary(const hmjp_chain *c, double median[4],
                               double lo95[4], double hi95[4]) {
  if (!c || !median || !lo95 || !hi95) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const auto rows = hmjp::posterior_summary(c->impl);
    for (int i = 0; i < 4; ++i) {
      median[i] = rows[i].median;
      lo95[i] = rows[i].lo95;
      hi95[i] = rows[i].hi95;
    }
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_chain_summary_write_csv(const hmjp_chain *c, const char *path,
                                         const char *manifest) {
  if (!c || !path) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    hmjp::write_summary_csv_file(hmjp::posterior_summary(c->impl), path,
                                 manifest ? manifest : "");
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_chain_density_write_csv(const hmjp_chain *c, int grid_points,
                                         const char *path, const char *manifest,
                                         int *n_degenerate) {
  if (!c || !path) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    std::vector<std::string> degenerate;
    hmjp::write_density_csv_file(c->impl, grid_points, path,
                                 manifest ? manifest : "", &degenerate);
    if (n_degenerate) *n_degenerate = static_cast<int>(degenerate.size());
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

hmjp_status hmjp_chain_truncation(const hmjp_chain *c, double out_frac[2]) {
  if (!c || !out_frac) return fail(HMJP_ERR_USAGE, "null argument");
  try {
    const hmjp::TruncationReport rep = hmjp::truncation_report(c->impl);
    out_frac[0] = rep.channel0;
    out_frac[1] = rep.channel1;
    return HMJP_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

} // extern "C"
