// Command-line front end. Talks to the library exclusively through the C
// interface in hmjp/hmjp.h.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hmjp/hmjp.h"

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int report_failure(hmjp_status status) {
  std::fprintf(stderr, "error: %s\n", hmjp_last_error());
  return static_cast<int>(status);
}

struct ModelFlags {
  std::string model = "constant";
  double gamma0 = 1.0, lambda0 = 0.1;
  double gamma1 = 1.0, lambda1 = 0.1;
  double init = 0.5;

  void add_to(CLI::App *cmd, bool with_init) {
    cmd->add_option("--model", model, "rate family: constant|weibull|gompertz")
        ->check(CLI::IsMember({"constant", "weibull", "gompertz"}))
        ->capture_default_str();
    cmd->add_option("--gamma0", gamma0, "shape of the 0->1 channel")->capture_default_str();
    cmd->add_option("--lambda0", lambda0, "rate of the 0->1 channel")->capture_default_str();
    cmd->add_option("--gamma1", gamma1, "shape of the 1->0 channel")->capture_default_str();
    cmd->add_option("--lambda1", lambda1, "rate of the 1->0 channel")->capture_default_str();
    if (with_init)
      cmd->add_option("--init", init, "P(first observed state is 1)")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
  }

  hmjp_family family() const {
    if (model == "weibull") return HMJP_WEIBULL;
    if (model == "gompertz") return HMJP_GOMPERTZ;
    return HMJP_CONSTANT;
  }

  hmjp_model_spec spec() const {
    hmjp_model_spec m;
    m.channel0 = hmjp_rate_spec{family(), family() == HMJP_CONSTANT ? 1.0 : gamma0, lambda0};
    m.channel1 = hmjp_rate_spec{family(), family() == HMJP_CONSTANT ? 1.0 : gamma1, lambda1};
    m.init_prob_state1 = init;
    return m;
  }

  void describe(std::ostringstream &man) const {
    man << "model=" << model << "\n";
    if (model != "constant")
      man << "gamma0=" << fmt(gamma0) << "\ngamma1=" << fmt(gamma1) << "\n";
    man << "lambda0=" << fmt(lambda0) << "\nlambda1=" << fmt(lambda1) << "\n";
  }
};

int cmd_simulate(const ModelFlags &model, long subjects, long visits,
                 double horizon, const std::string &grid_path,
                 std::uint64_t seed, const std::string &out_path) {
  hmjp_panel *panel = nullptr;
  std::ostringstream man;
  man << "tool=hmjp " << hmjp_version() << "\nsubcommand=simulate\n";
  model.describe(man);
  man << "init=" << fmt(model.init) << "\nseed=" << seed << "\n";

  hmjp_status status;
  if (!grid_path.empty()) {
    hmjp_panel *grid = nullptr;
    status = hmjp_grid_read_csv(grid_path.c_str(), &grid);
    if (status != HMJP_OK) return report_failure(status);
    const hmjp_model_spec spec = model.spec();
    status = hmjp_simulate_on_grid(&spec, grid, seed, &panel);
    hmjp_panel_free(grid);
    man << "grid=" << grid_path << "\n";
  } else {
    const hmjp_model_spec spec = model.spec();
    status = hmjp_simulate_regular(&spec, subjects, visits, horizon, seed, &panel);
    man << "subjects=" << subjects << "\nvisits=" << visits
        << "\nhorizon=" << fmt(horizon) << "\n";
  }
  if (status != HMJP_OK) return report_failure(status);

  if (visits == 1 && grid_path.empty())
    std::fprintf(stderr, "warning: single-visit subjects are unusable for fitting\n");

  status = hmjp_panel_write_csv(panel, out_path.c_str(), man.str().c_str());
  const long rows = hmjp_panel_num_observations(panel);
  hmjp_panel_free(panel);
  if (status != HMJP_OK) return report_failure(status);
  std::printf("wrote %s (%ld observations)\n", out_path.c_str(), rows);
  return 0;
}

int cmd_fit(const std::string &data_path, const ModelFlags &model,
            const hmjp_fit_options &opt, const std::string &prefix) {
  hmjp_panel *panel = nullptr;
  hmjp_status status = hmjp_panel_read_csv(data_path.c_str(), &panel);
  if (status != HMJP_OK) return report_failure(status);

  hmjp_chain *chain = nullptr;
  status = hmjp_fit(panel, &opt, &chain);
  hmjp_panel_free(panel);
  if (status != HMJP_OK) return report_failure(status);

  std::ostringstream man;
  man << "tool=hmjp " << hmjp_version() << "\nsubcommand=fit\n"
      << "data=" << data_path << "\nmodel=" << model.model << "\n"
      << "iterations=" << opt.iterations << "\nburnin=" << opt.burn_in
      << "\nthin=" << opt.thin << "\nprior_a=" << fmt(opt.prior_rate_a)
      << "\nprior_b=" << fmt(opt.prior_rate_b)
      << "\nprior_alpha=" << fmt(opt.prior_shape_alpha)
      << "\nprior_beta=" << fmt(opt.prior_shape_beta)
      << "\nproposal_sd=" << fmt(opt.proposal_sd)
      << "\nadapt=" << (opt.adapt_proposal ? 1 : 0)
      << "\nmax_attempts=" << opt.max_attempts << "\nseed=" << opt.seed << "\n";

  const std::string chain_path = prefix + "_chain.csv";
  const std::string summary_path = prefix + "_summary.csv";
  status = hmjp_chain_write_csv(chain, chain_path.c_str(), man.str().c_str());
  if (status == HMJP_OK)
    status = hmjp_chain_summary_write_csv(chain, summary_path.c_str(), man.str().c_str());
  if (status != HMJP_OK) {
    hmjp_chain_free(chain);
    return report_failure(status);
  }

  double median[4], lo[4], hi[4], trunc[2];
  hmjp_chain_summary(chain, median, lo, hi);
  hmjp_chain_truncation(chain, trunc);
  const char *names[4] = {"gamma0", "lambda0", "gamma1", "lambda1"};
  std::printf("posterior medians (95%% credible intervals):\n");
  for (int i = 0; i < 4; ++i)
    std::printf("  %-8s %.6g (%.6g, %.6g)\n", names[i], median[i], lo[i], hi[i]);
  std::printf("truncated honest-time fractions: channel0 %.4f, channel1 %.4f\n",
              trunc[0], trunc[1]);
  std::printf("wrote %s and %s\n", chain_path.c_str(), summary_path.c_str());
  hmjp_chain_free(chain);
  return 0;
}

int cmd_summarize(const std::string &chain_path, int grid_points,
                  const std::string &prefix) {
  hmjp_chain *chain = nullptr;
  hmjp_status status = hmjp_chain_read_csv(chain_path.c_str(), &chain);
  if (status != HMJP_OK) return report_failure(status);

  std::ostringstream man;
  man << "tool=hmjp " << hmjp_version() << "\nsubcommand=summarize\n"
      << "chain=" << chain_path << "\ngrid_points=" << grid_points << "\n";

  const std::string summary_path = prefix + "_summary.csv";
  const std::string density_path = prefix + "_density.csv";
  status = hmjp_chain_summary_write_csv(chain, summary_path.c_str(), man.str().c_str());
  int degenerate = 0;
  if (status == HMJP_OK)
    status = hmjp_chain_density_write_csv(chain, grid_points, density_path.c_str(),
                                          man.str().c_str(), &degenerate);
  hmjp_chain_free(chain);
  if (status != HMJP_OK) return report_failure(status);
  if (degenerate > 0)
    std::fprintf(stderr, "warning: %d parameter(s) degenerate (zero variance), "
                         "flagged in %s\n", degenerate, density_path.c_str());
  std::printf("wrote %s and %s\n", summary_path.c_str(), density_path.c_str());
  return 0;
}

int cmd_validate(const std::string &data_path) {
  hmjp_panel *panel = nullptr;
  hmjp_status status = hmjp_panel_read_csv(data_path.c_str(), &panel);
  if (status != HMJP_OK) return report_failure(status);
  char *report = nullptr;
  int violations = 0;
  status = hmjp_panel_validate(panel, &report, &violations);
  hmjp_panel_free(panel);
  if (status != HMJP_OK) return report_failure(status);
  std::printf("%s", report);
  hmjp_string_free(report);
  if (violations > 0) {
    std::fprintf(stderr, "error: %d violation(s) found\n", violations);
    return static_cast<int>(HMJP_ERR_DATA);
  }
  return 0;
}

int cmd_tpm(const ModelFlags &model, double s, double t, std::string method,
            double rel_tol) {
  if (method.empty())
    method = model.family() == HMJP_CONSTANT ? "closed" : "quadrature";
  if (method == "closed" && model.family() != HMJP_CONSTANT) {
    std::fprintf(stderr, "error: closed-form evaluation requires --model constant\n");
    return static_cast<int>(HMJP_ERR_USAGE);
  }
  double p[4];
  hmjp_status status;
  if (method == "closed") {
    status = hmjp_tpm_closed_form(model.lambda0, model.lambda1, s, t, p);
  } else {
    const hmjp_model_spec spec = model.spec();
    status = hmjp_tpm_quadrature(&spec, s, t, rel_tol, p);
  }
  if (status != HMJP_OK) return report_failure(status);
  std::printf("# method=%s from=%s to=%s\n", method.c_str(), fmt(s).c_str(),
              fmt(t).c_str());
  std::printf("p00,p01,p10,p11\n%s,%s,%s,%s\n", fmt(p[0]).c_str(),
              fmt(p[1]).c_str(), fmt(p[2]).c_str(), fmt(p[3]).c_str());
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"two-state Markov jump process estimation from panel data"};
  app.set_version_flag("--version", std::string("hmjp ") + hmjp_version());
  app.set_config("--config", "", "read defaults from a key=value file");
  app.require_subcommand(1);

  // simulate
  auto *sim = app.add_subcommand("simulate", "simulate a panel dataset");
  ModelFlags sim_model;
  sim_model.add_to(sim, true);
  long subjects = 100, visits = 50;
  double horizon = 100.0;
  std::string grid_path, sim_out = "panel.csv";
  std::uint64_t sim_seed = 1;
  auto *subjects_opt = sim->add_option("--subjects", subjects, "number of subjects")
                           ->capture_default_str();
  auto *visits_opt = sim->add_option("--visits", visits, "visits per subject (regular grid)")
                         ->capture_default_str();
  auto *horizon_opt = sim->add_option("--horizon", horizon, "time horizon of the regular grid")
                          ->capture_default_str();
  sim->add_option("--grid", grid_path,
                  "CSV of visit times to reuse (subject,time[,state])")
      ->excludes(subjects_opt)
      ->excludes(visits_opt)
      ->excludes(horizon_opt);
  sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  sim->add_option("--out", sim_out, "output panel CSV")->capture_default_str();

  // fit
  auto *fit = app.add_subcommand("fit", "run the data-augmentation sampler");
  ModelFlags fit_model;
  std::string fit_data, fit_prefix = "fit";
  hmjp_fit_options opt;
  hmjp_fit_options_init(&opt);
  bool no_adapt = false;
  fit->add_option("--data", fit_data, "panel CSV")->required();
  fit->add_option("--model", fit_model.model, "constant|weibull|gompertz")
      ->check(CLI::IsMember({"constant", "weibull", "gompertz"}))
      ->capture_default_str();
  fit->add_option("--iters", opt.iterations, "total iterations")->capture_default_str();
  fit->add_option("--burnin", opt.burn_in, "burn-in iterations")->capture_default_str();
  fit->add_option("--thin", opt.thin, "thinning stride")->capture_default_str();
  fit->add_option("--prior-a", opt.prior_rate_a, "Gamma prior shape for rates")
      ->capture_default_str();
  fit->add_option("--prior-b", opt.prior_rate_b, "Gamma prior rate for rates")
      ->capture_default_str();
  fit->add_option("--prior-alpha", opt.prior_shape_alpha, "Gamma prior shape for shapes")
      ->capture_default_str();
  fit->add_option("--prior-beta", opt.prior_shape_beta, "Gamma prior rate for shapes")
      ->capture_default_str();
  fit->add_option("--proposal-sd", opt.proposal_sd, "log-normal proposal scale")
      ->capture_default_str();
  fit->add_option("--max-attempts", opt.max_attempts, "rejection cap per interval")
      ->capture_default_str();
  fit->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  fit->add_option("--threads", opt.threads, "augmentation workers (results unchanged)")
      ->capture_default_str();
  fit->add_flag("--no-adapt", no_adapt, "disable burn-in proposal adaptation");
  fit->add_option("--out-prefix", fit_prefix, "prefix for chain/summary CSVs")
      ->capture_default_str();

  // summarize
  auto *summ = app.add_subcommand("summarize", "summaries and density grids from a chain");
  std::string summ_chain, summ_prefix = "summary";
  int grid_points = 512;
  summ->add_option("--chain", summ_chain, "chain CSV")->required();
  summ->add_option("--grid-points", grid_points, "density grid resolution")
      ->capture_default_str();
  summ->add_option("--out-prefix", summ_prefix, "prefix for output CSVs")
      ->capture_default_str();

  // validate
  auto *val = app.add_subcommand("validate", "check a panel CSV and print statistics");
  std::string val_data;
  val->add_option("--data", val_data, "panel CSV")->required();

  // tpm
  auto *tpm = app.add_subcommand("tpm", "print a transition probability matrix");
  ModelFlags tpm_model;
  tpm_model.add_to(tpm, false);
  double from_time = 0.0, to_time = 0.0, rel_tol = 1e-10;
  std::string method;
  tpm->add_option("--from-time", from_time, "interval start s")->required();
  tpm->add_option("--to-time", to_time, "interval end t")->required();
  tpm->add_option("--method", method, "closed|quadrature (default by model)")
      ->check(CLI::IsMember({"closed", "quadrature"}));
  tpm->add_option("--rel-tol", rel_tol, "quadrature tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return static_cast<int>(HMJP_ERR_USAGE);
  }

  if (sim->parsed())
    return cmd_simulate(sim_model, subjects, visits, horizon, grid_path,
                        sim_seed, sim_out);
  if (fit->parsed()) {
    opt.family = fit_model.family();
    opt.adapt_proposal = no_adapt ? 0 : 1;
    return cmd_fit(fit_data, fit_model, opt, fit_prefix);
  }
  if (summ->parsed()) return cmd_summarize(summ_chain, grid_points, summ_prefix);
  if (val->parsed()) return cmd_validate(val_data);
  if (tpm->parsed()) return cmd_tpm(tpm_model, from_time, to_time, method, rel_tol);
  return static_cast<int>(HMJP_ERR_USAGE);
}
