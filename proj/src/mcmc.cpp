#include "hmjp/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace hmjp {

void ChainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("burn-in must satisfy 0 <= burn_in < iterations");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (!(proposal_sd > 0.0)) throw std::invalid_argument("proposal sd must be > 0");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

ChannelPair channels_for(RateFamily family, const ThetaState &theta) {
  return ChannelPair{make_rate_params(family, theta.shape0, theta.rate0),
                     make_rate_params(family, theta.shape1, theta.rate1)};
}

std::vector<ObsInterval> flatten_intervals(const PanelDataset &panel) {
  std::vector<ObsInterval> intervals;
  intervals.reserve(static_cast<std::size_t>(panel.num_intervals()));
  for (const auto &subject : panel.subjects)
    for (std::size_t i = 1; i < subject.times.size(); ++i)
      intervals.push_back(ObsInterval{subject.times[i - 1], subject.times[i],
                                      subject.states[i - 1], subject.states[i]});
  return intervals;
}

namespace {

void parallel_for(long n, int threads,
                  const std::function<void(long, long)> &chunk_fn) {
  const int workers = static_cast<int>(std::min<long>(threads, n));
  if (workers <= 1) {
    chunk_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(chunk_fn, lo, hi);
  }
  for (auto &t : pool) t.join();
}

// Exposure integral of a unit-rate member of the family: G_shape(r, t).
double unit_exposure(RateFamily family, double shape, double r, double t) {
  return cumulative_hazard(make_rate_params(family, shape, 1.0), r, t);
}

struct ChannelStats {
  double n_events = 0.0;   // sum of eta
  double sum_log_tau = 0.0; // over eta == 1 (weibull)
  double sum_tau = 0.0;     // over eta == 1 (gompertz)
};

ChannelStats channel_stats(const AugmentedData &aug, int channel) {
  ChannelStats st;
  for (const auto &a : aug.intervals) {
    const HonestDraw &d = channel == 0 ? a.draw0 : a.draw1;
    if (!d.eta) continue;
    st.n_events += 1.0;
    st.sum_log_tau += std::log(d.tau);
    st.sum_tau += d.tau;
  }
  return st;
}

double exposure_sum(const AugmentedData &aug, int channel, RateFamily family,
                    double shape) {
  double total = 0.0;
  for (const auto &a : aug.intervals) {
    const HonestDraw &d = channel == 0 ? a.draw0 : a.draw1;
    total += unit_exposure(family, shape, d.tau, d.t_cur);
  }
  return total;
}

} // namespace

AugmentedData augment_all(const std::vector<ObsInterval> &intervals,
                          const ChannelPair &ch, std::uint64_t seed,
                          std::uint64_t iteration, long max_attempts,
                          int threads, const AugmentedData *previous) {
  const long n = static_cast<long>(intervals.size());
  if (previous && static_cast<long>(previous->intervals.size()) != n)
    throw std::invalid_argument("previous augmentation has a different interval count");
  AugmentedData out;
  out.intervals.resize(intervals.size());
  std::vector<unsigned char> kept(intervals.size(), 0);

  parallel_for(n, threads, [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      const ObsInterval &obs = intervals[static_cast<std::size_t>(i)];
      Rng rng = Rng::derive(seed, {STREAM_AUG, iteration, static_cast<std::uint64_t>(i)});
      try {
        out.intervals[static_cast<std::size_t>(i)] = sample_constrained_pair(
            ch, obs.t0, obs.t1, obs.from, obs.to, rng, max_attempts);
      } catch (const AugmentationExhausted &) {
        if (!previous) throw;
        out.intervals[static_cast<std::size_t>(i)] =
            previous->intervals[static_cast<std::size_t>(i)];
        kept[static_cast<std::size_t>(i)] = 1;
      }
    }
  });

  long trunc0 = 0, trunc1 = 0;
  for (std::size_t i = 0; i < out.intervals.size(); ++i) {
    const AugmentedInterval &a = out.intervals[i];
    // augmented-likelihood identity: the indicator entry selected by the
    // observed states must be exactly one
    if (indicator_tpm(a).entry(intervals[i].from, intervals[i].to) != 1.0)
      throw std::logic_error("augmented interval violates its state constraint");
    ++out.checks;
    if (kept[i]) {
      ++out.exhausted;
      out.total_attempts += max_attempts;
    } else {
      out.total_attempts += a.attempts;
    }
    if (!a.draw0.eta) ++trunc0;
    if (!a.draw1.eta) ++trunc1;
  }
  if (n > 0) {
    out.trunc_frac0 = static_cast<double>(trunc0) / static_cast<double>(n);
    out.trunc_frac1 = static_cast<double>(trunc1) / static_cast<double>(n);
  }
  return out;
}

double update_constant_channel(const AugmentedData &aug, int channel,
                               const Prior &prior, Rng &rng) {
  const ChannelStats st = channel_stats(aug, channel);
  const double exposure = exposure_sum(aug, channel, RateFamily::constant, 1.0);
  return rng.gamma(prior.rate_a[channel] + st.n_events,
                   prior.rate_b[channel] + exposure);
}

ShapeRateUpdate update_weibull_channel(const AugmentedData &aug, int channel,
                                       RateFamily family, double shape_cur,
                                       const Prior &prior, double proposal_sd,
                                       Rng &rng) {
  if (family == RateFamily::constant)
    throw std::invalid_argument("constant channels use update_constant_channel");
  if (!(shape_cur > 0.0)) throw std::invalid_argument("shape must be > 0");

  const double a = prior.rate_a[channel];
  const double b = prior.rate_b[channel];
  const double alpha = prior.shape_alpha[channel];
  const double beta = prior.shape_beta[channel];
  const ChannelStats st = channel_stats(aug, channel);

  const double exposure_cur = exposure_sum(aug, channel, family, shape_cur);

  ShapeRateUpdate upd;
  upd.shape = shape_cur;

  const double shape_prop = shape_cur * std::exp(proposal_sd * rng.normal());
  const double exposure_prop = exposure_sum(aug, channel, family, shape_prop);
  if (!std::isfinite(exposure_prop) || !std::isfinite(std::log(b + exposure_prop))) {
    upd.overflow = true;
  } else {
    // collapsed acceptance log-ratio; the log-normal proposal's Jacobian
    // turns the prior's (alpha - 1) log-shape coefficient into alpha
    const double coef_log = family == RateFamily::weibull ? alpha + st.n_events : alpha;
    const double coef_lin =
        family == RateFamily::weibull ? -beta + st.sum_log_tau : -beta + st.sum_tau;
    const double log_ratio =
        coef_log * (std::log(shape_prop) - std::log(shape_cur)) +
        coef_lin * (shape_prop - shape_cur) +
        (a + st.n_events) *
            (std::log(b + exposure_cur) - std::log(b + exposure_prop));
    if (std::isfinite(log_ratio) && std::log(rng.uniform01()) < log_ratio) {
      upd.shape = shape_prop;
      upd.accepted = true;
    }
  }

  const double exposure_final = upd.accepted ? exposure_prop : exposure_cur;
  upd.rate = rng.gamma(a + st.n_events, b + exposure_final);
  return upd;
}

double channel_log_posterior(const AugmentedData &aug, int channel,
                             RateFamily family, double shape, double rate,
                             const Prior &prior) {
  const double a = prior.rate_a[channel];
  const double b = prior.rate_b[channel];
  const double alpha = prior.shape_alpha[channel];
  const double beta = prior.shape_beta[channel];
  const ChannelStats st = channel_stats(aug, channel);
  const double exposure = exposure_sum(aug, channel, family, shape);
  double lp = (a - 1.0) * std::log(rate) - b * rate + st.n_events * std::log(rate) -
              rate * exposure;
  if (family != RateFamily::constant) {
    lp += (alpha - 1.0) * std::log(shape) - beta * shape;
    if (family == RateFamily::weibull)
      lp += st.n_events * std::log(shape) + (shape - 1.0) * st.sum_log_tau;
    else
      lp += shape * st.sum_tau;
  }
  return lp;
}

double channel_shape_log_marginal(const AugmentedData &aug, int channel,
                                  RateFamily family, double shape,
                                  const Prior &prior) {
  if (family == RateFamily::constant)
    throw std::invalid_argument("constant channels have no shape parameter");
  const double a = prior.rate_a[channel];
  const double b = prior.rate_b[channel];
  const double alpha = prior.shape_alpha[channel];
  const double beta = prior.shape_beta[channel];
  const ChannelStats st = channel_stats(aug, channel);
  const double exposure = exposure_sum(aug, channel, family, shape);
  double lm = (alpha - 1.0) * std::log(shape) - beta * shape -
              (a + st.n_events) * std::log(b + exposure);
  if (family == RateFamily::weibull)
    lm += st.n_events * std::log(shape) + (shape - 1.0) * st.sum_log_tau;
  else
    lm += shape * st.sum_tau;
  return lm;
}

SweepResult mcmc_sweep(const std::vector<ObsInterval> &intervals,
                       RateFamily family, const ThetaState &theta,
                       const Prior &prior, double sd0, double sd1,
                       std::uint64_t seed, std::uint64_t iteration,
                       long max_attempts, int threads,
                       const AugmentedData *previous) {
  SweepResult res;
  res.aug = augment_all(intervals, channels_for(family, theta), seed, iteration,
                        max_attempts, threads, previous);
  Rng rng = Rng::derive(seed, {STREAM_PARAM, iteration});
  res.theta = theta;
  if (family == RateFamily::constant) {
    res.theta.rate0 = update_constant_channel(res.aug, 0, prior, rng);
    res.theta.rate1 = update_constant_channel(res.aug, 1, prior, rng);
  } else {
    const ShapeRateUpdate u0 =
        update_weibull_channel(res.aug, 0, family, theta.shape0, prior, sd0, rng);
    res.theta.shape0 = u0.shape;
    res.theta.rate0 = u0.rate;
    res.accept0 = u0.accepted ? 1 : 0;
    res.overflow0 = u0.overflow ? 1 : 0;
    const ShapeRateUpdate u1 =
        update_weibull_channel(res.aug, 1, family, theta.shape1, prior, sd1, rng);
    res.theta.shape1 = u1.shape;
    res.theta.rate1 = u1.rate;
    res.accept1 = u1.accepted ? 1 : 0;
    res.overflow1 = u1.overflow ? 1 : 0;
  }
  return res;
}

ChainOutput run_chain(const PanelDataset &panel, RateFamily model,
                      const Prior &prior, const ChainConfig &cfg) {
  cfg.validate();
  const std::vector<ObsInterval> intervals = flatten_intervals(panel);
  if (intervals.empty())
    throw std::invalid_argument("panel has no observation intervals");

  const CrudeEstimates crude = crude_initial_estimates(panel);
  ThetaState theta;
  // start at the homogeneous submodel: unit weibull shape, near-zero
  // gompertz shape (a unit gompertz shape explodes on long horizons)
  theta.shape0 = theta.shape1 = model == RateFamily::gompertz ? 1e-3 : 1.0;
  theta.rate0 = crude.lambda0;
  theta.rate1 = crude.lambda1;

  ChainOutput out;
  out.family = model;
  out.seed = cfg.seed;
  out.iterations = cfg.iterations;
  out.burn_in = cfg.burn_in;
  out.thin = cfg.thin;
  out.initial_rate0 = crude.lambda0;
  out.initial_rate1 = crude.lambda1;
  out.draws.reserve(
      static_cast<std::size_t>((cfg.iterations - cfg.burn_in + cfg.thin - 1) / cfg.thin));

  double log_sd[2] = {std::log(cfg.proposal_sd), std::log(cfg.proposal_sd)};
  const double sd_min = std::log(1e-3), sd_max = std::log(5.0);
  AugmentedData previous;
  bool have_previous = false;

  for (long r = 1; r <= cfg.iterations; ++r) {
    SweepResult res = mcmc_sweep(intervals, model, theta, prior,
                                 std::exp(log_sd[0]), std::exp(log_sd[1]),
                                 cfg.seed, static_cast<std::uint64_t>(r),
                                 cfg.max_attempts, cfg.threads,
                                 have_previous ? &previous : nullptr);
    theta = res.theta;

    const double exh_frac = intervals.empty()
                                ? 0.0
                                : static_cast<double>(res.aug.exhausted) /
                                      static_cast<double>(intervals.size());
    if (exh_frac > cfg.exhaustion_abort_fraction)
      throw ChainAborted("augmentation exhausted on " +
                         std::to_string(res.aug.exhausted) + " of " +
                         std::to_string(intervals.size()) +
                         " intervals at iteration " + std::to_string(r));

    out.total_attempts += res.aug.total_attempts;
    out.exhausted_intervals += res.aug.exhausted;
    out.aug_checks += res.aug.checks;
    out.overflow_rejects += res.overflow0 + res.overflow1;
    if (model != RateFamily::constant) {
      ++out.shape_updates[0];
      ++out.shape_updates[1];
      out.shape_accepts[0] += res.accept0;
      out.shape_accepts[1] += res.accept1;
    }

    if (cfg.adapt_proposal && model != RateFamily::constant && r <= cfg.burn_in) {
      const double step = 1.0 / std::pow(static_cast<double>(r), 0.6);
      log_sd[0] = std::clamp(log_sd[0] + step * (res.accept0 - 0.3), sd_min, sd_max);
      log_sd[1] = std::clamp(log_sd[1] + step * (res.accept1 - 0.3), sd_min, sd_max);
    }

    if (r > cfg.burn_in && (r - cfg.burn_in - 1) % cfg.thin == 0) {
      ChainRecord rec;
      rec.iteration = r;
      rec.theta = theta;
      rec.accept0 = res.accept0;
      rec.accept1 = res.accept1;
      rec.trunc0 = res.aug.trunc_frac0;
      rec.trunc1 = res.aug.trunc_frac1;
      out.draws.push_back(rec);
    }

    previous = std::move(res.aug);
    have_previous = true;
  }

  out.proposal_sd_final[0] = std::exp(log_sd[0]);
  out.proposal_sd_final[1] = std::exp(log_sd[1]);
  return out;
}

std::vector<ParameterSummary> posterior_summary(const ChainOutput &chain) {
  if (chain.draws.empty())
    throw std::invalid_argument("posterior summary of an empty chain");
  const char *names[4] = {"gamma0", "lambda0", "gamma1", "lambda1"};
  std::vector<ParameterSummary> rows;
  rows.reserve(4);
  for (int p = 0; p < 4; ++p) {
    std::vector<double> values;
    values.reserve(chain.draws.size());
    for (const auto &rec : chain.draws) {
      const double v = p == 0   ? rec.theta.shape0
                       : p == 1 ? rec.theta.rate0
                       : p == 2 ? rec.theta.shape1
                                : rec.theta.rate1;
      values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    ParameterSummary s;
    s.name = names[p];
    s.median = quantile_type7_sorted(values, 0.5);
    s.lo95 = quantile_type7_sorted(values, 0.025);
    s.hi95 = quantile_type7_sorted(values, 0.975);
    rows.push_back(std::move(s));
  }
  return rows;
}

TruncationReport truncation_report(const ChainOutput &chain) {
  if (chain.draws.empty())
    throw std::invalid_argument("truncation report of an empty chain");
  TruncationReport rep;
  for (const auto &rec : chain.draws) {
    rep.channel0 += rec.trunc0;
    rep.channel1 += rec.trunc1;
  }
  rep.channel0 /= static_cast<double>(chain.draws.size());
  rep.channel1 /= static_cast<double>(chain.draws.size());
  return rep;
}

} // namespace hmjp
